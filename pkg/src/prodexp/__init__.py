"""Exact desk-scale analysis of tensor product codes over GF(2^t)."""

from .code import LinearCode, dual, full_code, min_distance, random_code, random_subcode, rep_code, zero_code
from .config import Caps, ExperimentConfig
from .errors import CapExceeded, NotInCode, ParseError, PropertyViolation
from .expansion import best_decomposition, eps_max, f_bound, gamma, ltc_decompose, rho_exact
from .field import Field, make_field
from .grid import CellSet, Grid, LineId, eps_closure, lines_in
from .matrix import Mat
from .product import CodeTuple, GridWord, is_extendable, is_inner_generated, sum_code_basis, tensor_parity
from .sheaf import build_complex, eta, rho_via_sheaf

__version__ = "0.1.0"

__all__ = [
    "Caps", "CapExceeded", "CellSet", "CodeTuple", "ExperimentConfig", "Field", "Grid", "GridWord",
    "LineId", "LinearCode", "Mat", "NotInCode", "ParseError", "PropertyViolation",
    "best_decomposition", "build_complex", "dual", "eps_closure", "eps_max", "eta", "f_bound",
    "full_code", "gamma", "is_extendable", "is_inner_generated", "lines_in", "ltc_decompose",
    "make_field", "min_distance", "random_code", "random_subcode", "rep_code", "rho_exact",
    "rho_via_sheaf", "sum_code_basis", "tensor_parity", "zero_code",
]
