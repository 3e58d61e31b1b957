"""Product and sum codes of a tuple of codes, extendable and inner-generated
sets, good substitutions and maximal-extendability certificates."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from . import matrix as mx
from .code import LinearCode, dual, full_code, zero_code
from .errors import CapExceeded, DimensionMismatch, FieldMismatch, PropertyViolation
from .field import Field, make_field
from .grid import CellSet, Grid, LineId, lines_in
from .matrix import Mat

GENERIC_FIELD_DEGREE = 62
GENERIC_TRIALS = 3
ALL_S_MAX_CELLS = 24
DEFAULT_SAMPLED_SUBSETS = 2**12


# ---------------------------------------------------------------------------
# Tuples and grid words
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CodeTuple:
    """A collection (C_1, ..., C_D) of codes of common length and field."""

    codes: tuple[LinearCode, ...]

    def __post_init__(self):
        codes = tuple(self.codes)
        if not codes:
            raise DimensionMismatch("a code tuple needs D >= 1 codes")
        if len({c.n for c in codes}) != 1:
            raise DimensionMismatch(f"code lengths differ: {[c.n for c in codes]}")
        if len({c.field for c in codes}) != 1:
            raise FieldMismatch("codes live over different fields")
        object.__setattr__(self, "codes", codes)

    @property
    def n(self) -> int:
        return self.codes[0].n

    @property
    def D(self) -> int:
        return len(self.codes)

    @property
    def field(self) -> Field:
        return self.codes[0].field

    @property
    def grid(self) -> Grid:
        return Grid(self.n, self.D)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c.k for c in self.codes)

    def __getitem__(self, i):
        return self.codes[i]

    def __iter__(self):
        return iter(self.codes)

    def __len__(self):
        return self.D

    def __eq__(self, other):
        return isinstance(other, CodeTuple) and self.codes == other.codes

    def __hash__(self):
        return hash(self.codes)

    def __repr__(self):
        return f"CodeTuple(n={self.n}, dims={self.dims}, q={self.field.q})"

    def dual(self) -> "CodeTuple":
        return CodeTuple(tuple(dual(c) for c in self.codes))

    def is_degenerate(self) -> bool:
        return any(c.is_full() for c in self.codes)

    def replace(self, i: int, code: LinearCode) -> "CodeTuple":
        codes = list(self.codes)
        codes[i] = code
        return CodeTuple(tuple(codes))

    def sub(self, indices: Sequence[int]) -> "CodeTuple":
        return CodeTuple(tuple(self.codes[i] for i in indices))

    # cached derived matrices ------------------------------------------------------
    @functools.cached_property
    def parity(self) -> Mat:
        return stacked_parity(self.n, [c.par for c in self.codes])

    @functools.cached_property
    def parity_row_lines(self) -> np.ndarray:
        return stacked_row_lines(self.n, [c.par.rows for c in self.codes])

    @functools.cached_property
    def sum_parity(self) -> Mat:
        """A basis of C_1^⊥ ⊗ ... ⊗ C_D^⊥, whose kernel is the sum code."""
        dual_parity = stacked_parity(self.n, [c.gen for c in self.codes])
        if dual_parity.rows == 0:
            return Mat.identity(self.field, self.grid.size)
        return mx.kernel_basis(dual_parity)

    @functools.cached_property
    def line_bases(self) -> list[tuple[LineId, Mat]]:
        """For each line (direction-major), a basis of C_ℓ."""
        grid = self.grid
        out = []
        for i, C in enumerate(self.codes):
            for line in grid.lines(i):
                out.append((line, _place_on_line(grid, C.gen, grid.line_cells(line))))
        return out


def _place_on_line(grid: Grid, G: Mat, cells: np.ndarray) -> Mat:
    out = np.zeros((G.rows, grid.size), dtype=G.field.dtype)
    out[:, cells] = G.a
    return Mat(G.field, out)


def stacked_parity(n: int, pars: Sequence[Mat]) -> Mat:
    """Blocks ⊗_i M_{i,j} stacked over j, with M_{j,j} = pars[j], M_{i,j} = I_n."""
    field = pars[0].field
    D = len(pars)
    ident = Mat.identity(field, n)
    blocks = []
    for j in range(D):
        factors = [pars[j] if i == j else ident for i in range(D)]
        blocks.append(mx.kron_all(factors) if D > 1 else pars[0])
    return Mat(field, np.concatenate([b.a for b in blocks], axis=0).reshape(-1, n ** D))


def stacked_row_lines(n: int, row_counts: Sequence[int]) -> np.ndarray:
    """For each row of :func:`stacked_parity`: (direction, line position)."""
    D = len(row_counts)
    out = []
    for j, m in enumerate(row_counts):
        shape = tuple(m if i == j else n for i in range(D))
        if m == 0:
            continue
        idx = np.indices(shape).reshape(D, -1)
        base = np.delete(idx, j, axis=0)
        if D > 1:
            pos = np.ravel_multi_index(tuple(base), (n,) * (D - 1))
        else:
            pos = np.zeros(idx.shape[1], dtype=np.int64)
        out.append(np.stack([np.full_like(pos, j), pos], axis=1))
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(out, axis=0)


@dataclass(frozen=True, eq=False)
class GridWord:
    """A word c ∈ F_q^{[n]^D}; ``values[i]`` is the symbol at cell index i."""

    grid: Grid
    field: Field
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=self.field.dtype).reshape(-1)
        if v.shape[0] != self.grid.size:
            raise DimensionMismatch(f"word has {v.shape[0]} symbols, grid has {self.grid.size} cells")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def zero(cls, grid: Grid, field: Field) -> "GridWord":
        return cls(grid, field, np.zeros(grid.size, dtype=np.int64))

    def __add__(self, other: "GridWord") -> "GridWord":
        return GridWord(self.grid, self.field, self.values ^ other.values)

    __sub__ = __add__

    def __eq__(self, other):
        return (
            isinstance(other, GridWord)
            and self.grid == other.grid
            and bool(np.all(self.values == other.values))
        )

    def __hash__(self):
        return hash((self.grid, tuple(int(v) for v in self.values)))

    def weight(self) -> int:
        return int(np.count_nonzero(self.values))

    def support(self) -> CellSet:
        return CellSet.from_indices(self.grid, np.flatnonzero(self.values))

    def line(self, direction: int, position: int) -> np.ndarray:
        return self.values[self.grid.direction_cells(direction)[position]]

    def tolist(self) -> list[int]:
        return [int(v) for v in self.values]


def line_weights(x: GridWord) -> tuple[int, ...]:
    """(|x|_1, ..., |x|_D): per direction, the number of lines where x ≠ 0."""
    return tuple(
        int(np.count_nonzero(np.any(x.values[x.grid.direction_cells(i)] != 0, axis=1)))
        for i in range(x.grid.D)
    )


# ---------------------------------------------------------------------------
# Product and sum codes
# ---------------------------------------------------------------------------

def tensor_parity(tup: CodeTuple) -> Mat:
    """Parity-check matrix of C_1 ⊗ ... ⊗ C_D; column index = cell index."""
    return tup.parity


def product_code(tup: CodeTuple) -> LinearCode:
    if tup.parity.rows == 0:
        return full_code(tup.grid.size, tup.field)
    return LinearCode.from_parity(tup.parity)


def direction_basis(tup: CodeTuple, i: int) -> Mat:
    """Basis of C^{(i)}: a copy of gen(C_i) on every direction-i line."""
    rows = [B for line, B in tup.line_bases if line.direction == i]
    return mx.stack_rows(rows) if rows else Mat.zeros(tup.field, 0, tup.grid.size)


def sum_code_basis(tup: CodeTuple, check: bool = True) -> Mat:
    """Basis of C_1 ⊞ ... ⊞ C_D = C^{(1)} + ... + C^{(D)}.

    With ``check`` the result is compared against the dual of
    C_1^⊥ ⊗ ... ⊗ C_D^⊥, computed from the stacked parity of the dual tuple.
    """
    stacked = mx.stack_rows([direction_basis(tup, i) for i in range(tup.D)])
    B = mx.rref(stacked)[0] if stacked.rows else stacked
    if check:
        P = tup.sum_parity
        K = mx.kernel_basis(P) if P.rows else Mat.identity(tup.field, tup.grid.size)
        if not mx.same_rowspace(B, K) and not (B.rows == 0 and K.rows == 0):
            raise PropertyViolation("sum code differs from the dual of the product of duals")
    return B


def sum_code(tup: CodeTuple) -> LinearCode:
    B = sum_code_basis(tup, check=False)
    if B.rows == 0:
        return zero_code(tup.grid.size, tup.field)
    return LinearCode.from_generator(B)


# ---------------------------------------------------------------------------
# H_S and H^S
# ---------------------------------------------------------------------------

def _rows_inside(tup_rows: np.ndarray, grid: Grid, S: CellSet) -> list[int]:
    """Rows whose line lies inside S (see :func:`submatrix_HupS`)."""
    inside = {(line.direction, grid.line_position(line)) for line in lines_in(S)}
    return [r for r, (d, p) in enumerate(tup_rows) if (int(d), int(p)) in inside]


def _cols(S: CellSet) -> list[int]:
    return S.indices()


def submatrix_HS(tup: CodeTuple, S: CellSet) -> Mat:
    """Columns of the stacked parity H indexed by S."""
    return mx.select_columns(tup.parity, _cols(S))


def submatrix_HupS(tup: CodeTuple, S: CellSet) -> Mat:
    """Rows of H_S for the checks involving only symbols of S.

    A check on line ℓ involves every symbol of ℓ in the indeterminate
    parity-check matrix, so the retained rows are those of the lines
    contained in S.
    """
    rows = _rows_inside(tup.parity_row_lines, tup.grid, S)
    return mx.select_rows(submatrix_HS(tup, S), rows)


def _HupS_raw(H: Mat, row_lines: np.ndarray, grid: Grid, S: CellSet) -> Mat:
    rows = _rows_inside(row_lines, grid, S)
    return mx.select_rows(mx.select_columns(H, _cols(S)), rows)


@dataclass(frozen=True)
class ExtendabilityData:
    projection_dim: int  # dim C|_S
    local_dim: int  # dim ker H^S

    @property
    def extendable(self) -> bool:
        return self.projection_dim == self.local_dim


def extendability_data(tup: CodeTuple, S: CellSet) -> ExtendabilityData:
    H = tup.parity
    rk = mx.rank(H)
    comp = S.complement()
    rk_out = mx.rank(mx.select_columns(H, comp.indices()))
    proj = len(S) - rk + rk_out
    local = len(S) - mx.rank(submatrix_HupS(tup, S))
    if proj > local:
        raise PropertyViolation("projection of the product code exceeds the local code")
    return ExtendabilityData(proj, local)


def is_extendable(tup: CodeTuple, S: CellSet) -> bool:
    """Every local codeword on S (checks along lines inside S) extends to a
    codeword of C_1 ⊗ ... ⊗ C_D."""
    return extendability_data(tup, S).extendable


def lines_code_basis(tup: CodeTuple, M: CellSet) -> Mat:
    """Basis rows of Σ_{ℓ ⊆ M} C_ℓ (not reduced)."""
    inside = set(lines_in(M))
    rows = [B for line, B in tup.line_bases if line in inside and B.rows]
    return mx.stack_rows(rows) if rows else Mat.zeros(tup.field, 0, tup.grid.size)


def inner_generation_dims(tup: CodeTuple, M: CellSet) -> tuple[int, int]:
    """(dim Σ_{ℓ⊆M} C_ℓ, dim (C_1 ⊞ ... ⊞ C_D) ∩ F_q^M)."""
    cols = M.indices()
    Hs = mx.select_columns(tup.sum_parity, cols)
    restricted = len(cols) - mx.rank(Hs)
    generated = mx.rank(lines_code_basis(tup, M))
    if generated > restricted:
        raise PropertyViolation("line codes inside M escape the sum code")
    return generated, restricted


def is_inner_generated(tup: CodeTuple, M: CellSet) -> bool:
    """Every sum-code word supported in M is a sum of line codewords along
    lines contained in M."""
    generated, restricted = inner_generation_dims(tup, M)
    return generated == restricted


def duality_check(tup: CodeTuple, M: CellSet) -> bool:
    """M inner-generated for ⊞C_i  iff  M extendable in ⊗C_i^⊥."""
    ig = is_inner_generated(tup, M)
    ext = is_extendable(tup.dual(), M)
    if ig != ext:
        raise PropertyViolation(f"duality fails on M={M.coords()}: inner-generated={ig}, extendable={ext}")
    return ig


# ---------------------------------------------------------------------------
# Generic ranks and good substitutions
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=64)
def _generic_parities(n: int, ms: tuple[int, ...], trials: int, seed: int) -> tuple[Mat, ...]:
    field = make_field(GENERIC_FIELD_DEGREE)
    rng = np.random.default_rng([seed, n, *ms])
    out = []
    for _ in range(trials):
        pars = [mx.random_matrix(m, n, field, rng) for m in ms]
        out.append(stacked_parity(n, pars))
    return tuple(out)


HS = "H_S"
HUPS = "H^S"


def generic_rank(
    n: int,
    ms: Sequence[int],
    S: CellSet,
    role: str,
    trials: int = GENERIC_TRIALS,
    seed: int = 0,
) -> int:
    """Estimate the rank of H_S or H^S over the rational-function field.

    The parity-check blocks are m_i x n matrices of independent
    indeterminates. Each trial substitutes uniform elements of GF(2^62);
    the maximum rank is returned. The estimate never exceeds the true
    generic rank and misses it only when every trial hits the zero set of a
    nonzero minor.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    return _generic_rank_bits(n, tuple(int(m) for m in ms), S.bits, role, trials, seed)


@functools.lru_cache(maxsize=None)
def _axis_relabelings(n: int, D: int) -> np.ndarray:
    """Cell maps induced by permuting coordinate values independently on
    each axis; (n!)^D rows, capped at 1024 (a subgroup is still sound)."""
    idx = np.arange(n ** D).reshape((n,) * D)
    out = []
    for combo in itertools.islice(itertools.product(itertools.permutations(range(n)), repeat=D), 1024):
        a = idx
        for axis, p in enumerate(combo):
            a = np.take(a, p, axis=axis)
        out.append(a.reshape(-1))
    return np.array(out)


def _orbit_representative(n: int, D: int, bits: int) -> int:
    # The indeterminate pattern is invariant under these relabelings (they
    # permute columns of each H_i and rows and columns of the I_n factors),
    # so H_S and H^S have the same generic rank on a whole orbit.
    N = n ** D
    mask = (bits >> np.arange(N)) & 1
    images = mask[_axis_relabelings(n, D)]
    return int((images << np.arange(N)).sum(axis=1).min())


def _generic_rank_bits(n: int, ms: tuple[int, ...], bits: int, role: str, trials: int, seed: int) -> int:
    return _generic_rank_orbit(n, ms, _orbit_representative(n, len(ms), bits), role, trials, seed)


@functools.lru_cache(maxsize=1 << 16)
def _generic_rank_orbit(n: int, ms: tuple[int, ...], bits: int, role: str, trials: int, seed: int) -> int:
    mats = _generic_parities(n, ms, trials, seed)
    row_lines = stacked_row_lines(n, ms)
    S = CellSet(Grid(n, len(ms)), bits)
    return max(mx.rank(_select_role(H, row_lines, S, role)) for H in mats)


def _select_role(H: Mat, row_lines: np.ndarray, S: CellSet, role: str) -> Mat:
    if role == HS:
        return mx.select_columns(H, S.indices())
    if role == HUPS:
        return _HupS_raw(H, row_lines, S.grid, S)
    raise ValueError(f"unknown role {role!r}")


@dataclass(frozen=True)
class SubsetRanks:
    subset: int  # CellSet bits
    rank_HS: int
    generic_HS: int
    rank_HupS: int
    generic_HupS: int

    @property
    def good(self) -> bool:
        return self.rank_HS >= self.generic_HS and self.rank_HupS >= self.generic_HupS


@dataclass(frozen=True)
class SubstitutionVerdict:
    good: bool
    scope: str
    seed: int
    checked: int
    failures: tuple[SubsetRanks, ...]
    ranks: tuple[SubsetRanks, ...] = dc_field(repr=False)
    estimate_raised: int = 0  # subsets where a substitution beat the generic estimate


def _subsets_in_scope(grid: Grid, scope, seed: int) -> tuple[str, list[int]]:
    N = grid.size
    if scope == "all":
        if N > ALL_S_MAX_CELLS:
            raise CapExceeded("all-S scope", 2**N, 2**ALL_S_MAX_CELLS)
        return "all", list(range(1 << N))
    count = int(scope)
    if count < 1:
        raise ValueError("sampled scope needs a positive count")
    rng = np.random.default_rng([seed, 0x5C09E])
    subsets = [0, (1 << N) - 1]
    for _ in range(count):
        bits = rng.integers(0, 2, size=N)
        subsets.append(int(sum(1 << i for i in np.flatnonzero(bits))))
    return f"sampled {count}", subsets


def is_good_substitution(
    n: int,
    pars: Sequence[Mat],
    scope="all",
    seed: int = 0,
    trials: int = GENERIC_TRIALS,
) -> SubstitutionVerdict:
    """Check rk H'(a) = rk H' for H' ∈ {H_S, H^S} and every S in scope.

    ``pars`` are the explicit parity-check matrices H_1(a), ..., H_D(a);
    the generic pattern has an independent indeterminate in each entry.
    """
    D = len(pars)
    grid = Grid(n, D)
    ms = tuple(p.rows for p in pars)
    H = stacked_parity(n, list(pars))
    row_lines = stacked_row_lines(n, ms)
    label, subsets = _subsets_in_scope(grid, scope, seed)
    ranks, failures, raised = [], [], 0
    for bits in subsets:
        S = CellSet(grid, bits)
        r1 = mx.rank(_select_role(H, row_lines, S, HS))
        r2 = mx.rank(_select_role(H, row_lines, S, HUPS))
        g1 = _generic_rank_bits(n, ms, bits, HS, trials, 0)
        g2 = _generic_rank_bits(n, ms, bits, HUPS, trials, 0)
        if r1 > g1 or r2 > g2:
            raised += 1
            g1, g2 = max(g1, r1), max(g2, r2)
        rec = SubsetRanks(bits, r1, g1, r2, g2)
        ranks.append(rec)
        if not rec.good:
            failures.append(rec)
    return SubstitutionVerdict(not failures, label, seed, len(subsets), tuple(failures), tuple(ranks), raised)


@dataclass(frozen=True)
class Certificate:
    certified: bool
    verdict: SubstitutionVerdict
    n: int
    dims: tuple[int, ...]
    q: int
    note: str = (
        "generic ranks estimated by max over random GF(2^62) substitutions; "
        "the estimate is one-sided (never above the true generic rank)"
    )

    def to_text(self) -> str:
        v = self.verdict
        lines = [
            "certificate maximally-extendable",
            f"certified: {'yes' if self.certified else 'no'}",
            f"n: {self.n}",
            f"dims: {' '.join(map(str, self.dims))}",
            f"q: {self.q}",
            f"scope: {v.scope}",
            f"seed: {v.seed}",
            f"subsets_checked: {v.checked}",
            f"failures: {len(v.failures)}",
            f"estimate_raised: {v.estimate_raised}",
            f"note: {self.note}",
        ]
        for rec in v.failures:
            lines.append(
                f"fail S={rec.subset} H_S={rec.rank_HS}/{rec.generic_HS} H^S={rec.rank_HupS}/{rec.generic_HupS}"
            )
        return "\n".join(lines) + "\n"


def certify_maximally_extendable(tup: CodeTuple, scope="all", seed: int = 0) -> Certificate:
    """Certify that C_1 ⊗ ... ⊗ C_D is maximally extendable, using the
    stored parity-check matrices as the substitution."""
    verdict = is_good_substitution(tup.n, [c.par for c in tup.codes], scope=scope, seed=seed)
    return Certificate(verdict.good, verdict, tup.n, tup.dims, tup.field.q)


def subsets(grid: Grid) -> Iterable[CellSet]:
    for bits in range(1 << grid.size):
        yield CellSet(grid, bits)
