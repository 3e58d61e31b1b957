"""Reference instances and the Monte Carlo experiment for random codes."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import matrix as mx
from .code import LinearCode, dual
from .config import ExperimentConfig
from .errors import CapExceeded
from .expansion import format_rational, rho_exact
from .field import make_field
from .grid import CellSet, Grid
from .product import CodeTuple, certify_maximally_extendable, is_good_substitution

# The 13-cell set of the closure example on [6]^2 at ε = 1/2, as (x, y).
CLOSURE_EXAMPLE = (
    (0, 5), (4, 5), (5, 5), (5, 4), (1, 3), (2, 3), (4, 2),
    (4, 1), (5, 1), (0, 0), (1, 0), (2, 0), (3, 0),
)
CLOSURE_ROUNDS = (
    ((4, 0), (5, 0)),
    ((4, 3), (4, 4), (5, 2), (5, 3)),
    ((0, 3), (3, 3)),
)

# The set M ⊆ [3]^2 that is not inner-generated for (Rep_3, Rep_3).
NON_IG_EXAMPLE = ((0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (1, 2), (2, 2))


def closure_example() -> CellSet:
    return CellSet.from_coords(Grid(6, 2), CLOSURE_EXAMPLE)


def non_ig_example() -> CellSet:
    return CellSet.from_coords(Grid(3, 2), NON_IG_EXAMPLE)


def failure_bound(n: int, D: int, t: int) -> Fraction:
    """n^D 2^{n^D - t + 1}: the probability bound for a bad substitution."""
    N = n ** D
    return Fraction(N) * Fraction(2) ** (N - t + 1)


@dataclass(frozen=True)
class SampleResult:
    index: int
    good: bool
    certified: bool
    rho: Fraction | None  # None when the sum code exceeds the cap


@dataclass(frozen=True)
class Theorem1Report:
    config: ExperimentConfig
    results: tuple[SampleResult, ...]

    @property
    def failures(self) -> int:
        return sum(not r.good for r in self.results)

    @property
    def failure_fraction(self) -> Fraction:
        return Fraction(self.failures, len(self.results))

    @property
    def bound(self) -> Fraction:
        c = self.config
        return failure_bound(c.n, c.D, c.t)

    @property
    def margin(self) -> float:
        b = min(float(self.bound), 1.0)
        return 3 * math.sqrt(b / len(self.results))

    @property
    def within_bound(self) -> bool:
        return float(self.failure_fraction) <= float(self.bound) + self.margin

    @property
    def certified_all_good(self) -> bool:
        return all(r.certified for r in self.results if r.good)

    def to_text(self) -> str:
        c = self.config
        rhos = [r.rho for r in self.results if r.rho is not None]
        lines = [
            "experiment theorem1",
            f"n: {c.n}",
            f"D: {c.D}",
            f"t: {c.t}",
            f"dims: {' '.join(map(str, c.dims))}",
            f"samples: {len(self.results)}",
            f"seed: {c.seed}",
            f"scope: {c.scope}",
            f"good_substitutions: {len(self.results) - self.failures}",
            f"failures: {self.failures}",
            f"failure_fraction: {format_rational(self.failure_fraction)}",
            f"bound: {format_rational(self.bound)}",
            f"margin_3sigma: {self.margin:.6e}",
            f"within_bound: {'yes' if self.within_bound else 'no'}",
            f"certified_me: {sum(r.certified for r in self.results)}",
            f"certified_all_good: {'yes' if self.certified_all_good else 'no'}",
            f"rho_computed: {len(rhos)}",
            f"rho_min: {format_rational(min(rhos)) if rhos else 'skipped (cap)'}",
        ]
        return "\n".join(lines) + "\n"


def _sample(cfg: ExperimentConfig, i: int) -> SampleResult:
    field = make_field(cfg.t)
    rng = np.random.default_rng([cfg.seed, i])
    gens = [mx.random_full_rank(k, cfg.n, field, rng) for k in cfg.dims]
    codes = tuple(LinearCode.from_generator(G) for G in gens)
    # The generators of C_i are the parity checks of C_1^⊥ ⊗ ... ⊗ C_D^⊥.
    verdict = is_good_substitution(cfg.n, gens, scope=cfg.scope, seed=cfg.seed)
    tup = CodeTuple(codes)
    certified = False
    if verdict.good:
        certified = certify_maximally_extendable(tup.dual(), scope=cfg.scope, seed=cfg.seed).certified
    rho = None
    sum_dim = cfg.n ** cfg.D - math.prod(cfg.n - k for k in cfg.dims)
    if field.q ** sum_dim <= cfg.caps.codewords:
        try:
            rho = rho_exact(tup, cfg.caps).rho
        except CapExceeded:
            rho = None
    return SampleResult(i, verdict.good, certified, rho)


def run_theorem1(cfg: ExperimentConfig) -> Theorem1Report:
    """Sample uniform codes C_i of dimension k_i and test the substitution
    given by their generators; results do not depend on cfg.threads."""
    idx = range(cfg.samples)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda i: _sample(cfg, i), idx))
    else:
        results = [_sample(cfg, i) for i in idx]
    return Theorem1Report(cfg, tuple(results))


def dual_tuple(tup: CodeTuple) -> CodeTuple:
    return CodeTuple(tuple(dual(c) for c in tup.codes))
