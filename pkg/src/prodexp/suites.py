"""Property batteries over random and reference instances.

Each battery returns a :class:`SuiteResult`; the CLI ``suite`` command and
the acceptance tests run them with fixed seeds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import matrix as mx
from .code import (
    LinearCode, code_sum, full_code, intersect, min_distance, random_code, random_subcode, rep_code, tensor,
)
from .config import DEFAULT_CAPS, Caps, ExperimentConfig
from .errors import PropertyViolation
from .expansion import (
    INF, LTCData, best_decomposition, check_subcode_bound, eps_max, f_bound, gamma, ltc_decompose, rho_exact,
)
from .experiments import CLOSURE_ROUNDS, closure_example, non_ig_example, run_theorem1
from .field import make_field
from .grid import CellSet, Grid, all_subsets, closure_constant, closure_rounds, eps_closure, is_eps_closed
from .ltc import delta_limited, pad_bound, pad_zero, soundness_exact, soundness_range, soundness_range_bruteforce, tensor_extend
from .matrix import Mat
from .product import CodeTuple, GridWord, duality_check, is_extendable, is_inner_generated, sum_code, sum_code_basis
from .sheaf import rho_via_sheaf


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = dc_field(default_factory=list)
    info: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def to_text(self) -> str:
        lines = [f"suite: {self.name}", f"status: {'pass' if self.passed else 'fail'}", f"checked: {self.checked}"]
        for k, v in self.info.items():
            lines.append(f"{k}: {v}")
        for f in self.failures[:20]:
            lines.append(f"failure: {f}")
        return "\n".join(lines) + "\n"


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng([seed, *key])


# ---------------------------------------------------------------------------
# Instance generators
# ---------------------------------------------------------------------------

def oracle_tuples(seed: int = 0, count2: int = 50, count3: int = 5) -> list[CodeTuple]:
    """Random tuples: D=2 with n ≤ 3, q ∈ {2, 4}, dims ≤ 2; D=3 with n=2, q=2."""
    out = []
    for j in range(count2):
        rng = _rng(seed, 2, j)
        n = int(rng.integers(2, 4))
        field = make_field(int(rng.integers(1, 3)))
        out.append(CodeTuple(tuple(random_code(n, int(rng.integers(0, 3)), field, rng) for _ in range(2))))
    for j in range(count3):
        rng = _rng(seed, 3, j)
        field = make_field(1)
        out.append(CodeTuple(tuple(random_code(2, int(rng.integers(0, 3)), field, rng) for _ in range(3))))
    return out


def random_word_in(tup: CodeTuple, rng: np.random.Generator) -> GridWord:
    B = sum_code_basis(tup, check=False)
    field = tup.field
    if B.rows == 0:
        return GridWord.zero(tup.grid, field)
    coeff = field.random(rng, B.rows)
    return GridWord(tup.grid, field, field.matmul(coeff, B.a))


# ---------------------------------------------------------------------------
# Batteries
# ---------------------------------------------------------------------------

def suite_closure_figure(seed: int = 0, caps: Caps = DEFAULT_CAPS) -> SuiteResult:
    res = SuiteResult("closure-figure")
    M = closure_example()
    grid = M.grid
    closed = eps_closure(M, Fraction(1, 2), inclusive=False)
    rounds = closure_rounds(M, Fraction(1, 2), inclusive=False)
    expected = [CellSet.from_coords(grid, r) for r in CLOSURE_ROUNDS]
    final = M
    for r in expected:
        final = final | r
    res.checked = 3
    if closed != final or len(closed) != 21:
        res.fail(f"closure has {len(closed)} cells, expected the 21-cell reference closure")
    if rounds != expected:
        res.fail(f"rounds {[sorted(r.coords()) for r in rounds]} differ from the reference rounds")
    if eps_closure(closed, Fraction(1, 2), inclusive=False) != closed:
        res.fail("closure is not idempotent")
    res.info["closure_size"] = len(closed)
    res.info["definition_rule_size"] = len(eps_closure(M, Fraction(1, 2)))
    return res


def suite_duality(seed: int = 0, caps: Caps = DEFAULT_CAPS) -> SuiteResult:
    res = SuiteResult("duality")
    F = make_field(1)
    tup = CodeTuple((rep_code(3, F), rep_code(3, F)))
    M = non_ig_example()
    if is_inner_generated(tup, M):
        res.fail("the example set is inner-generated")
    if is_extendable(tup.dual(), M):
        res.fail("the example set is extendable in the dual product")
    bad = 0
    for S in all_subsets(tup.grid):
        res.checked += 1
        try:
            bad += not duality_check(tup, S)
        except PropertyViolation as exc:
            res.fail(str(exc))
    res.info["non_inner_generated"] = bad
    return res


def suite_oracle(seed: int = 0, caps: Caps = DEFAULT_CAPS) -> SuiteResult:
    res = SuiteResult("oracle")
    for k, tup in enumerate(oracle_tuples(seed)):
        a = rho_exact(tup, caps).rho
        b = rho_via_sheaf(tup, caps)
        res.checked += 1
        if a != b:
            res.fail(f"tuple {k} {tup}: rho_exact={a} sheaf={b}")
    return res


def suite_repetition(seed: int = 0, caps: Caps = DEFAULT_CAPS) -> SuiteResult:
    res = SuiteResult("repetition")
    F = make_field(1)
    for n, D in [(2, 2), (3, 2), (4, 2), (2, 3)]:
        tup = CodeTuple((rep_code(n, F),) * D)
        rho = rho_exact(tup, caps).rho
        bound = Fraction(1, 2 ** D - 1)
        res.checked += 1
        res.info[f"rho_rep{n}^{D}"] = f"{rho.numerator}/{rho.denominator}"
        if rho < bound:
            res.fail(f"rho(Rep_{n}^{D}) = {rho} < {bound}")
    if rho_exact(CodeTuple((rep_code(2, F),) * 2), caps).rho != Fraction(1, 2):
        res.fail("rho(Rep_2, Rep_2) != 1/2")
    return res


def suite_sandwich(seed: int = 0, caps: Caps = DEFAULT_CAPS) -> SuiteResult:
    res = SuiteResult("sandwich")
    skipped = 0
    for k, tup in enumerate(oracle_tuples(seed)):
        if tup.is_degenerate():
            continue
        rho = rho_exact(tup, caps).rho
        if rho == INF:
            skipped += 1  # sum code {0}: every ρ works
            continue
        e = eps_max(tup, caps)
        res.checked += 1
        if not gamma(e, tup.D) <= rho <= e:
            res.fail(f"tuple {k} {tup}: gamma={gamma(e, tup.D)} rho={rho} eps_max={e}")
    res.info["skipped_trivial_sum"] = skipped
    return res


def suite_closure_size(seed: int = 0, caps: Caps = DEFAULT_CAPS, samples: int = 10_000) -> SuiteResult:
    res = SuiteResult("closure-size")
    g = Grid(3, 2)
    for eps in (Fraction(1, 3), Fraction(2, 3), Fraction(1)):
        c = closure_constant(eps, 2)
        for M in all_subsets(g):
            res.checked += 1
            if len(eps_closure(M, eps)) > c * len(M):
                res.fail(f"[3]^2 eps={eps} M={M.coords()}")
    g = Grid(4, 3)
    rng = _rng(seed, 6)
    for eps in (Fraction(1, 4), Fraction(1, 2)):
        c = closure_constant(eps, 3)
        for _ in range(samples):
            density = rng.random()
            bits = np.flatnonzero(rng.random(g.size) < density)
            M = CellSet.from_indices(g, bits)
            res.checked += 1
            if len(eps_closure(M, eps)) > c * len(M):
                res.fail(f"[4]^3 eps={eps} M={M.coords()}")
    return res


def subcode_instances(seed: int = 0, count_a: int = 20, count_b: int = 5):
    """(tuple, C_1', sub-tuple) triples: n=3, D=2, q=4 and n=2, D=3, q=2."""
    out = []
    F4 = make_field(2)
    for j in range(count_a):
        rng = _rng(seed, 7, j)
        tup = CodeTuple((random_code(3, 2, F4, rng), random_code(3, 2, F4, rng)))
        sub1 = random_subcode(tup.codes[0], 1, rng)
        subs = CodeTuple(tuple(random_subcode(C, int(rng.integers(0, C.k + 1)), rng) for C in tup.codes))
        out.append((tup, sub1, subs))
    F2 = make_field(1)
    for j in range(count_b):
        rng = _rng(seed, 8, j)
        tup = CodeTuple(tuple(random_code(2, int(rng.integers(1, 3)), F2, rng) for _ in range(3)))
        sub1 = random_subcode(tup.codes[0], int(rng.integers(0, tup.codes[0].k + 1)), rng)
        subs = CodeTuple(tuple(random_subcode(C, int(rng.integers(0, C.k + 1)), rng) for C in tup.codes))
        out.append((tup, sub1, subs))
    return out


def suite_subcode(seed: int = 0, caps: Caps = DEFAULT_CAPS) -> SuiteResult:
    res = SuiteResult("subcode")
    for k, (tup, sub1, subs) in enumerate(subcode_instances(seed)):
        rep = check_subcode_bound(tup, sub1, subs, caps, strict=False)
        res.checked += 1
        if not rep.lemma_holds:
            res.fail(f"instance {k}: lemma rho_sub={rep.rho_sub} < {rep.lemma_bound}")
        if not rep.corollary_holds:
            res.fail(f"instance {k}: corollary rho={rep.rho_all_sub} < {rep.corollary_bound}")
    return res


def suite_intersection(seed: int = 0, caps: Caps = DEFAULT_CAPS, count: int = 50) -> SuiteResult:
    res = SuiteResult("intersection")
    for j in range(count):
        rng = _rng(seed, 9, j)
        n = int(rng.integers(2, 4))
        field = make_field(int(rng.integers(1, 3)))
        X, Y, C1, C2 = (random_code(n, int(rng.integers(0, n + 1)), field, rng) for _ in range(4))
        left = intersect(tensor(X, Y), sum_code(CodeTuple((C1, C2))))
        right = code_sum(tensor(intersect(X, C1), Y), tensor(X, intersect(Y, C2)))
        res.checked += 1
        if left != right:
            res.fail(f"quadruple {j}: dims {left.k} vs {right.k}")
    return res


def _random_parity(rng, field, m, n) -> Mat:
    while True:
        H = mx.random_matrix(m, n, field, rng)
        if mx.rank(H):
            return H


def suite_ltc(seed: int = 0, caps: Caps = DEFAULT_CAPS, count: int = 20) -> SuiteResult:
    res = SuiteResult("ltc")
    for j in range(count):
        rng = _rng(seed, 10, j)
        field = make_field(int(rng.integers(1, 3)))
        n = int(rng.integers(2, 6))
        m = int(rng.integers(1, n + 1))
        H = _random_parity(rng, field, m, n)
        t = int(rng.integers(2, 4))
        while field.q ** (t * mx.rank(H)) > 2**16:  # keep the syndrome tables small
            t -= 1
        base = soundness_range(H, caps)
        res.checked += 1
        if soundness_range(mx.kron(Mat.identity(field, t), H), caps) != base:
            res.fail(f"H #{j}: I_t ⊗ H changes the soundness range")
        if soundness_range(mx.kron(H, Mat.identity(field, t)), caps) != base:
            res.fail(f"H #{j}: H ⊗ I_t changes the soundness range")
        if soundness_range_bruteforce(H, caps) != base:
            res.fail(f"H #{j}: coset method disagrees with the full scan")
    constructed = 0
    for j in range(count):
        rng = _rng(seed, 11, j)
        field = make_field(int(rng.integers(1, 3)))
        n = int(rng.integers(2, 7))
        m = int(rng.integers((n + 1) // 2, n + 1))
        H = _random_parity(rng, field, m, n)
        C = LinearCode.from_parity(H)
        s = soundness_exact(H, caps=caps)
        Delta = delta_limited(H)
        rng_ = soundness_range(H, caps)
        constructed += 1
        res.checked += 1
        if n / 2 <= m <= n and not (rng_.alpha_l >= s / 2 and rng_.alpha_h <= Delta):
            res.fail(f"LTC #{j}: α=({rng_.alpha_l},{rng_.alpha_h}) s={s} Δ={Delta}")
        t = int(rng.integers(2, 4))
        while field.q ** (t * mx.rank(H)) > 2**16:
            t -= 1
        T = tensor_extend(C, t)
        if soundness_exact(T.par, caps=caps) < s or delta_limited(T.par) != Delta:
            res.fail(f"LTC #{j}: tensor extension lost soundness or locality")
        if T != tensor(C, full_code(t, field)):
            res.fail(f"LTC #{j}: H ⊗ I_t does not define C ⊗ F^t")
        u = int(rng.integers(1, 4))
        P = pad_zero(C, u)
        if n / 2 <= m <= n and soundness_exact(P.par, caps=caps) < pad_bound(s):
            res.fail(f"LTC #{j}: padding soundness {soundness_exact(P.par, caps=caps)} < {pad_bound(s)}")
        if delta_limited(P.par) != max(Delta, 1):
            res.fail(f"LTC #{j}: padding changed Δ")
    res.info["constructed_ltcs"] = constructed
    return res


def decompose_instances(seed: int = 0, count: int = 20):
    out = []
    for j in range(count):
        rng = _rng(seed, 12, j)
        n = int(rng.integers(2, 5))
        field = make_field(int(rng.integers(1, 3))) if n <= 3 else make_field(1)
        codes = tuple(random_code(n, int(rng.integers(1, n)), field, rng) for _ in range(2))
        tup = CodeTuple(codes)
        out.append((tup, random_word_in(tup, rng)))
    return out


def ltc_data(C, caps: Caps = DEFAULT_CAPS) -> LTCData:
    r = soundness_range(C.par, caps)
    return LTCData(C.par, r.alpha_l, r.alpha_h, Fraction(min_distance(C, caps), C.n))


def suite_decompose(seed: int = 0, caps: Caps = DEFAULT_CAPS) -> SuiteResult:
    res = SuiteResult("decompose")
    if f_bound(1, 1, 1, Fraction(1, 3)) != Fraction(1, 3) or f_bound(2, 1, 1, 1) != Fraction(1, 18):
        res.fail("f recursion values")
    for k, (tup, x) in enumerate(decompose_instances(seed)):
        data = [ltc_data(C, caps) for C in tup.codes]
        res.checked += 1
        try:
            dec = ltc_decompose(tup, x, data, caps)
        except PropertyViolation as exc:
            res.fail(f"instance {k}: {exc}")
            continue
        if dec.cost < best_decomposition(tup, x, caps).cost:
            res.fail(f"instance {k}: cost below the exact minimum")
    return res


def suite_inner_generated(seed: int = 0, caps: Caps = DEFAULT_CAPS, count: int = 10) -> SuiteResult:
    """Every ρ-closed set is inner-generated."""
    res = SuiteResult("inner-generated")
    for j in range(count):
        rng = _rng(seed, 13, j)
        field = make_field(int(rng.integers(1, 3)))
        tup = CodeTuple(tuple(random_code(3, int(rng.integers(1, 3)), field, rng) for _ in range(2)))
        rho = rho_exact(tup, caps).rho
        for M in all_subsets(tup.grid):
            if is_eps_closed(M, rho):
                res.checked += 1
                if not is_inner_generated(tup, M):
                    res.fail(f"tuple {j}: ρ-closed M={M.coords()} is not inner-generated")
    return res


def suite_subset(seed: int = 0, caps: Caps = DEFAULT_CAPS, count: int = 10) -> SuiteResult:
    """ρ of a subcollection is at least ρ of the whole collection."""
    res = SuiteResult("subset-exp")
    F = make_field(1)
    for j in range(count):
        rng = _rng(seed, 14, j)
        tup = CodeTuple(tuple(random_code(2, int(rng.integers(0, 2)), F, rng) for _ in range(3)))
        full = rho_exact(tup, caps).rho
        for r in (1, 2):
            for idx in itertools.combinations(range(3), r):
                sub = rho_exact(tup.sub(idx), caps).rho
                res.checked += 1
                if sub < full:
                    res.fail(f"tuple {j}: ρ{idx}={sub} < ρ={full}")
    return res


def suite_degenerate(seed: int = 0, caps: Caps = DEFAULT_CAPS, count: int = 10) -> SuiteResult:
    res = SuiteResult("degenerate")
    for j in range(count):
        rng = _rng(seed, 15, j)
        field = make_field(int(rng.integers(1, 3)))
        n = int(rng.integers(2, 4))
        tup = CodeTuple((random_code(n, int(rng.integers(0, n)), field, rng), full_code(n, field)))
        res.checked += 1
        if rho_exact(tup, caps, method="search").rho != Fraction(1, n):
            res.fail(f"tuple {j}: adding a full code does not give 1/n")
    return res


def suite_theorem1(seed: int = 0, caps: Caps = DEFAULT_CAPS, samples: int = 1000, threads: int = 1) -> SuiteResult:
    res = SuiteResult("theorem1")
    rep = run_theorem1(ExperimentConfig(n=2, D=2, t=16, dims=(1, 1), samples=samples, seed=seed, caps=caps, threads=threads))
    res.checked = samples
    res.info["failure_fraction"] = f"{rep.failure_fraction.numerator}/{rep.failure_fraction.denominator}"
    res.info["threshold"] = f"{float(rep.bound) + rep.margin:.6e}"
    if not rep.within_bound:
        res.fail(f"failure fraction {rep.failure_fraction} above bound plus margin")
    if not rep.certified_all_good:
        res.fail("a good substitution was not certified")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "closure-figure": suite_closure_figure,
    "duality": suite_duality,
    "oracle": suite_oracle,
    "repetition": suite_repetition,
    "sandwich": suite_sandwich,
    "closure-size": suite_closure_size,
    "subcode": suite_subcode,
    "intersection": suite_intersection,
    "theorem1": suite_theorem1,
    "ltc": suite_ltc,
    "decompose": suite_decompose,
    "inner-generated": suite_inner_generated,
    "subset-exp": suite_subset,
    "degenerate": suite_degenerate,
}


def run_suite(name: str, seed: int = 0, caps: Caps = DEFAULT_CAPS) -> SuiteResult:
    try:
        fn = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}") from None
    return fn(seed=seed, caps=caps)
