"""Product expansion: exact ρ, best decompositions, ε_max, the γ and f
bounds, and the constructive decomposition through locally testable codes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import matrix as mx
from .code import LinearCode, is_subcode, min_distance
from .config import DEFAULT_CAPS, Caps
from .errors import NotInCode, PropertyViolation
from .grid import CellSet, max_partial_fraction
from .matrix import Mat
from .product import CodeTuple, GridWord, is_inner_generated, line_weights, sum_code_basis
from .words import cayley_bfs, field_masks, pack, sorted_span, span_of_basis, support_count, unpack, weights

INF = math.inf


# ---------------------------------------------------------------------------
# Decompositions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """c = a_1 + ... + a_D with a_i ∈ C^{(i)}."""

    parts: tuple[GridWord, ...]
    target: GridWord

    @property
    def costs(self) -> tuple[int, ...]:
        """|a_i|_i per direction."""
        return tuple(line_weights(a)[i] for i, a in enumerate(self.parts))

    @property
    def cost(self) -> int:
        return sum(self.costs)

    def validate(self, tup: CodeTuple) -> None:
        total = GridWord.zero(tup.grid, tup.field)
        for i, a in enumerate(self.parts):
            total = total + a
            C = tup.codes[i]
            lines = a.values[tup.grid.direction_cells(i)]
            for row in lines:
                if np.any(row != 0) and not C.contains(row):
                    raise PropertyViolation(f"part {i} has a direction-{i} line outside C_{i}")
        if total != self.target:
            raise PropertyViolation("parts do not sum to the target word")


def _word(tup: CodeTuple, c) -> GridWord:
    if isinstance(c, GridWord):
        return c
    return GridWord(tup.grid, tup.field, np.asarray(c))


def _block_matrix(tup: CodeTuple) -> tuple[Mat, list[tuple[int, int, int]]]:
    """All line bases stacked, with (direction, first row, row count) blocks."""
    rows, blocks, r = [], [], 0
    for line, B in tup.line_bases:
        if B.rows:
            rows.append(B)
            blocks.append((line.direction, r, B.rows))
            r += B.rows
    if not rows:
        return Mat.zeros(tup.field, 0, tup.grid.size), blocks
    return mx.stack_rows(rows), blocks


def _parts_from_coefficients(tup: CodeTuple, G: Mat, blocks, u: np.ndarray) -> tuple[GridWord, ...]:
    field = tup.field
    parts = [np.zeros(tup.grid.size, dtype=field.dtype) for _ in range(tup.D)]
    for d, r0, k in blocks:
        coeff = u[r0:r0 + k]
        if np.any(coeff != 0):
            parts[d] = parts[d] ^ field.matmul(coeff, G.a[r0:r0 + k])
    return tuple(GridWord(tup.grid, field, p) for p in parts)


def best_decomposition(tup: CodeTuple, c, caps: Caps = DEFAULT_CAPS) -> Decomposition:
    """A decomposition minimising Σ|a_i|_i by exhaustive search of the
    solution coset; ties go to the lexicographically least coefficient
    vector over the stacked line bases."""
    c = _word(tup, c)
    field = tup.field
    G, blocks = _block_matrix(tup)
    if G.rows == 0:
        if c.weight():
            raise NotInCode("word is not in the sum code")
        return Decomposition(tuple(GridWord.zero(tup.grid, field) for _ in range(tup.D)), c)
    u0 = mx.solve(G.T, c.values)
    if u0 is None:
        raise NotInCode("word is not in the sum code")
    K = mx.kernel_basis(G.T)
    caps.check("coset", "decomposition coset", field.q ** K.rows)
    L = G.rows
    words = span_of_basis(field, K.a, L) ^ (
        np.uint64(pack(u0, field.t)) if L * field.t <= 64 else pack(u0, field.t)
    )
    masks = field_masks(L, field.t, [range(r0, r0 + k) for _, r0, k in blocks])
    cost = support_count(words, masks)
    best = cost.min()
    cand = words[cost == best]
    u = unpack(min(cand, key=int), L, field.t)
    return Decomposition(_parts_from_coefficients(tup, G, blocks, u), c)


# ---------------------------------------------------------------------------
# Exact product-expansion factor
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RhoReport:
    rho: Fraction | float  # math.inf when the sum code is {0}
    witness: GridWord | None
    decomposition: Decomposition | None
    codewords: int  # size of the sum code
    generators: int  # nonzero line codewords used by the search
    method: str

    @property
    def costs(self) -> tuple[int, ...]:
        return self.decomposition.costs if self.decomposition else ()

    def to_text(self) -> str:
        lines = [
            f"rho: {format_rational(self.rho)}",
            f"method: {self.method}",
            f"sum_code_size: {self.codewords}",
            f"line_generators: {self.generators}",
        ]
        if self.witness is not None:
            lines.append(f"witness: {' '.join(map(str, self.witness.tolist()))}")
            lines.append(f"witness_weight: {self.witness.weight()}")
            lines.append(f"costs: {' '.join(map(str, self.costs))}")
        return "\n".join(lines) + "\n"


def format_rational(x) -> str:
    if x == INF:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _line_codewords(tup: CodeTuple, caps: Caps) -> tuple[list[int], list[int], list[int]]:
    """Packed nonzero line codewords, with their direction and line index."""
    field, N = tup.field, tup.grid.size
    gens, dirs, owners = [], [], []
    for j, (line, B) in enumerate(tup.line_bases):
        if not B.rows:
            continue
        caps.check("codewords", "line codewords", field.q ** B.rows)
        for w in span_of_basis(field, B.a, N)[1:]:
            gens.append(int(w))
            dirs.append(line.direction)
            owners.append(j)
    return gens, dirs, owners


def rho_exact(tup: CodeTuple, caps: Caps = DEFAULT_CAPS, method: str = "auto") -> RhoReport:
    """ρ(C_1, ..., C_D) = min over nonzero sum-code words c of |c| / (n·cost(c)).

    cost(c), the least Σ|a_i|_i, is the distance from 0 to c in the Cayley
    graph of the sum code generated by all nonzero line codewords, so one
    breadth-first search yields every cost at once. Degenerate tuples give
    1/n by the rule ``method="auto"`` applies; ``method="search"`` always
    searches.
    """
    if method not in ("auto", "search"):
        raise ValueError(f"unknown method {method!r}")
    grid, field, n = tup.grid, tup.field, tup.n
    if method == "auto" and tup.is_degenerate():
        return _degenerate_report(tup)
    B = sum_code_basis(tup, check=False)
    if B.rows == 0:
        return RhoReport(INF, None, None, 1, 0, "empty")
    caps.check("codewords", "sum code", field.q ** B.rows)
    words = sorted_span(field, B.a, grid.size)
    gens, dirs, owners = _line_codewords(tup, caps)
    dist, parent, via = cayley_bfs(words, gens)
    if np.any(dist < 0):
        raise PropertyViolation("line codewords do not generate the sum code")
    w = weights(words, grid.size, field.t)
    nz = dist > 0
    pairs = np.unique(np.stack([w[nz], dist[nz]], axis=1), axis=0)
    rho = min(Fraction(int(a), n * int(b)) for a, b in pairs)
    hit = nz & (w * rho.denominator == rho.numerator * n * dist)
    idx = np.flatnonzero(hit)
    j = int(idx[np.argmin(words[idx])]) if words.dtype != object else int(min(idx, key=lambda k: int(words[k])))
    witness = GridWord(grid, field, unpack(words[j], grid.size, field.t))
    L = sum(Bl.rows for _, Bl in tup.line_bases)
    if field.q ** (L - B.rows) <= caps.coset:
        dec = best_decomposition(tup, witness, caps)
        if dec.cost != dist[j]:
            raise PropertyViolation(f"search cost {dist[j]} differs from coset minimum {dec.cost}")
    else:
        dec = _path_decomposition(tup, words, parent, via, gens, dirs, j)
    dec.validate(tup)
    return RhoReport(rho, witness, dec, len(words), len(gens), "search")


def _path_decomposition(tup, words, parent, via, gens, dirs, j) -> Decomposition:
    field, N = tup.field, tup.grid.size
    acc = [0] * tup.D
    k = j
    while parent[k] >= 0:
        g = int(via[k])
        acc[dirs[g]] ^= gens[g]
        k = int(parent[k])
    parts = tuple(GridWord(tup.grid, field, unpack(a, N, field.t)) for a in acc)
    return Decomposition(parts, GridWord(tup.grid, field, unpack(words[j], N, field.t)))


def _degenerate_report(tup: CodeTuple) -> RhoReport:
    i = next(i for i, C in enumerate(tup.codes) if C.is_full())
    grid, field = tup.grid, tup.field
    e0 = np.zeros(grid.size, dtype=field.dtype)
    e0[0] = 1
    c = GridWord(grid, field, e0)
    parts = tuple(c if j == i else GridWord.zero(grid, field) for j in range(tup.D))
    return RhoReport(Fraction(1, tup.n), c, Decomposition(parts, c), 0, 0, "degenerate")


# ---------------------------------------------------------------------------
# ε_max and the bound formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpsMaxReport:
    eps_max: Fraction
    bad_sets: int
    subsets: int
    witness: CellSet | None


def eps_max_report(tup: CodeTuple, caps: Caps = DEFAULT_CAPS) -> EpsMaxReport:
    if tup.is_degenerate():
        raise ValueError("ε_max needs a non-degenerate tuple")
    grid = tup.grid
    caps.check("subsets", "subsets of the grid", 2 ** grid.size)
    best, witness, bad = Fraction(1), None, 0
    for bits in range(1 << grid.size):
        M = CellSet(grid, bits)
        if is_inner_generated(tup, M):
            continue
        bad += 1
        m = max_partial_fraction(M)
        if m is not None and (m < best or witness is None and m <= best):
            best, witness = m, M
    return EpsMaxReport(best, bad, 1 << grid.size, witness)


def eps_max(tup: CodeTuple, caps: Caps = DEFAULT_CAPS) -> Fraction:
    """The largest ε such that every ε-closed set is inner-generated.

    A non-inner-generated M is ε-closed exactly when ε > m(M), where m(M)
    is the largest fraction of a partial line inside M, so the answer is
    the least m(M) over bad sets (1 when there are none).
    """
    return eps_max_report(tup, caps).eps_max


def gamma(eps, D: int) -> Fraction:
    """γ(ε, D) = ε^D / (D (2^D + 1)^D)."""
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError(f"ε must lie in (0, 1], got {eps}")
    return eps ** D / (D * (2 ** D + 1) ** D)


def f_bound(D: int, alpha_l, alpha_h, delta) -> Fraction:
    """f(1) = δ and f(D) = δ f(D-1) / (3 (6 α_h / (α_l δ))^{D-1})."""
    if D < 1:
        raise ValueError("D must be at least 1")
    a_l, a_h, d = Fraction(alpha_l), Fraction(alpha_h), Fraction(delta)
    if a_l <= 0 or a_h <= 0 or d <= 0:
        raise ValueError("parameters must be positive")
    f = d
    for k in range(2, D + 1):
        f = d * f / (3 * (6 * a_h / (a_l * d)) ** (k - 1))
    return f


# ---------------------------------------------------------------------------
# Bounded-support preimages and the constructive decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhiMap:
    """A linear right inverse of H on {y ∈ im H : supp y ⊆ A}."""

    H: Mat
    A: tuple[int, ...]
    basis: Mat  # rows y_1..y_s
    preimages: Mat  # rows x_1..x_s with H x_i = y_i
    B: tuple[int, ...]

    def __call__(self, y) -> np.ndarray:
        field = self.H.field
        y = np.asarray(y, dtype=field.dtype)
        if self.basis.rows == 0:
            if np.any(y != 0):
                raise NotInCode("vector outside the domain of φ")
            return np.zeros(self.H.cols, dtype=field.dtype)
        coef = mx.solve(self.basis.T, y)
        if coef is None:
            raise NotInCode("vector outside the domain of φ")
        return field.matmul(coef, self.preimages.a)


def min_weight_preimage(H: Mat, y, caps: Caps = DEFAULT_CAPS) -> np.ndarray:
    """A least-weight x with Hx = y; ties go to the lexicographically least."""
    field = H.field
    x0 = mx.solve(H, y)
    if x0 is None:
        raise NotInCode("vector outside the column space")
    K = mx.kernel_basis(H)
    caps.check("coset", "preimage coset", field.q ** K.rows)
    n = H.cols
    base = pack(x0, field.t)
    words = span_of_basis(field, K.a, n) ^ (np.uint64(base) if n * field.t <= 64 else base)
    w = weights(words, n, field.t)
    cand = words[w == w.min()]
    return unpack(min(cand, key=int), n, field.t)


def phi_map(H: Mat, A: Sequence[int], caps: Caps = DEFAULT_CAPS) -> PhiMap:
    field = H.field
    A = tuple(sorted({int(a) for a in A}))
    Y = mx.subspace_intersect_coords(H.T, A) if A else Mat.zeros(field, 0, H.rows)
    if Y.rows:
        Y = mx.rref(Y)[0]
    pre = [min_weight_preimage(H, y, caps) for y in Y.a]
    X = Mat(field, np.array(pre, dtype=field.dtype).reshape(len(pre), H.cols))
    B = tuple(int(j) for j in np.flatnonzero(np.any(X.a != 0, axis=0))) if X.rows else ()
    return PhiMap(H, A, Y, X, B)


@dataclass(frozen=True)
class LTCData:
    """Parity matrix of C_i with a soundness range and relative distance."""

    H: Mat
    alpha_l: Fraction
    alpha_h: Fraction
    delta: Fraction


def _apply_along(field, T: np.ndarray, axis: int, fn, out_len: int) -> np.ndarray:
    moved = np.moveaxis(T, axis, -1)
    flat = moved.reshape(-1, moved.shape[-1])
    res = np.zeros((flat.shape[0], out_len), dtype=field.dtype)
    for r, v in enumerate(flat):
        if np.any(v != 0):
            res[r] = fn(v)
    res = res.reshape(moved.shape[:-1] + (out_len,))
    return np.moveaxis(res, -1, axis)


def ltc_decompose(
    tup: CodeTuple,
    x,
    data: Sequence[LTCData],
    caps: Caps = DEFAULT_CAPS,
    check_bound: bool = True,
) -> Decomposition:
    """Decompose x ∈ C_1 ⊞ ... ⊞ C_D following the locally testable route.

    s = (I ⊗ H_2 ⊗ ... ⊗ H_D) x has direction-1 lines in C_1; A lists the
    nonzero ones. The correction a^{(1)} = (I ⊗ φ) s with
    φ = φ_{H_2,A_2} ⊗ ... ⊗ φ_{H_D,A_D} (A_j the projections of A) removes
    the syndrome, and every direction-1 slice of x - a^{(1)} lies in
    C_2 ⊞ ... ⊞ C_D, where we recurse.
    """
    x = _word(tup, x)
    if len(data) != tup.D:
        raise ValueError("need one LTCData per code")
    parts = _ltc_parts(tup, x.values, list(data), caps)
    dec = Decomposition(tuple(GridWord(tup.grid, tup.field, p) for p in parts), x)
    dec.validate(tup)
    if check_bound:
        a_l = min(Fraction(d.alpha_l) for d in data)
        a_h = max(Fraction(d.alpha_h) for d in data)
        delta = min(Fraction(d.delta) for d in data)
        f = f_bound(tup.D, a_l, a_h, delta)
        if Fraction(dec.cost) > Fraction(x.weight()) / (tup.n * f):
            raise PropertyViolation(f"decomposition cost {dec.cost} exceeds |x|/(n f) = {Fraction(x.weight()) / (tup.n * f)}")
    return dec


def _ltc_parts(tup: CodeTuple, xv: np.ndarray, data: list[LTCData], caps: Caps) -> list[np.ndarray]:
    field, n, D = tup.field, tup.n, tup.D
    if not np.any(xv != 0):
        return [np.zeros(n ** D, dtype=field.dtype) for _ in range(D)]
    if D == 1:
        if not tup.codes[0].contains(xv):
            raise NotInCode("word is not in C_1")
        return [xv.copy()]
    T = xv.reshape((n,) * D)
    s = T
    for j in range(1, D):
        H = data[j].H
        s = _apply_along(field, s, j, lambda v, H=H: field.matmul(H.a, v), H.rows)
    lines = np.moveaxis(s, 0, -1).reshape(-1, n)
    rest_shape = s.shape[1:]
    nz = np.flatnonzero(np.any(lines != 0, axis=1))
    for r in nz:
        if not tup.codes[0].contains(lines[r]):
            raise NotInCode("word is not in the sum code")
    A = [np.unravel_index(r, rest_shape) for r in nz]
    a1 = s
    for j in range(1, D):
        proj = {int(p[j - 1]) for p in A}
        phi = phi_map(data[j].H, proj, caps)
        a1 = _apply_along(field, a1, j, phi, n)
    x_rest = T ^ a1
    parts = [a1.reshape(-1)] + [np.zeros((n,) * D, dtype=field.dtype) for _ in range(D - 1)]
    sub = tup.sub(range(1, D))
    for u in range(n):
        sub_parts = _ltc_parts(sub, x_rest[u].reshape(-1), data[1:], caps)
        for k, p in enumerate(sub_parts):
            parts[k + 1][u] = p.reshape((n,) * (D - 1))
    return [parts[0]] + [p.reshape(-1) for p in parts[1:]]


# ---------------------------------------------------------------------------
# Subcode bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubcodeReport:
    rho_full: Fraction | float
    rho_rest: Fraction | float  # ρ(C_2, ..., C_D)
    rho_sub: Fraction | float  # ρ(C_1', C_2, ..., C_D)
    lemma_bound: Fraction | float
    rho_all_sub: Fraction | float  # ρ(C_1', ..., C_D')
    corollary_bound: Fraction | float

    @property
    def lemma_holds(self) -> bool:
        return self.rho_sub >= self.lemma_bound

    @property
    def corollary_holds(self) -> bool:
        return self.rho_all_sub >= self.corollary_bound


def _rho(tup: CodeTuple, caps: Caps):
    return rho_exact(tup, caps).rho


def subcode_lemma_bound(rho_full, rho_rest):
    """ρ / (1 + ρ_rest^{-1}); ρ_rest = ∞ gives ρ itself."""
    if rho_full == INF:
        return INF
    if rho_rest == INF:
        return Fraction(rho_full)
    return Fraction(rho_full) / (1 + 1 / Fraction(rho_rest))


def corollary_bound(rho_full, D: int):
    """2^{-D} ρ^{2^D}."""
    if rho_full == INF:
        return INF
    return Fraction(1, 2 ** D) * Fraction(rho_full) ** (2 ** D)


def check_subcode_bound(
    tup: CodeTuple,
    sub_first: LinearCode,
    sub_tuple: CodeTuple | None = None,
    caps: Caps = DEFAULT_CAPS,
    strict: bool = True,
) -> SubcodeReport:
    """Both sides of the subcode lemma (C_1' ⊆ C_1) and of its corollary
    (C_i' ⊆ C_i for all i; defaults to (C_1', C_2, ..., C_D))."""
    if not is_subcode(sub_first, tup.codes[0]):
        raise ValueError("C_1' is not a subcode of C_1")
    if sub_tuple is None:
        sub_tuple = tup.replace(0, sub_first)
    for Ci_, Ci in zip(sub_tuple.codes, tup.codes):
        if not is_subcode(Ci_, Ci):
            raise ValueError("sub-tuple is not componentwise contained in the tuple")
    rho_full = _rho(tup, caps)
    rho_rest = _rho(tup.sub(range(1, tup.D)), caps) if tup.D > 1 else INF
    rho_sub = _rho(tup.replace(0, sub_first), caps)
    rho_all = _rho(sub_tuple, caps)
    rep = SubcodeReport(
        rho_full, rho_rest, rho_sub, subcode_lemma_bound(rho_full, rho_rest),
        rho_all, corollary_bound(rho_full, tup.D),
    )
    if strict and not (rep.lemma_holds and rep.corollary_holds):
        raise PropertyViolation(f"subcode bound violated: {rep}")
    return rep


def rho_D1(C: LinearCode, caps: Caps = DEFAULT_CAPS) -> Fraction:
    """d(C)/n, the one-dimensional product-expansion factor."""
    return Fraction(min_distance(C, caps), C.n)
