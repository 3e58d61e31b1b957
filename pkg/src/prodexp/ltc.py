"""Soundness ranges, locally testable codes and the rate-adaptation
construction over a pluggable base family."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import matrix as mx
from .code import LinearCode, full_code, min_distance
from .config import DEFAULT_CAPS, Caps
from .errors import PropertyViolation
from .matrix import Mat
from .words import cayley_bfs, pack, sorted_span, span_of_basis, unpack, weights


@dataclass(frozen=True)
class SoundnessRange:
    alpha_l: Fraction
    alpha_h: Fraction

    def __post_init__(self):
        if not 0 < self.alpha_l <= self.alpha_h:
            raise ValueError(f"need 0 < α_l <= α_h, got {self.alpha_l}, {self.alpha_h}")


@dataclass(frozen=True)
class LTCParams:
    Delta: int
    s: Fraction
    m: int
    n: int

    def to_line(self) -> str:
        return f"ltc {self.Delta} {self.s.numerator} {self.s.denominator} {self.m}"


def _syndrome_table(H: Mat, caps: Caps) -> tuple[np.ndarray, np.ndarray]:
    """(syndromes, coset-leader weights), syndromes sorted and packed.

    The leader weight of σ is the distance from 0 to σ in the Cayley graph
    of im H generated by the nonzero multiples of the columns of H.
    """
    field, m = H.field, H.rows
    basis = mx.rref(H.T)[0]
    caps.check("codewords", "syndromes", field.q ** basis.rows)
    syn = sorted_span(field, basis.a, m)
    gens = set()
    for j in range(H.cols):
        col = H.a[:, j]
        if np.any(col != 0):
            for a in range(1, field.q):
                gens.add(pack(field.vmul(col, a), field.t))
    dist, _, _ = cayley_bfs(syn, sorted(gens))
    return syn, dist


def _ratios(H: Mat, syn: np.ndarray, leader: np.ndarray) -> SoundnessRange:
    sw = weights(syn, H.rows, H.field.t)
    nz = leader > 0
    if not np.any(nz):
        raise ValueError("ker H is the whole space; there is no soundness range")
    pairs = np.unique(np.stack([sw[nz], leader[nz]], axis=1), axis=0)
    vals = [Fraction(int(a), int(b)) for a, b in pairs]
    return SoundnessRange(min(vals), max(vals))


def soundness_range(H: Mat, caps: Caps = DEFAULT_CAPS) -> SoundnessRange:
    """Tight (α_l, α_h) with α_l d(x, ker H) <= |Hx| <= α_h d(x, ker H)."""
    syn, leader = _syndrome_table(H, caps)
    return _ratios(H, syn, leader)


def soundness_range_bruteforce(H: Mat, caps: Caps = DEFAULT_CAPS) -> SoundnessRange:
    """The same range from a scan of all of F_q^n (for small n)."""
    field, n, m = H.field, H.cols, H.rows
    caps.check("codewords", "ambient space", field.q ** n)
    xs = unpack(span_of_basis(field, np.eye(n, dtype=np.int64).astype(field.dtype), n), n, field.t)
    xs = xs.reshape(-1, n)
    S = field.matmul(xs, H.a.T) if m else np.zeros((len(xs), 0), dtype=field.dtype)
    keys = [tuple(int(v) for v in row) for row in S]
    w = np.count_nonzero(xs, axis=1)
    leader: dict[tuple, int] = {}
    for k, wt in zip(keys, w):
        if k not in leader or wt < leader[k]:
            leader[k] = int(wt)
    vals = [Fraction(sum(v != 0 for v in k), d) for k, d in leader.items() if d > 0]
    if not vals:
        raise ValueError("ker H is the whole space; there is no soundness range")
    return SoundnessRange(min(vals), max(vals))


def soundness_exact(H: Mat, m: int | None = None, n: int | None = None, caps: Caps = DEFAULT_CAPS) -> Fraction:
    """Largest s with (1/m)|Hx| >= (s/n) d(x, ker H), namely (n/m) α_l."""
    m = H.rows if m is None else m
    n = H.cols if n is None else n
    return Fraction(n, m) * soundness_range(H, caps).alpha_l


def delta_limited(H: Mat) -> int:
    """The least Δ bounding every row and column support of H."""
    if H.rows == 0 or H.cols == 0:
        return 0
    nz = H.a != 0
    return int(max(nz.sum(axis=0).max(), nz.sum(axis=1).max()))


def ltc_params(C: LinearCode, caps: Caps = DEFAULT_CAPS) -> LTCParams:
    H = C.par
    return LTCParams(delta_limited(H), soundness_exact(H, caps=caps), H.rows, H.cols)


def tensor_extend(C: LinearCode, t: int) -> LinearCode:
    """C ⊗ F_q^t with parity-check matrix H ⊗ I_t."""
    if t < 1:
        raise ValueError("t must be at least 1")
    if t == 1:
        return C
    H = mx.kron(C.par, Mat.identity(C.field, t))
    out = LinearCode.from_parity(H, name=f"{C.name}xF^{t}" if C.name else "")
    return out


def pad_zero(C: LinearCode, u: int) -> LinearCode:
    """C ⊕ 0_u with parity-check matrix diag(H, I_u)."""
    if u < 0:
        raise ValueError("u must be non-negative")
    if u == 0:
        return C
    H = mx.block_diag([C.par, Mat.identity(C.field, u)])
    return LinearCode.from_parity(H, name=f"{C.name}+0_{u}" if C.name else "")


def pad_bound(s: Fraction) -> Fraction:
    """min(s/2, 1), the soundness guaranteed after zero padding."""
    return min(Fraction(s) / 2, Fraction(1))


@dataclass(frozen=True)
class RateTrace:
    r: Fraction
    j: int | None  # 0-based index into the family, None for the full code
    t: int
    u: int


class FamilyExhausted(ValueError):
    pass


def rate_adapt(
    family: Sequence[LinearCode],
    n: int,
    R,
    growth_bound=None,
) -> tuple[LinearCode, RateTrace]:
    """A length-n code of rate at least R from a family of increasing lengths.

    With r = (1 + R)/2: below n_1/(1 - r) the answer is F_q^n; otherwise
    j = max{i : n_i <= (1 - r) n}, n = n_j t + u and the code is
    (C_j ⊗ F_q^t) ⊕ 0_u.
    """
    if not family:
        raise ValueError("empty base family")
    R = Fraction(R)
    if not 0 <= R < 1:
        raise ValueError("rate must lie in [0, 1)")
    lengths = [C.n for C in family]
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise ValueError("family lengths must increase")
    if growth_bound is not None:
        for a, b in zip(lengths, lengths[1:]):
            if Fraction(b, a) > Fraction(growth_bound):
                raise ValueError(f"growth {b}/{a} exceeds the bound {growth_bound}")
    r = (1 + R) / 2
    field = family[0].field
    if n < lengths[0] / (1 - r):
        return full_code(n, field), RateTrace(r, None, 1, 0)
    j = max(i for i, L in enumerate(lengths) if L <= (1 - r) * n)
    if j == len(family) - 1 and growth_bound is not None and lengths[j] * Fraction(growth_bound) <= (1 - r) * n:
        raise FamilyExhausted(f"length {n} needs a family member beyond n={lengths[j]}")
    t, u = divmod(n, lengths[j])
    C = pad_zero(tensor_extend(family[j], t), u)
    if Fraction(C.k, n) < R:
        raise PropertyViolation(f"rate {C.k}/{n} below {R}")
    return C, RateTrace(r, j, t, u)


def distance_fraction(C: LinearCode, caps: Caps = DEFAULT_CAPS) -> Fraction:
    return Fraction(min_distance(C, caps), C.n)
