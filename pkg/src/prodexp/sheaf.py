"""The sheaf of a code tuple on the clique complex of K_{n,...,n}.

Cells are tuples over [n] ∪ {*} (``STAR`` = -1); a cell with j fixed
coordinates has dimension j - 1, and σ ≤ τ when τ agrees with σ on the
fixed coordinates of σ. The local space F_σ consists of the words on the
sub-grid X_σ = {x ∈ [n]^D : σ ≤ x} whose lines in every free direction i
lie in C_i. The coboundary δ^i sends c_σ to its restrictions on the cells
τ ≥ σ of dimension i + 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import matrix as mx
from .config import DEFAULT_CAPS, Caps
from .errors import PropertyViolation
from .field import Field
from .matrix import Mat
from .product import CodeTuple, stacked_parity
from .words import f2_generators, field_masks, pack, span_words, support_count

STAR = -1
INF = math.inf


@dataclass(frozen=True)
class Cell:
    coords: tuple[int, ...]

    @property
    def dim(self) -> int:
        return sum(c != STAR for c in self.coords) - 1

    @property
    def free(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c == STAR)

    def __le__(self, other: "Cell") -> bool:
        return all(a == STAR or a == b for a, b in zip(self.coords, other.coords))

    def points(self, n: int) -> list[tuple[int, ...]]:
        """X_σ in lexicographic order of the free coordinates."""
        free = self.free
        out = []
        for vals in itertools.product(range(n), repeat=len(free)):
            x = list(self.coords)
            for i, v in zip(free, vals):
                x[i] = v
            out.append(tuple(x))
        return out

    def __str__(self):
        return "(" + ",".join("*" if c == STAR else str(c) for c in self.coords) + ")"


def cells_of_dim(n: int, D: int, i: int) -> list[Cell]:
    """X(i), sorted."""
    fixed = i + 1
    out = []
    for pos in itertools.combinations(range(D), fixed):
        for vals in itertools.product(range(n), repeat=fixed):
            c = [STAR] * D
            for p, v in zip(pos, vals):
                c[p] = v
            out.append(Cell(tuple(c)))
    return sorted(out, key=lambda c: c.coords)


@dataclass(frozen=True, eq=False)
class LocalSpace:
    cell: Cell
    basis: Mat  # RREF rows over the points of X_σ
    pivots: tuple[int, ...]
    points: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return self.basis.rows


def local_space(tup: CodeTuple, cell: Cell) -> LocalSpace:
    """F_σ as the kernel of the line checks inside X_σ."""
    n, field = tup.n, tup.field
    free = cell.free
    pts = tuple(cell.points(n))
    size = len(pts)
    if not free:
        basis = Mat.identity(field, 1)
    else:
        H = stacked_parity(n, [tup.codes[i].par for i in free])
        basis = mx.kernel_basis(H) if H.rows else Mat.identity(field, size)
    if basis.rows:
        basis, piv = mx.rref(basis)
    else:
        piv = []
    return LocalSpace(cell, basis, tuple(piv), pts)


@dataclass(frozen=True, eq=False)
class SheafComplex:
    tup: CodeTuple
    cells: dict[int, list[Cell]]
    spaces: dict[int, list[LocalSpace]]
    offsets: dict[int, list[int]]  # start of each cell's block in C^i
    delta: dict[int, Mat]  # δ^i : C^i -> C^{i+1}, as a dim C^{i+1} x dim C^i matrix

    @property
    def D(self) -> int:
        return self.tup.D

    @property
    def field(self) -> Field:
        return self.tup.field

    def dim(self, i: int) -> int:
        return sum(s.dim for s in self.spaces.get(i, []))

    def blocks(self, i: int) -> list[range]:
        return [range(o, o + s.dim) for o, s in zip(self.offsets[i], self.spaces[i])]

    def summary(self) -> str:
        lines = [f"complex n={self.tup.n} D={self.D} q={self.field.q}"]
        for i in range(-1, self.D):
            lines.append(f"C^{i}: cells={len(self.cells[i])} dim={self.dim(i)}")
        for i in range(-1, self.D - 1):
            lines.append(f"delta^{i}: rank={mx.rank(self.delta[i])}")
        return "\n".join(lines) + "\n"


def build_complex(tup: CodeTuple, caps: Caps = DEFAULT_CAPS, check: bool = True) -> SheafComplex:
    n, D, field = tup.n, tup.D, tup.field
    cells, spaces, offsets = {}, {}, {}
    for i in range(-1, D):
        cells[i] = cells_of_dim(n, D, i)
        spaces[i] = [local_space(tup, c) for c in cells[i]]
        off, o = [], 0
        for s in spaces[i]:
            off.append(o)
            o += s.dim
        offsets[i] = off
        caps.check("cochains", f"dim C^{i} (as q^dim)", field.q ** o)
    index = {i: {c: k for k, c in enumerate(cells[i])} for i in cells}
    delta = {}
    for i in range(-1, D - 1):
        rows, cols = sum(s.dim for s in spaces[i + 1]), sum(s.dim for s in spaces[i])
        M = np.zeros((rows, cols), dtype=field.dtype)
        for k, sp in enumerate(spaces[i]):
            if not sp.dim:
                continue
            pos = {p: j for j, p in enumerate(sp.points)}
            sigma = sp.cell.coords
            for axis in sp.cell.free:
                for v in range(n):
                    tau = Cell(sigma[:axis] + (v,) + sigma[axis + 1:])
                    kt = index[i + 1][tau]
                    tsp = spaces[i + 1][kt]
                    if not tsp.dim:
                        continue
                    sel = [pos[p] for p in tsp.points]
                    restricted = sp.basis.a[:, sel]
                    # coordinates in an RREF basis are the entries at its pivots
                    coords = restricted[:, list(tsp.pivots)]
                    r0, c0 = offsets[i + 1][kt], offsets[i][k]
                    M[r0:r0 + tsp.dim, c0:c0 + sp.dim] ^= coords.T
        delta[i] = Mat(field, M)
    cx = SheafComplex(tup, cells, spaces, offsets, delta)
    if check:
        check_complex(cx)
    return cx


def check_complex(cx: SheafComplex) -> None:
    for i in range(-1, cx.D - 2):
        prod = cx.delta[i + 1] @ cx.delta[i]
        if not prod.is_zero():
            raise PropertyViolation(f"δ^{i + 1} δ^{i} ≠ 0")


@dataclass(frozen=True)
class EtaReport:
    eta: Fraction | float
    classes: int  # nonzero cosets of im δ^{i-1}
    image_dim: int
    dim: int


def eta_report(cx: SheafComplex, i: int, caps: Caps = DEFAULT_CAPS) -> EtaReport:
    """Exact η^i by enumeration of the cosets of im δ^{i-1} in C^i.

    |δc| is constant on a coset since δδ = 0; the denominator is the least
    cell-support weight in the coset.
    """
    if not -1 <= i <= cx.D - 2:
        raise ValueError(f"η^{i} needs -1 <= i <= D-2")
    field = cx.field
    t = field.t
    N = cx.dim(i)
    caps.check("cochains", f"cochains of C^{i}", field.q ** N)
    if i - 1 >= -1 and N:
        Im = cx.delta[i - 1].T
        Im_basis, piv = mx.rref(Im) if Im.rows else (Im, [])
    else:
        Im_basis, piv = Mat.zeros(field, 0, N), []
    r = Im_basis.rows
    if N - r == 0:
        return EtaReport(INF, 0, r, N)
    # the complement of the pivot coordinates spans a complement of the image
    comp = [j for j in range(N) if j not in set(piv)]
    Q = np.zeros((len(comp), N), dtype=field.dtype)
    for a, j in enumerate(comp):
        Q[a, j] = 1
    q_gens = f2_generators(field, Q)
    i_gens = f2_generators(field, Im_basis.a) if r else np.zeros((0, N), dtype=field.dtype)
    nb = N * t
    quot = span_words([pack(g, t) for g in q_gens], nb)
    cell_masks = field_masks(N, t, cx.blocks(i))
    # numerator: δ applied to the same generators gives an aligned span
    dq = np.array([cx.delta[i] @ g for g in q_gens], dtype=field.dtype).reshape(len(q_gens), -1)
    N1 = cx.dim(i + 1)
    num_words = span_words([pack(g, t) for g in dq], N1 * t)
    num = support_count(num_words, field_masks(N1, t, cx.blocks(i + 1)))
    image = span_words([pack(g, t) for g in i_gens], nb)
    den = None
    for b in image:
        w = support_count(quot ^ b, cell_masks)
        den = w if den is None else np.minimum(den, w)
    num, den = num[1:], den[1:]
    pairs = np.unique(np.stack([num, den], axis=1), axis=0)
    eta = min(Fraction(int(a), int(b)) for a, b in pairs)
    return EtaReport(eta, len(quot) - 1, r, N)


def eta(cx: SheafComplex, i: int, caps: Caps = DEFAULT_CAPS) -> Fraction | float:
    return eta_report(cx, i, caps).eta


def rho_via_sheaf(tup: CodeTuple, caps: Caps = DEFAULT_CAPS) -> Fraction | float:
    """η^{D-2}(X; F) / n."""
    e = eta(build_complex(tup, caps), tup.D - 2, caps)
    return INF if e == INF else Fraction(e) / tup.n


def cheeger_complex(n: int, D: int, field: Field) -> dict[int, Mat]:
    """Simplicial coboundaries of X(K_{n,...,n}) with F_2 coefficients
    (augmented by the empty cell), in the cell order of :func:`cells_of_dim`."""
    out = {}
    for i in range(-1, D - 1):
        lo, hi = cells_of_dim(n, D, i), cells_of_dim(n, D, i + 1)
        M = np.zeros((len(hi), len(lo)), dtype=field.dtype)
        for a, tau in enumerate(hi):
            for b, sigma in enumerate(lo):
                if sigma <= tau:
                    M[a, b] = 1
        out[i] = Mat(field, M)
    return out
