"""Dense matrices over GF(2^t).

``Mat`` wraps a read-only 2-D numpy array together with its field. All
elimination-based routines (rank, kernel, solve, row reduction) have a
generic path using vectorised field arithmetic and, for t = 1, a bit-packed
path that stores each row as a Python int. ``method="auto"`` picks the
bit-packed path over F_2; tests cross-check the two.

Kronecker products use the lexicographic convention with the left factor's
index major, which matches the cell ordering of :mod:`prodexp.grid`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, FieldMismatch
from .field import Field


@dataclass(frozen=True, eq=False)
class Mat:
    field: Field
    a: np.ndarray

    def __post_init__(self):
        arr = np.array(self.a, dtype=self.field.dtype, copy=True)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise DimensionMismatch(f"matrix data must be 2-D, got shape {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "a", arr)

    # constructors -------------------------------------------------------------
    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        return cls(field, np.zeros((rows, cols), dtype=field.dtype))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        return cls(field, np.eye(n, dtype=np.int64).astype(field.dtype))

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[int]], cols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        return cls(field, field.asarray(rows))

    # shape --------------------------------------------------------------------
    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def T(self) -> "Mat":
        return Mat(self.field, self.a.T)

    def __matmul__(self, other):
        if isinstance(other, Mat):
            _same_field(self, other)
            return Mat(self.field, self.field.matmul(self.a, other.a))
        return self.field.matmul(self.a, np.asarray(other))

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self.a == other.a))
        )

    def __hash__(self):
        return hash((self.field, self.shape, tuple(int(v) for v in self.a.ravel())))

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.a]

    def __repr__(self):
        return f"Mat({self.field!r}, {self.tolist()})"

    def is_zero(self) -> bool:
        return not np.any(self.a != 0)


def _same_field(*mats: Mat) -> Field:
    field = mats[0].field
    for m in mats[1:]:
        if m.field != field:
            raise FieldMismatch(f"{field} vs {m.field}")
    return field


def _use_bits(field: Field, method: str) -> bool:
    if method not in ("auto", "generic", "bits"):
        raise ValueError(f"unknown method {method!r}")
    if method == "bits" and field.t != 1:
        raise ValueError("the bit-packed path only exists over F_2")
    return method == "bits" or (method == "auto" and field.t == 1)


# ---------------------------------------------------------------------------
# Row reduction
# ---------------------------------------------------------------------------

def _rref_generic(field: Field, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    A = np.array(a, dtype=field.dtype, copy=True)
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c] != 0)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        piv = A[r, c]
        if piv != 1:
            A[r] = field.vmul(A[r], field.inv(piv))
        col = A[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col != 0)
        if rows.size:
            A[rows] ^= field.vmul(col[rows][:, None], A[r][None, :])
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _pack_rows(a: np.ndarray) -> list[int]:
    out = []
    for row in a:
        v = 0
        for j in np.flatnonzero(row):
            v |= 1 << int(j)
        out.append(v)
    return out


def _rref_bits(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    rows = list(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        bit = 1 << c
        p = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _unpack_rows(rows: list[int], ncols: int) -> np.ndarray:
    out = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, v in enumerate(rows):
        j = 0
        while v:
            if v & 1:
                out[i, j] = 1
            v >>= 1
            j += 1
    return out


def rref(M: Mat, method: str = "auto") -> tuple[Mat, list[int]]:
    """Reduced row echelon form (zero rows dropped) and pivot columns."""
    if _use_bits(M.field, method):
        rows, piv = _rref_bits(_pack_rows(M.a), M.cols)
        return Mat(M.field, _unpack_rows(rows, M.cols).reshape(len(rows), M.cols)), piv
    R, piv = _rref_generic(M.field, M.a)
    return Mat(M.field, R.reshape(len(piv), M.cols)), piv


def rank(M: Mat, method: str = "auto") -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    if _use_bits(M.field, method):
        return len(_rref_bits(_pack_rows(M.a), M.cols)[1])
    return len(_rref_generic(M.field, M.a)[1])


def kernel_basis(M: Mat, method: str = "auto") -> Mat:
    """Rows spanning {x : M x = 0}; one row per free column of the RREF."""
    n = M.cols
    R, piv = rref(M, method)
    free = [j for j in range(n) if j not in set(piv)]
    K = np.zeros((len(free), n), dtype=M.field.dtype)
    for row, f in enumerate(free):
        K[row, f] = 1
        for i, p in enumerate(piv):
            K[row, p] = R.a[i, f]  # characteristic 2: -r = r
    return Mat(M.field, K.reshape(len(free), n))


def solve(M: Mat, y, method: str = "auto") -> np.ndarray | None:
    """Some x with M x = y (free variables set to zero), or None."""
    y = np.asarray(y, dtype=M.field.dtype).reshape(-1)
    if y.shape[0] != M.rows:
        raise DimensionMismatch(f"right-hand side has length {y.shape[0]}, need {M.rows}")
    aug = Mat(M.field, np.concatenate([M.a, y[:, None]], axis=1))
    R, piv = rref(aug, method)
    if piv and piv[-1] == M.cols:
        return None
    x = np.zeros(M.cols, dtype=M.field.dtype)
    for i, p in enumerate(piv):
        x[p] = R.a[i, M.cols]
    return x


def in_rowspace(M: Mat, v) -> bool:
    v = np.asarray(v, dtype=M.field.dtype).reshape(1, -1)
    if M.rows == 0:
        return not np.any(v != 0)
    return rank(stack_rows([M, Mat(M.field, v)])) == rank(M)


# ---------------------------------------------------------------------------
# Structural operations
# ---------------------------------------------------------------------------

def kron(A: Mat, B: Mat) -> Mat:
    """(A ⊗ B)[(i1, i2), (j1, j2)] = A[i1, j1] B[i2, j2], A-index major."""
    field = _same_field(A, B)
    prod = field.vmul(A.a[:, None, :, None], B.a[None, :, None, :])
    return Mat(field, np.asarray(prod).reshape(A.rows * B.rows, A.cols * B.cols))


def kron_all(mats: Sequence[Mat]) -> Mat:
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return out


def stack_rows(mats: Sequence[Mat], cols: int | None = None) -> Mat:
    if not mats:
        raise ValueError("stack_rows needs at least one matrix")
    field = _same_field(*mats)
    widths = {m.cols for m in mats}
    if len(widths) != 1:
        raise DimensionMismatch(f"cannot stack widths {sorted(widths)}")
    return Mat(field, np.concatenate([m.a for m in mats], axis=0))


def _indices(idx: Iterable[int], bound: int) -> list[int]:
    out = sorted(int(i) for i in idx)
    if out and (out[0] < 0 or out[-1] >= bound):
        raise IndexError(f"index out of range [0, {bound})")
    return out


def select_columns(M: Mat, S: Iterable[int]) -> Mat:
    """Columns of M with indices in S (0-based, kept in increasing order)."""
    cols = _indices(S, M.cols)
    return Mat(M.field, M.a[:, cols].reshape(M.rows, len(cols)))


def select_rows(M: Mat, R: Iterable[int]) -> Mat:
    rows = _indices(R, M.rows)
    return Mat(M.field, M.a[rows, :].reshape(len(rows), M.cols))


def hstack(mats: Sequence[Mat]) -> Mat:
    field = _same_field(*mats)
    return Mat(field, np.concatenate([m.a for m in mats], axis=1))


def block_diag(mats: Sequence[Mat]) -> Mat:
    field = _same_field(*mats)
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=field.dtype)
    r = c = 0
    for m in mats:
        out[r:r + m.rows, c:c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Mat(field, out)


# ---------------------------------------------------------------------------
# Subspaces given by row spaces
# ---------------------------------------------------------------------------

def subspace_dim_sum(spaces: Sequence[Mat]) -> int:
    """dim of the sum of the row spaces."""
    return rank(stack_rows(list(spaces)))


def subspace_intersect_coords(M: Mat, S: Iterable[int]) -> Mat:
    """Basis of {x in rowspace(M) : supp x ⊆ S}."""
    B, _ = rref(M)
    outside = [j for j in range(M.cols) if j not in set(_indices(S, M.cols))]
    if B.rows == 0:
        return B
    if not outside:
        return B
    Z = kernel_basis(select_columns(B, outside).T)
    if Z.rows == 0:
        return Mat.zeros(M.field, 0, M.cols)
    return rref(Z @ B)[0]


def intersect_rowspaces(A: Mat, B: Mat) -> Mat:
    """Basis of rowspace(A) ∩ rowspace(B)."""
    _same_field(A, B)
    if A.cols != B.cols:
        raise DimensionMismatch("ambient lengths differ")
    return kernel_basis(stack_rows([kernel_basis(A), kernel_basis(B)]))


def same_rowspace(A: Mat, B: Mat) -> bool:
    if A.cols != B.cols or A.field != B.field:
        return False
    ra, rb = rank(A), rank(B)
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rank(stack_rows([A, B])) == ra


def random_full_rank(m: int, n: int, field: Field, rng: np.random.Generator | int | None = None) -> Mat:
    """Uniform sample from the full-rank m x n matrices, by rejection."""
    if m > n:
        raise DimensionMismatch(f"a full-rank {m}x{n} matrix needs m <= n")
    rng = np.random.default_rng(rng)
    while True:
        M = Mat(field, np.asarray(field.random(rng, size=(m, n))).reshape(m, n))
        if rank(M) == m:
            return M


def random_matrix(m: int, n: int, field: Field, rng: np.random.Generator | int | None = None) -> Mat:
    rng = np.random.default_rng(rng)
    return Mat(field, np.asarray(field.random(rng, size=(m, n))).reshape(m, n))
