"""Linear codes over GF(2^t) with generator and parity-check views."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import matrix as mx
from .config import DEFAULT_CAPS, Caps
from .errors import DimensionMismatch, FieldMismatch
from .field import Field
from .matrix import Mat
from .words import span_of_basis, weights


@dataclass(frozen=True, eq=False)
class LinearCode:
    """A k-dimensional subspace of F_q^n.

    ``gen`` is the canonical (RREF) generator, so two codes are equal iff
    their generators coincide. ``par`` is any matrix whose kernel is the
    code; it may be overcomplete, and it is kept verbatim when the code was
    built from a parity-check matrix.
    """

    field: Field
    n: int
    gen: Mat
    par: Mat
    name: str = dc_field(default="", compare=False)

    @property
    def k(self) -> int:
        return self.gen.rows

    @classmethod
    def from_generator(cls, G: Mat, name: str = "") -> "LinearCode":
        R, _ = mx.rref(G)
        H = mx.kernel_basis(R) if R.rows else Mat.identity(G.field, G.cols)
        H = mx.rref(H)[0] if H.rows else Mat.zeros(G.field, 0, G.cols)
        return cls(G.field, G.cols, R, H, name)

    @classmethod
    def from_parity(cls, H: Mat, name: str = "") -> "LinearCode":
        K = mx.kernel_basis(H)
        R = mx.rref(K)[0] if K.rows else Mat.zeros(H.field, 0, H.cols)
        return cls(H.field, H.cols, R, H, name)

    def check(self) -> None:
        if self.gen.rows and self.par.rows:
            if not (self.gen @ self.par.T).is_zero():
                raise AssertionError("generator rows violate parity checks")
        if mx.rank(self.gen) != self.k:
            raise AssertionError("generator is not full rank")
        if mx.rank(self.par) != self.n - self.k:
            raise AssertionError("parity-check matrix has the wrong rank")

    def __eq__(self, other):
        return (
            isinstance(other, LinearCode)
            and self.field == other.field
            and self.n == other.n
            and self.gen == other.gen
        )

    def __hash__(self):
        return hash((self.field, self.n, self.gen))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"LinearCode[{self.n},{self.k}] over GF(2^{self.field.t}){label}"

    def contains(self, word) -> bool:
        word = np.asarray(word, dtype=self.field.dtype)
        if self.par.rows == 0:
            return True
        return not np.any(self.par @ word != 0)

    def is_full(self) -> bool:
        return self.k == self.n

    def codewords(self) -> np.ndarray:
        """All codewords packed (see :mod:`prodexp.words`)."""
        return span_of_basis(self.field, self.gen.a, self.n)

    def with_parity(self, H: Mat) -> "LinearCode":
        """Same code, different (verified) parity-check matrix."""
        other = LinearCode.from_parity(H)
        if other != self:
            raise ValueError("matrix is not a parity-check matrix of this code")
        return LinearCode(self.field, self.n, self.gen, H, self.name)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def rep_code(n: int, field: Field) -> LinearCode:
    return LinearCode.from_generator(Mat(field, np.ones((1, n), dtype=np.int64)), name=f"Rep_{n}")


def zero_code(n: int, field: Field) -> LinearCode:
    return LinearCode(field, n, Mat.zeros(field, 0, n), Mat.identity(field, n), name=f"0_{n}")


def full_code(n: int, field: Field) -> LinearCode:
    return LinearCode(field, n, Mat.identity(field, n), Mat.zeros(field, 0, n), name=f"F^{n}")


def dual(C: LinearCode) -> LinearCode:
    if C.k == C.n:
        return zero_code(C.n, C.field)
    if C.k == 0:
        return full_code(C.n, C.field)
    return LinearCode(C.field, C.n, mx.rref(C.par)[0], C.gen, name=f"{C.name}^perp" if C.name else "")


def random_code(n: int, k: int, field: Field, rng: np.random.Generator | int | None = None) -> LinearCode:
    """Uniform sample from Gr_q(n, k).

    A uniform full-rank k x n generator induces the uniform distribution on
    subspaces, since every subspace has the same number of bases.
    """
    if not 0 <= k <= n:
        raise DimensionMismatch(f"need 0 <= k <= n, got k={k}, n={n}")
    if k == 0:
        return zero_code(n, field)
    return LinearCode.from_generator(mx.random_full_rank(k, n, field, rng))


def random_subcode(C: LinearCode, k: int, rng: np.random.Generator | int | None = None) -> LinearCode:
    """Uniform k-dimensional subspace of C."""
    if not 0 <= k <= C.k:
        raise DimensionMismatch(f"subcode dimension {k} not in [0, {C.k}]")
    if k == 0:
        return zero_code(C.n, C.field)
    A = mx.random_full_rank(k, C.k, C.field, rng)
    return LinearCode.from_generator(A @ C.gen)


def min_distance(C: LinearCode, caps: Caps = DEFAULT_CAPS) -> int:
    if C.k == 0:
        raise ValueError("the zero code has no nonzero codewords")
    caps.check("distance", "minimum distance codewords", C.field.q ** C.k)
    words = C.codewords()
    return int(weights(words[1:], C.n, C.field.t).min())


def is_degenerate(codes: Sequence[LinearCode]) -> bool:
    return any(C.is_full() for C in codes)


# ---------------------------------------------------------------------------
# Subspace algebra on codes
# ---------------------------------------------------------------------------

def _compatible(A: LinearCode, B: LinearCode) -> None:
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    if A.n != B.n:
        raise DimensionMismatch(f"lengths {A.n} and {B.n} differ")


def code_sum(A: LinearCode, B: LinearCode) -> LinearCode:
    _compatible(A, B)
    return LinearCode.from_generator(mx.stack_rows([A.gen, B.gen]))


def intersect(A: LinearCode, B: LinearCode) -> LinearCode:
    _compatible(A, B)
    return LinearCode.from_parity(mx.stack_rows([A.par, B.par]))


def tensor(A: LinearCode, B: LinearCode) -> LinearCode:
    """A ⊗ B on [n_A] x [n_B] with the first factor's index major."""
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    if A.k == 0 or B.k == 0:
        return zero_code(A.n * B.n, A.field)
    return LinearCode.from_generator(mx.kron(A.gen, B.gen))


def is_subcode(A: LinearCode, B: LinearCode) -> bool:
    """A ⊆ B."""
    _compatible(A, B)
    if A.k == 0:
        return True
    if B.par.rows == 0:
        return True
    return (A.gen @ B.par.T).is_zero()
