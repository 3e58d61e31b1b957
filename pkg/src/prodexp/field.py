"""Arithmetic in GF(2^t), 1 <= t <= 64.

Elements are plain Python/numpy integers holding the residue's bit pattern
(bit j is the coefficient of x^j). Addition is XOR. Vectorised products for
t <= 16 go through log/antilog tables; larger fields fall back to object
arrays of Python ints with carry-less multiplication.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import FieldMismatch

MAX_DEGREE = 64
TABLE_DEGREE = 16


# ---------------------------------------------------------------------------
# Polynomials over F_2 encoded as ints
# ---------------------------------------------------------------------------

def poly_deg(f: int) -> int:
    return f.bit_length() - 1


def poly_mod(a: int, f: int) -> int:
    df = poly_deg(f)
    while a and poly_deg(a) >= df:
        a ^= f << (poly_deg(a) - df)
    return a


def poly_mulmod(a: int, b: int, f: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    prod = 0
    while b:
        low = b & -b
        prod ^= a << (low.bit_length() - 1)
        b ^= low
    return _reduce(prod, f)


def _reduce(a: int, f: int) -> int:
    df = poly_deg(f)
    tail = f ^ (1 << df)
    mask = (1 << df) - 1
    if tail.bit_count() <= 5:  # sparse modulus: fold the high part down
        exps = [e for e in range(df) if tail >> e & 1]
        while a >> df:
            hi = a >> df
            a &= mask
            for e in exps:
                a ^= hi << e
        return a
    return poly_mod(a, f)


def poly_inv(a: int, f: int) -> int:
    """Inverse of a modulo f by the extended Euclidean algorithm."""
    r0, r1, s0, s1 = f, a, 0, 1
    while r1:
        while r0 and poly_deg(r0) >= poly_deg(r1):
            sh = poly_deg(r0) - poly_deg(r1)
            r0 ^= r1 << sh
            s0 ^= s1 << sh
        r0, r1, s0, s1 = r1, r0, s1, s0
    if r0 != 1:
        raise ZeroDivisionError("element is not invertible")
    return _reduce(s0, f)


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _prime_factors(t: int) -> list[int]:
    out, p = [], 2
    while p * p <= t:
        if t % p == 0:
            out.append(p)
            while t % p == 0:
                t //= p
        p += 1
    if t > 1:
        out.append(t)
    return out


def is_irreducible_rabin(f: int) -> bool:
    """Rabin's irreducibility test over F_2."""
    t = poly_deg(f)
    if t < 1:
        return False
    if t == 1:
        return True

    def frob(k: int) -> int:  # x^(2^k) mod f
        y = 0b10
        for _ in range(k):
            y = poly_mulmod(y, y, f)
        return y

    if frob(t) != poly_mod(0b10, f):
        return False
    for p in _prime_factors(t):
        if poly_gcd(f, frob(t // p) ^ 0b10) != 1:
            return False
    return True


def is_irreducible_trial(f: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(f)//2."""
    t = poly_deg(f)
    if t < 1:
        return False
    for g in range(2, 1 << (t // 2 + 1)):
        if poly_mod(f, g) == 0:
            return False
    return True


TRIAL_DIVISION_MAX_DEGREE = 24


def is_irreducible(f: int) -> bool:
    if poly_deg(f) <= TRIAL_DIVISION_MAX_DEGREE:
        return is_irreducible_trial(f)
    return is_irreducible_rabin(f)


def _middle_exponents(t: int, count: int, below: int | None = None):
    """Descending exponent tuples in [1, t-1], in increasing integer order."""
    if count == 0:
        yield ()
        return
    hi = t - 1 if below is None else below - 1
    for e in range(count, hi + 1):
        for rest in _middle_exponents(t, count - 1, e):
            yield (e,) + rest


def canonical_modulus(t: int) -> int:
    """Lowest-weight irreducible of degree t with constant term 1; among those
    the one with the smallest integer encoding."""
    if not 1 <= t <= MAX_DEGREE:
        raise ValueError(f"extension degree must be in [1, {MAX_DEGREE}], got {t}")
    for weight in range(2, t + 2):
        for mids in _middle_exponents(t, weight - 2):
            f = (1 << t) | 1
            for e in mids:
                f |= 1 << e
            if is_irreducible_rabin(f):
                return f
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

class Field:
    """The field GF(2^t) with a fixed canonical modulus."""

    def __init__(self, t: int, modulus: int | None = None):
        if not 1 <= t <= MAX_DEGREE:
            raise ValueError(f"extension degree must be in [1, {MAX_DEGREE}], got {t}")
        if modulus is None:
            modulus = canonical_modulus(t)
        if poly_deg(modulus) != t or not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#x} is not an irreducible of degree {t}")
        self.t = t
        self.modulus = modulus
        self.q = 1 << t
        self._tables = t <= TABLE_DEGREE
        if self._tables:
            self._build_tables()

    # identity -------------------------------------------------------------
    def __repr__(self):
        return f"GF(2^{self.t}, modulus={self.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.t, self.modulus) == (other.t, other.modulus)

    def __hash__(self):
        return hash((self.t, self.modulus))

    def __reduce__(self):
        return (Field, (self.t, self.modulus))

    @property
    def dtype(self):
        return np.int64 if self._tables else object

    # tables ---------------------------------------------------------------
    def _build_tables(self):
        q = self.q
        if q == 2:
            self.exp = np.array([1, 1], dtype=np.int64)
            self.log = np.array([0, 0], dtype=np.int64)
            return
        order = q - 1
        factors = _prime_factors(order)
        for g in range(2, q):
            if all(self._pow_slow(g, order // p) != 1 for p in factors):
                break
        exp = np.empty(2 * order, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            x = poly_mulmod(x, g, self.modulus)
        exp[order:] = exp[:order]
        log = np.zeros(q, dtype=np.int64)
        log[exp[:order]] = np.arange(order)
        self.exp, self.log, self.generator = exp, log, g

    def _pow_slow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = poly_mulmod(result, a, self.modulus)
            a = poly_mulmod(a, a, self.modulus)
            e >>= 1
        return result

    # scalar arithmetic ----------------------------------------------------
    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of {self}")
        return a

    @staticmethod
    def add(a: int, b: int) -> int:
        return int(a) ^ int(b)

    def mul(self, a: int, b: int) -> int:
        a, b = int(a), int(b)
        if a == 0 or b == 0:
            return 0
        if self._tables:
            return int(self.exp[self.log[a] + self.log[b]])
        return poly_mulmod(a, b, self.modulus)

    def inv(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self._tables:
            return int(self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)])
        return poly_inv(self.check(a), self.modulus)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self._pow_slow(self.inv(a), -e)
        return self._pow_slow(int(a), e)

    # vectorised arithmetic ------------------------------------------------
    def asarray(self, values) -> np.ndarray:
        arr = np.array(values, dtype=self.dtype)
        if arr.size and self._tables and (arr.min() < 0 or arr.max() >= self.q):
            raise ValueError(f"entries out of range for {self}")
        return arr

    def vmul(self, a, b) -> np.ndarray:
        """Elementwise product with numpy broadcasting."""
        if self._tables:
            a = np.asarray(a, dtype=np.int64)
            b = np.asarray(b, dtype=np.int64)
            if self.q == 2:
                return a & b
            prod = self.exp[self.log[a] + self.log[b]]
            return np.where((a == 0) | (b == 0), 0, prod)
        return _vmul_obj(self)(np.asarray(a, dtype=object), np.asarray(b, dtype=object))

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=self.dtype)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self._tables:
            return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]
        return np.frompyfunc(self.inv, 1, 1)(a)

    def matmul(self, A, B) -> np.ndarray:
        """Matrix product over the field (vector operands allowed)."""
        A = np.asarray(A, dtype=self.dtype)
        B = np.asarray(B, dtype=self.dtype)
        if A.ndim == 1:
            return self.matmul(A[None, :], B)[0]
        vec = B.ndim == 1
        if vec:
            B = B[:, None]
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        if A.shape[1] == 0:
            out = np.zeros((A.shape[0], B.shape[1]), dtype=self.dtype)
        else:
            prods = self.vmul(A[:, :, None], B[None, :, :])
            out = np.bitwise_xor.reduce(prods, axis=1)
            if out.dtype != self.dtype:
                out = out.astype(self.dtype)
        return out[:, 0] if vec else out

    def random(self, rng: np.random.Generator, size=None):
        if self.t <= 62:
            out = rng.integers(0, self.q, size=size, dtype=np.int64)
            return out if self._tables or size is None else out.astype(object)
        # 63/64-bit fields: assemble from two 32-bit halves.
        hi = rng.integers(0, 1 << (self.t - 32), size=size, dtype=np.int64)
        lo = rng.integers(0, 1 << 32, size=size, dtype=np.int64)
        if size is None:
            return (int(hi) << 32) | int(lo)
        return (hi.astype(object) << 32) | lo.astype(object)

    # elements ---------------------------------------------------------------
    def __call__(self, value: int) -> "FieldElem":
        return FieldElem(self, self.check(value))

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, 1)


@functools.lru_cache(maxsize=None)
def _vmul_obj(field: Field):
    return np.frompyfunc(field.mul, 2, 1)


@functools.lru_cache(maxsize=None)
def make_field(t: int) -> Field:
    """The field GF(2^t) with its canonical modulus (cached per degree)."""
    return Field(t)


def field_of_order(q: int) -> Field:
    if q < 2 or q & (q - 1):
        raise ValueError(f"field order must be a power of two >= 2, got {q}")
    return make_field(q.bit_length() - 1)


@dataclass(frozen=True)
class FieldElem:
    """A field element tied to its field; supports +, *, / and ** ."""

    field: Field
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        return self.field.check(other)

    def __add__(self, other):
        return FieldElem(self.field, self.value ^ self._other(other))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        return self * FieldElem(self.field, self._other(other)).inverse()

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow(self.value, e))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}@GF(2^{self.field.t})"


def fe_add(a: FieldElem, b: FieldElem) -> FieldElem:
    return a + b


def fe_mul(a: FieldElem, b: FieldElem) -> FieldElem:
    return a * b


def fe_inv(a: FieldElem) -> FieldElem:
    return a.inverse()
