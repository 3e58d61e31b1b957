import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from prodexp.field import (
    Field, canonical_modulus, fe_add, fe_inv, fe_mul, is_irreducible, is_irreducible_rabin,
    is_irreducible_trial, make_field, poly_deg,
)


def test_small_moduli():
    assert canonical_modulus(1) == 0b11
    assert canonical_modulus(2) == 0b111
    assert canonical_modulus(3) == 0b1011
    assert canonical_modulus(8) == 0b100011011


def test_modulus_is_least_of_lowest_weight():
    for t in range(2, 11):
        f = canonical_modulus(t)
        w = bin(f).count("1")
        assert poly_deg(f) == t and is_irreducible_trial(f)
        for g in range(1 << t, 1 << (t + 1)):
            wg = bin(g).count("1")
            if is_irreducible_trial(g):
                assert wg > w or (wg == w and g >= f)


def test_rabin_agrees_with_trial_division():
    for f in range(2, 1 << 11):
        assert is_irreducible_rabin(f) == is_irreducible_trial(f), f


def test_large_degrees_construct():
    for t in (20, 31, 62, 64):
        F = make_field(t)
        assert poly_deg(F.modulus) == t and is_irreducible(F.modulus)


def test_degree_range():
    with pytest.raises(ValueError):
        make_field(0)
    with pytest.raises(ValueError):
        make_field(65)
    with pytest.raises(ValueError):
        Field(3, 0b1111)  # x^3+x^2+x+1 = (x+1)^3


def test_gf4_table():
    F = make_field(2)
    g = 2
    assert F.mul(g, g) == 3
    assert F.mul(g, 3) == 1
    assert F.mul(3, 3) == 2
    assert F.add(g, 1) == 3
    table = [[F.mul(a, b) for b in range(4)] for a in range(4)]
    assert table == [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]


def test_element_wrapper():
    F = make_field(2)
    g, one = F(2), F.one
    assert fe_add(g, one) == F(3)
    assert fe_mul(g, g) == g + one
    assert g * fe_inv(g) == one
    assert g + g == F.zero
    with pytest.raises(ZeroDivisionError):
        fe_inv(F.zero)
    with pytest.raises(ValueError):
        g + make_field(3)(2)


@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_axioms_exhaustive(t):
    F = make_field(t)
    q = F.q
    els = range(q)
    for a, b in itertools.product(els, els):
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(F.add(a, b), F.add(a, b)) == F.add(F.mul(a, a), F.mul(b, b))
    for a, b, c in itertools.product(els, els, els):
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1


def test_inverse_gf256(rng):
    F = make_field(8)
    for a in rng.integers(1, 256, size=1000):
        assert F.mul(int(a), F.inv(int(a))) == 1


@pytest.mark.parametrize("t", [5, 13, 20, 40, 62])
def test_random_high_degree(t):
    F = make_field(t)
    r = np.random.default_rng(t)

    @given(st.integers(0, F.q - 1), st.integers(0, F.q - 1), st.integers(0, F.q - 1))
    def check(a, b, c):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.add(a, b), F.add(a, b)) == F.add(F.mul(a, a), F.mul(b, b))
        if a:
            assert F.mul(a, F.inv(a)) == 1

    check()
    a, b = F.random(r, 50), F.random(r, 50)
    assert [int(v) for v in F.vmul(a, b)] == [F.mul(int(x), int(y)) for x, y in zip(a, b)]


@given(st.integers(1, 6), st.data())
def test_matmul_matches_scalar(t, data):
    F = make_field(t)
    m, k, n = (data.draw(st.integers(1, 4)) for _ in range(3))
    A = np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=m * k, max_size=m * k))).reshape(m, k)
    B = np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=k * n, max_size=k * n))).reshape(k, n)
    C = F.matmul(A.astype(F.dtype), B.astype(F.dtype))
    for i in range(m):
        for j in range(n):
            acc = 0
            for r in range(k):
                acc ^= F.mul(int(A[i, r]), int(B[r, j]))
            assert int(C[i, j]) == acc
