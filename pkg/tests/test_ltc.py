from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from prodexp import matrix as mx
from prodexp.code import LinearCode, full_code, min_distance, random_code, rep_code, tensor
from prodexp.errors import CapExceeded
from prodexp.config import Caps
from prodexp.field import make_field
from prodexp.ltc import (
    FamilyExhausted, LTCParams, SoundnessRange, delta_limited, ltc_params, pad_bound, pad_zero, rate_adapt,
    soundness_exact, soundness_range, soundness_range_bruteforce, tensor_extend,
)
from prodexp.matrix import Mat


@st.composite
def parity_matrices(draw, max_n=6):
    F = make_field(draw(st.integers(1, 2)))
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, n))
    r = np.random.default_rng(draw(st.integers(0, 2**32)))
    H = mx.random_matrix(m, n, F, r)
    if mx.rank(H) == 0:
        H = Mat.identity(F, n)
    return H


def test_soundness_examples(F2, F4):
    H = Mat.from_rows(F2, [[1, 1]])
    assert soundness_range(H) == SoundnessRange(Fraction(1), Fraction(1))
    assert soundness_range(Mat.identity(F4, 4)) == SoundnessRange(Fraction(1), Fraction(1))
    assert soundness_exact(H) == 2
    assert soundness_exact(Mat.identity(F2, 5)) == 1
    with pytest.raises(ValueError):
        SoundnessRange(Fraction(2), Fraction(1))
    with pytest.raises(ValueError):
        soundness_range(Mat.zeros(F2, 2, 3))


def test_soundness_cap(F2):
    with pytest.raises(CapExceeded):
        soundness_range(Mat.identity(F2, 8), Caps(codewords=16))


@given(parity_matrices())
@settings(max_examples=40)
def test_soundness_matches_full_scan(H):
    assert soundness_range(H) == soundness_range_bruteforce(H)


@given(parity_matrices(max_n=4), st.integers(2, 3))
@settings(max_examples=25)
def test_soundness_kron_invariance(H, t):
    base = soundness_range(H)
    I = Mat.identity(H.field, t)
    assert soundness_range(mx.kron(I, H)) == base
    assert soundness_range(mx.kron(H, I)) == base


def test_soundness_definition_on_all_words(F2):
    r = np.random.default_rng(8)
    for _ in range(5):
        H = mx.random_matrix(3, 6, F2, r)
        if not mx.rank(H):
            continue
        rng_ = soundness_range(H)
        C = LinearCode.from_parity(H)
        cw = [np.array([(int(w) >> (5 - j)) & 1 for j in range(6)]) for w in C.codewords()]
        for x in range(64):
            v = np.array([(x >> (5 - j)) & 1 for j in range(6)])
            d = min(int(np.count_nonzero(v ^ c)) for c in cw)
            s = int(np.count_nonzero(F2.matmul(H.a, v)))
            assert rng_.alpha_l * d <= s <= rng_.alpha_h * d


def test_delta_limited(F2):
    assert delta_limited(Mat.identity(F2, 4)) == 1
    assert delta_limited(Mat(F2, np.ones((2, 3), dtype=np.uint8))) == 3
    r = np.random.default_rng(1)
    for _ in range(10):
        H = mx.random_matrix(3, 4, F2, r)
        assert delta_limited(mx.kron(H, Mat.identity(F2, 3))) == delta_limited(H)


def test_tensor_extend(F2):
    C = rep_code(2, F2)
    assert tensor_extend(C, 1) is C
    T = tensor_extend(C, 2)
    assert (T.n, T.k) == (4, 2)
    assert T == tensor(C, full_code(2, F2))
    assert soundness_exact(T.par) == 2
    with pytest.raises(ValueError):
        tensor_extend(C, 0)


def test_pad_zero(F2):
    C = rep_code(2, F2)
    assert pad_zero(C, 0) is C
    P = pad_zero(C, 1)
    assert (P.n, P.k) == (3, 1)
    assert sorted(int(w) for w in P.codewords()) == [0, 0b110]
    assert soundness_exact(P.par) >= pad_bound(soundness_exact(C.par)) == 1
    assert delta_limited(P.par) == max(delta_limited(C.par), 1)
    with pytest.raises(ValueError):
        pad_zero(C, -1)


@pytest.mark.parametrize("seed", range(15))
def test_ltc_lemmas_on_random_codes(seed):
    r = np.random.default_rng(seed)
    F = make_field(int(r.integers(1, 3)))
    n = int(r.integers(2, 7))
    m = int(r.integers((n + 1) // 2, n + 1))
    H = mx.random_matrix(m, n, F, r)
    if not mx.rank(H):
        return
    s, Delta = soundness_exact(H), delta_limited(H)
    rng_ = soundness_range(H)
    assert rng_.alpha_l >= s / 2 and rng_.alpha_h <= Delta
    C = LinearCode.from_parity(H)
    t = 2 if F.q ** (2 * mx.rank(H)) <= 2**16 else 1
    T = tensor_extend(C, t)
    assert soundness_exact(T.par) >= s and delta_limited(T.par) == Delta
    P = pad_zero(C, int(r.integers(1, 4)))
    assert soundness_exact(P.par) >= pad_bound(s)


def test_ltc_params(F2):
    p = ltc_params(rep_code(2, F2))
    assert p == LTCParams(2, Fraction(2), 1, 2)
    assert p.to_line() == "ltc 2 2 1 1"


def _family(F):
    r = np.random.default_rng(0)
    return [rep_code(2, F), random_code(6, 3, F, r), random_code(18, 9, F, r)]


def test_rate_adapt_small_n(F2):
    C, tr = rate_adapt(_family(F2), 3, Fraction(1, 3))
    assert C == full_code(3, F2) and tr.j is None


def test_rate_adapt_toy_family(F2):
    fam = _family(F2)
    R = Fraction(1, 3)
    for n in range(6, 40):
        C, tr = rate_adapt(fam, n, R)
        r = (1 + R) / 2
        assert C.n == n and C.k >= R * n
        if tr.j is not None:
            assert fam[tr.j].n <= (1 - r) * n
            assert tr.t * fam[tr.j].n + tr.u == n
            if C.field.q ** C.k <= 2**16:
                assert min_distance(C) == min_distance(fam[tr.j])
    C, tr = rate_adapt(fam, 7, R)
    assert (tr.j, tr.t, tr.u) == (0, 3, 1) and C.k == 3


def test_rate_adapt_without_padding(F2):
    C, tr = rate_adapt(_family(F2), 12, Fraction(1, 3))
    assert tr.u == 0 and C == tensor_extend(_family(F2)[tr.j], tr.t)


def test_rate_adapt_errors(F2):
    fam = _family(F2)
    with pytest.raises(FamilyExhausted):
        rate_adapt(fam, 200, Fraction(1, 3), growth_bound=3)
    with pytest.raises(ValueError):
        rate_adapt(fam, 10, Fraction(1, 3), growth_bound=2)
    with pytest.raises(ValueError):
        rate_adapt([], 10, Fraction(1, 3))
    with pytest.raises(ValueError):
        rate_adapt(fam[::-1], 10, Fraction(1, 3))
    with pytest.raises(ValueError):
        rate_adapt(fam, 10, 1)
