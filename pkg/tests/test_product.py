import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from prodexp import matrix as mx
from prodexp.code import LinearCode, code_sum, dual, full_code, intersect, random_code, rep_code, tensor, zero_code
from prodexp.errors import CapExceeded
from prodexp.experiments import non_ig_example
from prodexp.field import make_field
from prodexp.grid import CellSet, Grid, all_subsets, lines_in
from prodexp.matrix import Mat
from prodexp.product import (
    HS, HUPS, CodeTuple, GridWord, certify_maximally_extendable, direction_basis, duality_check, extendability_data,
    generic_rank, inner_generation_dims, is_extendable, is_good_substitution, is_inner_generated, line_weights,
    product_code, submatrix_HS, submatrix_HupS, sum_code, sum_code_basis, tensor_parity,
)
from prodexp.words import span_of_basis, unpack


@st.composite
def tuples(draw, max_n=3, max_D=2, max_t=2):
    F = make_field(draw(st.integers(1, max_t)))
    D = draw(st.integers(1, max_D))
    n = draw(st.integers(2, max_n))
    seed = draw(st.integers(0, 2**32))
    r = np.random.default_rng(seed)
    return CodeTuple(tuple(random_code(n, draw(st.integers(0, n)), F, r) for _ in range(D)))


def all_words(field, N):
    return unpack(span_of_basis(field, np.eye(N, dtype=np.int64).astype(field.dtype), N), N, field.t).reshape(-1, N)


def brute_extendable(tup, S):
    """Enumerate local words on S and the projection of the product code."""
    idx = S.indices()
    field = tup.field
    P = {tuple(int(w[j]) for j in idx) for w in all_words(field, tup.grid.size) if _in_product(tup, w)}
    inside = lines_in(S)
    local = 0
    for v in itertools.product(range(field.q), repeat=len(idx)):
        full = np.zeros(tup.grid.size, dtype=field.dtype)
        full[idx] = v
        ok = all(tup.codes[l.direction].contains(full[tup.grid.line_cells(l)]) for l in inside)
        local += ok
    return len(P) == local


def _in_product(tup, w):
    return all(
        tup.codes[l.direction].contains(w[tup.grid.line_cells(l)]) for l in tup.grid.lines()
    )


def test_tensor_parity_examples(F2):
    C = rep_code(3, F2)
    assert tensor_parity(CodeTuple((C,))) == C.par
    P = product_code(CodeTuple((rep_code(2, F2),) * 2))
    assert P.k == 1 and P.contains([1, 1, 1, 1])
    tup = CodeTuple((rep_code(3, F2), dual(rep_code(3, F2))))
    assert tensor_parity(tup).rows == (2 + 1) * 3


def test_sum_code_examples(F2):
    C = random_code(4, 2, F2, 3)
    assert LinearCode.from_generator(sum_code_basis(CodeTuple((C,)))) == C
    S = sum_code(CodeTuple((rep_code(2, F2),) * 2))
    assert S.k == 3
    assert all(int(w).bit_count() % 2 == 0 for w in S.codewords())


@given(tuples())
def test_sum_is_dual_of_product_of_duals(tup):
    sum_code_basis(tup, check=True)
    S = sum_code(tup)
    assert S == dual(product_code(tup.dual()))
    total = zero_code(tup.grid.size, tup.field)
    for i in range(tup.D):
        B = direction_basis(tup, i)
        if B.rows:
            total = code_sum(total, LinearCode.from_generator(B))
    assert S == total


@given(tuples())
def test_product_is_intersection_of_directions(tup):
    P = product_code(tup)
    acc = full_code(tup.grid.size, tup.field)
    for i in range(tup.D):
        B = direction_basis(tup, i)
        Ci = LinearCode.from_generator(B) if B.rows else zero_code(tup.grid.size, tup.field)
        acc = intersect(acc, Ci)
    assert P == acc
    if tup.D == 2:
        assert P == tensor(tup.codes[0], tup.codes[1])


def test_line_weights(F2):
    g = Grid(3, 2)
    assert line_weights(GridWord.zero(g, F2)) == (0, 0)
    e = np.zeros(9, dtype=np.uint8)
    e[4] = 1
    assert line_weights(GridWord(g, F2, e)) == (1, 1)
    assert line_weights(GridWord(g, F2, np.ones(9, dtype=np.uint8))) == (3, 3)


def test_submatrix_examples(F2):
    tup = CodeTuple((rep_code(3, F2), dual(rep_code(3, F2))))
    g = tup.grid
    full, empty = CellSet.full(g), CellSet(g)
    assert submatrix_HS(tup, full) == tup.parity
    assert submatrix_HupS(tup, full) == tup.parity
    assert submatrix_HS(tup, empty).cols == 0 and submatrix_HupS(tup, empty).shape == (0, 0)
    for line in g.lines():
        S = CellSet.from_indices(g, g.line_cells(line))
        H = submatrix_HupS(tup, S)
        K = mx.kernel_basis(H) if H.rows else Mat.identity(F2, 3)
        code = LinearCode.from_generator(K) if K.rows else zero_code(3, F2)
        assert code == tup.codes[line.direction]


def test_figure_one(F2):
    tup = CodeTuple((rep_code(3, F2),) * 2)
    M = non_ig_example()
    assert not is_inner_generated(tup, M)
    assert not is_extendable(tup.dual(), M)
    assert duality_check(tup, M) is False
    assert inner_generation_dims(tup, M) == (2, 3)


def test_trivial_sets(F2, F4):
    for tup in (CodeTuple((rep_code(3, F2),) * 2), CodeTuple((random_code(3, 1, F4, 0), random_code(3, 2, F4, 1)))):
        g = tup.grid
        for S in (CellSet.full(g), CellSet(g)):
            assert is_extendable(tup, S)
            assert is_inner_generated(tup, S)
            assert duality_check(tup, S)


def test_duality_exhaustive_rep3(F2):
    tup = CodeTuple((rep_code(3, F2),) * 2)
    bad = sum(not duality_check(tup, S) for S in all_subsets(tup.grid))
    assert bad > 0


@given(tuples(max_n=3, max_D=2, max_t=2), st.data())
def test_duality_random(tup, data):
    S = CellSet(tup.grid, data.draw(st.integers(0, (1 << tup.grid.size) - 1)))
    duality_check(tup, S)


@pytest.mark.parametrize("seed", range(6))
def test_extendability_against_enumeration(seed, F2):
    r = np.random.default_rng(seed)
    tup = CodeTuple(tuple(random_code(3, int(r.integers(0, 4)), F2, r) for _ in range(2)))
    for bits in r.integers(0, 512, size=25):
        S = CellSet(tup.grid, int(bits))
        assert is_extendable(tup, S) == brute_extendable(tup, S)
        d = extendability_data(tup, S)
        assert d.projection_dim <= d.local_dim


def test_intersection_identity(F2, F4):
    r = np.random.default_rng(99)
    for _ in range(50):
        n = int(r.integers(2, 4))
        F = F2 if r.random() < 0.5 else F4
        X, Y, C1, C2 = (random_code(n, int(r.integers(0, n + 1)), F, r) for _ in range(4))
        left = intersect(tensor(X, Y), sum_code(CodeTuple((C1, C2))))
        right = code_sum(tensor(intersect(X, C1), Y), tensor(X, intersect(Y, C2)))
        assert left == right


def test_generic_rank_examples():
    g1 = Grid(2, 1)
    assert generic_rank(2, (1,), CellSet.full(g1), HS) == 1
    assert generic_rank(3, (2,), CellSet.full(Grid(3, 1)), HS) == 2
    assert generic_rank(2, (1,), CellSet.from_coords(g1, [(1,)]), HS) == 1
    g = Grid(2, 2)
    line = CellSet.from_coords(g, [(0, 0), (1, 0)])
    assert generic_rank(2, (1, 1), line, HUPS) == 1
    assert generic_rank(2, (1, 1), CellSet(g), HUPS) == 0
    with pytest.raises(ValueError):
        generic_rank(2, (1,), CellSet.full(g1), HS, trials=0)


def test_good_substitution_examples(F2):
    good = is_good_substitution(2, [Mat.from_rows(F2, [[1, 1]])])
    assert good.good and good.checked == 4
    bad = is_good_substitution(2, [Mat.from_rows(F2, [[1, 0]])])
    assert not bad.good
    assert [r.subset for r in bad.failures] == [0b10]  # S = {second cell}
    assert all(r.good for r in bad.ranks if r.subset == 0)


def test_scope_limits(F2):
    tup = CodeTuple((rep_code(5, F2),) * 2)
    with pytest.raises(CapExceeded):
        certify_maximally_extendable(tup, scope="all")
    cert = certify_maximally_extendable(tup, scope=50, seed=3)
    assert cert.verdict.scope == "sampled 50" and cert.verdict.checked == 52
    assert certify_maximally_extendable(tup, scope=50, seed=3).to_text() == cert.to_text()


def test_certificates(F2):
    rep2 = CodeTuple((rep_code(2, F2),))
    assert certify_maximally_extendable(rep2).certified
    C = LinearCode.from_generator(Mat.from_rows(F2, [[1, 1, 0]]))  # zero generator column
    cert = certify_maximally_extendable(CodeTuple((C, C)))
    assert not cert.certified
    assert "certified: no" in cert.to_text()
    full = CodeTuple((full_code(2, F2),) * 2)
    assert certify_maximally_extendable(full).certified


def _certified_tuple(field, dims, n, seed):
    r = np.random.default_rng(seed)
    while True:
        tup = CodeTuple(tuple(random_code(n, k, field, r) for k in dims))
        if certify_maximally_extendable(tup).certified:
            return tup


def test_certified_tuple_dominates_competitors():
    F = make_field(16)
    ref = _certified_tuple(F, (1, 1), 2, 0)
    r = np.random.default_rng(1)
    subsets = list(all_subsets(ref.grid))
    ref_ext = [is_extendable(ref, S) for S in subsets]
    for j in range(20):
        G = make_field(int(r.integers(1, 3)))
        comp = CodeTuple(tuple(random_code(2, 1, G, r) for _ in range(2)))
        for S, mine in zip(subsets, ref_ext):
            if is_extendable(comp, CellSet(comp.grid, S.bits)):
                assert mine, (j, S.coords())


def test_orbit_reduction_is_exact():
    from prodexp.product import _generic_parities, _select_role
    from prodexp.product import stacked_row_lines
    n, ms = 3, (2, 1)
    mats = _generic_parities(n, ms, 3, 0)
    rows = stacked_row_lines(n, ms)
    r = np.random.default_rng(4)
    g = Grid(n, 2)
    for bits in r.integers(0, 512, size=40):
        S = CellSet(g, int(bits))
        for role in (HS, HUPS):
            direct = max(mx.rank(_select_role(H, rows, S, role)) for H in mats)
            assert generic_rank(n, ms, S, role) == direct
