from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from prodexp.experiments import CLOSURE_ROUNDS, closure_example, non_ig_example
from prodexp.grid import (
    CellSet, Grid, LineId, all_subsets, closure_constant, closure_rounds, eps_closure, is_eps_closed, lines_in,
    max_partial_fraction,
)

EPS = st.sampled_from([Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1)])


@st.composite
def cellsets(draw, max_n=4, max_D=3):
    n, D = draw(st.integers(1, max_n)), draw(st.integers(1, max_D))
    g = Grid(n, D)
    return CellSet(g, draw(st.integers(0, (1 << g.size) - 1)))


def brute_closure(M, eps, inclusive=True):
    n = M.grid.n
    cur = set(M.indices())
    changed = True
    while changed:
        changed = False
        for line in M.grid.lines():
            cells = set(int(c) for c in M.grid.line_cells(line))
            k = len(cells & cur)
            hit = k >= eps * n if inclusive else k > eps * n
            if hit and not cells <= cur:
                cur |= cells
                changed = True
    return CellSet.from_indices(M.grid, cur)


def test_indexing_matches_kronecker():
    g = Grid(3, 3)
    assert g.index((1, 2, 0)) == 1 * 9 + 2 * 3 + 0
    assert all(g.index(g.coords(i)) == i for i in range(g.size))
    with pytest.raises(ValueError):
        g.index((3, 0, 0))


@pytest.mark.parametrize("n,D", [(2, 1), (3, 2), (2, 3), (4, 3)])
def test_line_counts(n, D):
    g = Grid(n, D)
    for i in range(D):
        assert len(g.lines(i)) == n ** (D - 1)
    assert len(g.lines()) == D * n ** (D - 1)
    through = [0] * g.size
    for line in g.lines():
        cells = g.line_cells(line)
        assert len(set(cells.tolist())) == n
        assert [g.index(c) for c in line.cell_coords(n)] == cells.tolist()
        for c in cells:
            through[c] += 1
    assert set(through) == {D}


def test_lines_in():
    g = Grid(3, 2)
    assert len(lines_in(CellSet.full(g))) == 6
    assert lines_in(CellSet(g)) == []
    assert lines_in(non_ig_example()) == [LineId(0, (0,)), LineId(1, (2,))]


def test_figure_closure():
    M = closure_example()
    assert len(M) == 13
    half = Fraction(1, 2)
    out = eps_closure(M, half, inclusive=False)
    assert len(out) == 21
    rounds = closure_rounds(M, half, inclusive=False)
    assert [sorted(r.coords()) for r in rounds] == [sorted(r) for r in CLOSURE_ROUNDS]
    assert not is_eps_closed(M, half, inclusive=False)
    assert is_eps_closed(out, half, inclusive=False)


def test_figure_under_definition_rule():
    # with "at least εn" the same input keeps growing past the reference closure
    M = closure_example()
    out = eps_closure(M, Fraction(1, 2))
    assert out == brute_closure(M, Fraction(1, 2))
    assert len(out) == 36


def test_closure_trivia():
    g = Grid(4, 2)
    assert eps_closure(CellSet(g), Fraction(1, 2)) == CellSet(g)
    single = CellSet.from_coords(g, [(1, 2)])
    assert eps_closure(single, Fraction(1, 2)) == single
    assert is_eps_closed(CellSet.full(g), Fraction(1, 4))
    union = CellSet.from_coords(g, [(x, 1) for x in range(4)] + [(0, 3)])
    assert is_eps_closed(union, Fraction(3, 4))
    assert not is_eps_closed(union, Fraction(1, 2))
    with pytest.raises(ValueError):
        eps_closure(single, 0)


def test_closure_constant():
    assert closure_constant(1, 2) == 25
    assert closure_constant(Fraction(1, 2), 2) == 100
    assert closure_constant(1, 3) == 729


def test_max_partial_fraction():
    g = Grid(3, 2)
    assert max_partial_fraction(CellSet.full(g)) is None
    assert max_partial_fraction(non_ig_example()) == Fraction(2, 3)
    assert max_partial_fraction(CellSet(g)) == 0


@given(cellsets(), EPS, st.booleans())
def test_closure_matches_brute_force(M, eps, inclusive):
    assert eps_closure(M, eps, inclusive=inclusive) == brute_closure(M, eps, inclusive)


@given(cellsets(), EPS)
def test_closure_idempotent_and_closed(M, eps):
    C = eps_closure(M, eps)
    assert M.issubset(C)
    assert eps_closure(C, eps) == C
    assert is_eps_closed(C, eps)
    rounds = closure_rounds(M, eps)
    total = M
    for r in rounds:
        total = total | r
    assert total == C


@given(cellsets(), st.data(), EPS)
def test_closure_monotone(M, data, eps):
    extra = CellSet(M.grid, data.draw(st.integers(0, (1 << M.grid.size) - 1)))
    assert eps_closure(M, eps).issubset(eps_closure(M | extra, eps))


def test_closure_size_exhaustive_small():
    g = Grid(3, 2)
    for eps in (Fraction(1, 3), Fraction(2, 3), Fraction(1)):
        c = closure_constant(eps, 2)
        for M in all_subsets(g):
            assert len(eps_closure(M, eps)) <= c * len(M)


def test_cellset_algebra():
    g = Grid(2, 2)
    A = CellSet.from_coords(g, [(0, 0), (1, 1)])
    B = CellSet.from_coords(g, [(0, 0), (0, 1)])
    assert len(A | B) == 3 and len(A & B) == 1 and len(A - B) == 1
    assert A.complement() == CellSet.from_coords(g, [(0, 1), (1, 0)])
    assert (0, 0) in A and g.index((1, 0)) not in A
    with pytest.raises(ValueError):
        A | CellSet(Grid(3, 2))
