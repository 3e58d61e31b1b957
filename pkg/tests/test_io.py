
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from prodexp import io
from prodexp import matrix as mx
from prodexp.code import random_code, rep_code
from prodexp.errors import ParseError
from prodexp.experiments import closure_example
from prodexp.field import make_field
from prodexp.grid import CellSet, Grid
from prodexp.ltc import ltc_params
from prodexp.product import CodeTuple


@given(st.integers(1, 3), st.integers(0, 4), st.integers(1, 5), st.integers(0, 2**32))
@settings(max_examples=40)
def test_matrix_roundtrip(t, rows, cols, seed):
    F = make_field(t)
    M = mx.random_matrix(rows, cols, F, np.random.default_rng(seed))
    assert io.parse_matrix(io.format_matrix(M)) == M


@given(st.integers(1, 2), st.integers(1, 6), st.integers(0, 2**32))
@settings(max_examples=40)
def test_code_roundtrip(t, n, seed):
    r = np.random.default_rng(seed)
    F = make_field(t)
    C = random_code(n, int(r.integers(0, n + 1)), F, r)
    assert io.parse_code(io.format_code(C)) == C


def test_tuple_roundtrip(F4):
    r = np.random.default_rng(3)
    tup = CodeTuple((random_code(3, 1, F4, r), random_code(3, 2, F4, r)))
    back = io.parse_tuple(io.format_tuple(tup))
    assert back.codes == tup.codes and back.field == F4


def test_cellset_roundtrip():
    S = closure_example()
    assert io.parse_cellset(io.format_cellset(S)) == S
    E = CellSet.from_coords(Grid(2, 3), [])
    assert io.parse_cellset(io.format_cellset(E)) == E


def test_ltc_roundtrip(F2):
    C = rep_code(3, F2)
    p = ltc_params(C)
    C2, p2 = io.parse_ltc(io.format_ltc(C, p))
    assert C2 == C and p2 == p and C2.par == C.par


def test_comments_and_blank_lines():
    text = "# a repetition code\n\ncode 2 1   # n k\n2 1 2\n\n1 1  # the all-ones word\n"
    C = io.parse_code(text)
    assert (C.n, C.k) == (2, 1)


def test_tuple_literal(F2):
    text = "tuple 2 3 2\ncode 3 1\n2 1 3\n1 1 1\ncode 3 1\n2 1 3\n1 1 1\n"
    tup = io.parse_tuple(text)
    assert tup.D == 2 and tup.codes[0] == rep_code(3, F2)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2 2 2\n1 0\n",  # missing row
        "2 1 2\n1 2\n",  # entry out of range
        "2 1 2\n1 x\n",
        "3 1 1\n1\n",  # GF(3) is not a binary field
        "2 1 2\n1 0 1\n",
        "2 1 1\n1\n0\n",  # trailing content
    ],
)
def test_matrix_errors(text):
    with pytest.raises(ParseError):
        io.parse_matrix(text)


@pytest.mark.parametrize(
    "text",
    [
        "kode 2 1\n2 1 2\n1 1\n",
        "code 3 1\n2 1 2\n1 1\n",  # wrong length
        "code 2 2\n2 2 2\n1 1\n1 1\n",  # dependent rows
    ],
)
def test_code_errors(text):
    with pytest.raises(ParseError):
        io.parse_code(text)


def test_tuple_errors():
    with pytest.raises(ParseError):
        io.parse_tuple("tuple 2 3 2\ncode 3 1\n2 1 3\n1 1 1\ncode 2 1\n2 1 2\n1 1\n")
    with pytest.raises(ParseError):
        io.parse_tuple("tuple 1 2 4\ncode 2 1\n2 1 2\n1 1\n")  # wrong field
    with pytest.raises(ParseError):
        io.parse_tuple("tuple 2 2 2\ncode 2 1\n2 1 2\n1 1\n")  # too few codes


def test_cellset_errors():
    with pytest.raises(ParseError):
        io.parse_cellset("cells 3 2 2\n0 0\n0 0\n")
    with pytest.raises(ParseError):
        io.parse_cellset("cells 3 2 1\n0 3\n")
    with pytest.raises(ParseError):
        io.parse_cellset("cells 3 2 1\n0 1 2\n")


def test_ltc_errors(F2):
    base = io.format_code(rep_code(2, F2))
    with pytest.raises(ParseError):
        io.parse_ltc(base + "2 1 2\n1 1\nltc 2 2 0 1\n")
    with pytest.raises(ParseError):
        io.parse_ltc(base + "2 1 2\n1 1\nltc 2 2 1 3\n")
    with pytest.raises(ParseError):
        io.parse_ltc(base + "2 1 2\n1 0\nltc 1 1 1 1\n")  # H does not check the code


def test_read_file_missing(tmp_path):
    with pytest.raises(ParseError):
        io.read_file(tmp_path / "nope.txt")
