"""Line-oriented text formats for matrices, codes, tuples, cell sets and
LTC bundles. Blank lines and ``#`` comments are ignored on input."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterator

import numpy as np

from .code import LinearCode
from .errors import ParseError
from .field import Field, field_of_order
from .grid import CellSet, Grid
from .ltc import LTCParams
from .matrix import Mat
from .product import CodeTuple


class Lines:
    """A cursor over the meaningful lines of a text."""

    def __init__(self, text: str):
        self._lines = [
            ln.split("#", 1)[0].strip() for ln in text.splitlines()
        ]
        self._lines = [ln for ln in self._lines if ln]
        self.pos = 0

    def next(self, what: str) -> list[str]:
        if self.pos >= len(self._lines):
            raise ParseError(f"unexpected end of input, expected {what}")
        ln = self._lines[self.pos]
        self.pos += 1
        return ln.split()

    def done(self) -> bool:
        return self.pos >= len(self._lines)

    def __iter__(self) -> Iterator[list[str]]:
        while not self.done():
            yield self.next("line")


def _ints(tokens: list[str], count: int | None, what: str) -> list[int]:
    if count is not None and len(tokens) != count:
        raise ParseError(f"{what}: expected {count} integers, got {len(tokens)}")
    try:
        return [int(x) for x in tokens]
    except ValueError as exc:
        raise ParseError(f"{what}: non-integer entry in {tokens}") from exc


def _header(tokens: list[str], keyword: str, count: int) -> list[int]:
    if not tokens or tokens[0] != keyword:
        raise ParseError(f"expected a '{keyword}' header, got {' '.join(tokens)!r}")
    return _ints(tokens[1:], count, f"{keyword} header")


def _field(q: int) -> Field:
    try:
        return field_of_order(q)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# matrices -------------------------------------------------------------------

def format_matrix(M: Mat) -> str:
    out = [f"{M.field.q} {M.rows} {M.cols}"]
    out += [" ".join(str(int(v)) for v in row) for row in M.a]
    return "\n".join(out) + "\n"


def read_matrix(lines: Lines, field: Field | None = None) -> Mat:
    q, rows, cols = _ints(lines.next("matrix header"), 3, "matrix header")
    F = _field(q)
    if field is not None and F != field:
        raise ParseError(f"matrix over GF({q}) where GF({field.q}) was expected")
    data = [_ints(lines.next(f"matrix row {r}"), cols, f"matrix row {r}") for r in range(rows)]
    arr = np.array(data, dtype=np.int64).reshape(rows, cols)
    if arr.size and (arr.min() < 0 or arr.max() >= q):
        raise ParseError(f"matrix entries must lie in [0, {q})")
    return Mat(F, arr.astype(F.dtype))


def parse_matrix(text: str) -> Mat:
    return _whole(text, read_matrix)


# codes ----------------------------------------------------------------------

def format_code(C: LinearCode) -> str:
    return f"code {C.n} {C.k}\n" + format_matrix(C.gen if C.k else Mat.zeros(C.field, 0, C.n))


def read_code(lines: Lines, field: Field | None = None) -> LinearCode:
    n, k = _header(lines.next("code header"), "code", 2)
    G = read_matrix(lines, field)
    if G.shape != (k, n):
        raise ParseError(f"code {n} {k} has a {G.rows}x{G.cols} generator")
    C = LinearCode.from_generator(G)
    if C.k != k:
        raise ParseError(f"generator rows are dependent (rank {C.k} < {k})")
    return C


def parse_code(text: str) -> LinearCode:
    return _whole(text, read_code)


# tuples ---------------------------------------------------------------------

def format_tuple(tup: CodeTuple) -> str:
    return f"tuple {tup.D} {tup.n} {tup.field.q}\n" + "".join(format_code(C) for C in tup.codes)


def read_tuple(lines: Lines) -> CodeTuple:
    D, n, q = _header(lines.next("tuple header"), "tuple", 3)
    F = _field(q)
    codes = tuple(read_code(lines, F) for _ in range(D))
    if any(C.n != n for C in codes):
        raise ParseError(f"every code of the tuple must have length {n}")
    return CodeTuple(codes)


def parse_tuple(text: str) -> CodeTuple:
    return _whole(text, read_tuple)


# cell sets ------------------------------------------------------------------

def format_cellset(S: CellSet) -> str:
    g = S.grid
    out = [f"cells {g.n} {g.D} {len(S)}"]
    out += [" ".join(map(str, c)) for c in S.coords()]
    return "\n".join(out) + "\n"


def read_cellset(lines: Lines) -> CellSet:
    n, D, count = _header(lines.next("cells header"), "cells", 3)
    grid = Grid(n, D)
    coords = [tuple(_ints(lines.next(f"cell {i}"), D, f"cell {i}")) for i in range(count)]
    try:
        S = CellSet.from_coords(grid, coords)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if len(S) != count:
        raise ParseError("repeated cells in cell set")
    return S


def parse_cellset(text: str) -> CellSet:
    return _whole(text, read_cellset)


# LTC bundles ----------------------------------------------------------------

def format_ltc(C: LinearCode, params: LTCParams) -> str:
    return format_code(C) + format_matrix(C.par) + params.to_line() + "\n"


def read_ltc(lines: Lines) -> tuple[LinearCode, LTCParams]:
    C = read_code(lines)
    H = read_matrix(lines, C.field)
    tokens = lines.next("ltc line")
    Delta, s_num, s_den, m = _header(tokens, "ltc", 4)
    if s_den <= 0:
        raise ParseError("soundness denominator must be positive")
    if m != H.rows:
        raise ParseError(f"ltc line says m={m} but the parity matrix has {H.rows} rows")
    try:
        C = C.with_parity(H)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return C, LTCParams(Delta, Fraction(s_num, s_den), m, C.n)


def parse_ltc(text: str) -> tuple[LinearCode, LTCParams]:
    return _whole(text, read_ltc)


# helpers --------------------------------------------------------------------

def _whole(text: str, reader):
    lines = Lines(text)
    out = reader(lines)
    if not lines.done():
        raise ParseError("trailing content after the record")
    return out


def read_file(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def format_kv(pairs) -> str:
    return "".join(f"{k}: {v}\n" for k, v in pairs)
