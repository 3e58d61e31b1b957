"""The grid [n]^D, its axis-parallel lines, cell sets and ε-closures.

Coordinates are 0-based. Cell (x_1, ..., x_D) has index
x_1 n^{D-1} + ... + x_D, i.e. lexicographic with the first coordinate
major, the same convention as :func:`prodexp.matrix.kron`. Direction i
(0-based) lines vary coordinate i and fix the others.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np


@dataclass(frozen=True)
class LineId:
    direction: int
    base: tuple[int, ...]  # the D-1 fixed coordinates, in axis order

    def cell_coords(self, n: int) -> list[tuple[int, ...]]:
        i = self.direction
        return [self.base[:i] + (x,) + self.base[i:] for x in range(n)]


@dataclass(frozen=True)
class Grid:
    n: int
    D: int

    def __post_init__(self):
        if self.n < 1 or self.D < 1:
            raise ValueError(f"grid needs n >= 1 and D >= 1, got n={self.n}, D={self.D}")

    @property
    def size(self) -> int:
        return self.n ** self.D

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.D

    def index(self, coords: Iterable[int]) -> int:
        coords = tuple(coords)
        if len(coords) != self.D or any(not 0 <= c < self.n for c in coords):
            raise ValueError(f"{coords} is not a cell of [{self.n}]^{self.D}")
        return int(np.ravel_multi_index(coords, self.shape))

    def coords(self, index: int) -> tuple[int, ...]:
        return tuple(int(c) for c in np.unravel_index(index, self.shape))

    def lines(self, direction: int | None = None) -> list[LineId]:
        dirs = range(self.D) if direction is None else [direction]
        out = []
        for i in dirs:
            for base in np.ndindex(*((self.n,) * (self.D - 1))):
                out.append(LineId(i, tuple(int(b) for b in base)))
        return out

    def line_cells(self, line: LineId) -> np.ndarray:
        """Cell indices of a line, in increasing order of the varying coordinate."""
        return _direction_cells(self.n, self.D, line.direction)[self.line_position(line)]

    def line_position(self, line: LineId) -> int:
        """Index of the line among the lines of its direction."""
        if self.D == 1:
            return 0
        return int(np.ravel_multi_index(line.base, (self.n,) * (self.D - 1)))

    def direction_cells(self, direction: int) -> np.ndarray:
        """Array (n^{D-1}, n): row p lists the cells of the p-th line."""
        return _direction_cells(self.n, self.D, direction)

    def line_masks(self) -> list[tuple[LineId, int]]:
        return _line_masks(self.n, self.D)


@functools.lru_cache(maxsize=None)
def _direction_cells(n: int, D: int, direction: int) -> np.ndarray:
    idx = np.arange(n ** D).reshape((n,) * D)
    moved = np.moveaxis(idx, direction, -1)
    out = moved.reshape(-1, n)
    out.flags.writeable = False
    return out


@functools.lru_cache(maxsize=None)
def _line_masks(n: int, D: int) -> list[tuple[LineId, int]]:
    grid = Grid(n, D)
    out = []
    for line in grid.lines():
        m = 0
        for c in grid.line_cells(line):
            m |= 1 << int(c)
        out.append((line, m))
    return out


def _cells_through(grid: Grid, cell: int) -> list[int]:
    """Positions (in grid.line_masks() order) of the D lines through a cell."""
    coords = grid.coords(cell)
    per_dir = grid.n ** (grid.D - 1)
    out = []
    for i in range(grid.D):
        base = coords[:i] + coords[i + 1:]
        pos = int(np.ravel_multi_index(base, (grid.n,) * (grid.D - 1))) if grid.D > 1 else 0
        out.append(i * per_dir + pos)
    return out


@dataclass(frozen=True)
class CellSet:
    """A subset of the grid, stored as an int bit mask (bit i = cell i)."""

    grid: Grid
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.grid.size:
            raise ValueError("cell set has members outside the grid")

    @classmethod
    def from_coords(cls, grid: Grid, coords: Iterable[Iterable[int]]) -> "CellSet":
        bits = 0
        for c in coords:
            bits |= 1 << grid.index(c)
        return cls(grid, bits)

    @classmethod
    def from_indices(cls, grid: Grid, indices: Iterable[int]) -> "CellSet":
        bits = 0
        for i in indices:
            if not 0 <= int(i) < grid.size:
                raise ValueError(f"cell index {i} out of range")
            bits |= 1 << int(i)
        return cls(grid, bits)

    @classmethod
    def full(cls, grid: Grid) -> "CellSet":
        return cls(grid, (1 << grid.size) - 1)

    def indices(self) -> list[int]:
        out, b, i = [], self.bits, 0
        while b:
            if b & 1:
                out.append(i)
            b >>= 1
            i += 1
        return out

    def coords(self) -> list[tuple[int, ...]]:
        return [self.grid.coords(i) for i in self.indices()]

    def __len__(self):
        return self.bits.bit_count()

    def __contains__(self, cell) -> bool:
        i = cell if isinstance(cell, (int, np.integer)) else self.grid.index(cell)
        return bool(self.bits >> int(i) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())

    def _same(self, other: "CellSet"):
        if other.grid != self.grid:
            raise ValueError("cell sets live on different grids")

    def __or__(self, other):
        self._same(other)
        return CellSet(self.grid, self.bits | other.bits)

    def __and__(self, other):
        self._same(other)
        return CellSet(self.grid, self.bits & other.bits)

    def __sub__(self, other):
        self._same(other)
        return CellSet(self.grid, self.bits & ~other.bits)

    def complement(self) -> "CellSet":
        return CellSet(self.grid, ((1 << self.grid.size) - 1) & ~self.bits)

    def issubset(self, other: "CellSet") -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0


def lines_in(M: CellSet) -> list[LineId]:
    """The lines fully contained in M, direction-major."""
    return [line for line, mask in M.grid.line_masks() if M.bits & mask == mask]


def _popcount(x: int) -> int:
    return x.bit_count()


def max_partial_fraction(M: CellSet) -> Fraction | None:
    """max |ℓ ∩ M| / n over lines ℓ ⊄ M (None when every line lies in M)."""
    best = None
    for _, mask in M.grid.line_masks():
        inter = M.bits & mask
        if inter != mask:
            c = _popcount(inter)
            if best is None or c > best:
                best = c
    return None if best is None else Fraction(best, M.grid.n)


def _threshold(n: int, eps: Fraction, inclusive: bool):
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError(f"ε must lie in (0, 1], got {eps}")
    bound = eps * n
    if inclusive:
        return lambda c: c >= bound
    return lambda c: c > bound


def eps_closure(M: CellSet, eps, *, inclusive: bool = True) -> CellSet:
    """The ε-closure [M]_ε.

    With ``inclusive=True`` (the definition) a line is absorbed once it
    meets the set in at least εn cells, so a closed set has every partial
    line meeting it in fewer than εn cells. ``inclusive=False`` absorbs
    only lines meeting the set in more than εn cells.
    """
    grid = M.grid
    absorb = _threshold(grid.n, eps, inclusive)
    masks = grid.line_masks()
    bits = M.bits
    counts = [_popcount(bits & m) for _, m in masks]
    work = [p for p, c in enumerate(counts) if absorb(c) and bits & masks[p][1] != masks[p][1]]
    while work:
        p = work.pop()
        mask = masks[p][1]
        new = mask & ~bits
        if not new:
            continue
        bits |= new
        for cell in CellSet(grid, new).indices():
            for r in _cells_through(grid, cell):
                counts[r] += 1
                if absorb(counts[r]) and bits & masks[r][1] != masks[r][1]:
                    work.append(r)
    return CellSet(grid, bits)


def closure_rounds(M: CellSet, eps, *, inclusive: bool = True) -> list[CellSet]:
    """Round-based closure: each round absorbs every line at threshold
    simultaneously. Returns the cells added in each round."""
    grid = M.grid
    absorb = _threshold(grid.n, eps, inclusive)
    bits = M.bits
    rounds = []
    while True:
        new = 0
        for _, mask in grid.line_masks():
            inter = bits & mask
            if inter != mask and absorb(_popcount(inter)):
                new |= mask & ~bits
        if not new:
            return rounds
        rounds.append(CellSet(grid, new))
        bits |= new


def is_eps_closed(M: CellSet, eps, *, inclusive: bool = True) -> bool:
    absorb = _threshold(M.grid.n, eps, inclusive)
    for _, mask in M.grid.line_masks():
        inter = M.bits & mask
        if inter != mask and absorb(_popcount(inter)):
            return False
    return True


def closure_constant(eps, D: int) -> Fraction:
    """((2^D + 1) / ε)^D, the closure-size constant."""
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError(f"ε must lie in (0, 1], got {eps}")
    return ((2 ** D + 1) / eps) ** D


def all_subsets(grid: Grid) -> Iterator[CellSet]:
    for bits in range(1 << grid.size):
        yield CellSet(grid, bits)
