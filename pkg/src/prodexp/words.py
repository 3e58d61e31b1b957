"""Packed representation of vectors over GF(2^t) for exhaustive enumeration.

A vector (v_0, ..., v_{N-1}) is packed big-endian into one integer: v_0
occupies the most significant t bits. Then vector addition is XOR and
integer order equals lexicographic order of the value tuples, which gives
deterministic tie-breaking for free. Arrays use uint64 when N*t <= 64 and
Python ints (object dtype) beyond that.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .field import Field


def word_dtype(nbits: int):
    return np.uint64 if nbits <= 64 else object


def _as_words(values, dtype):
    return np.asarray(values, dtype=dtype)


def pack(values, t: int) -> np.ndarray | int:
    """Pack the last axis of ``values``; a 1-D input gives a Python int."""
    arr = np.asarray(values)
    N = arr.shape[-1]
    dtype = word_dtype(N * t)
    if arr.ndim == 1:
        acc = 0
        for v in arr:
            acc = (acc << t) | int(v)
        return acc
    acc = np.zeros(arr.shape[:-1], dtype=dtype)
    shift = dtype(t) if dtype is np.uint64 else t
    for j in range(N):
        col = arr[..., j].astype(np.uint64) if dtype is np.uint64 else arr[..., j].astype(object)
        acc = (acc << shift) | col
    return acc


def unpack(words, N: int, t: int) -> np.ndarray:
    """Inverse of :func:`pack`; returns int64 for t <= 62, else object."""
    scalar = np.ndim(words) == 0
    dtype = word_dtype(N * t)
    w = np.atleast_1d(np.asarray(words, dtype=dtype))
    out_dtype = np.int64 if t <= 62 else object
    out = np.zeros(w.shape + (N,), dtype=out_dtype)
    mask = (1 << t) - 1
    for j in range(N):
        shift = (N - 1 - j) * t
        if dtype is np.uint64:
            out[..., j] = ((w >> np.uint64(shift)) & np.uint64(mask)).astype(out_dtype)
        else:
            out[..., j] = np.array([(int(x) >> shift) & mask for x in w.ravel()], dtype=out_dtype).reshape(w.shape)
    return out[0] if scalar else out


def field_masks(N: int, t: int, groups: Sequence[Sequence[int]] | None = None) -> list:
    """Bit masks selecting coordinate groups (default: one per coordinate)."""
    if groups is None:
        groups = [[j] for j in range(N)]
    base = (1 << t) - 1
    masks = []
    for g in groups:
        m = 0
        for j in g:
            m |= base << ((N - 1 - j) * t)
        masks.append(m)
    return masks


def support_count(words: np.ndarray, masks: Sequence[int]) -> np.ndarray:
    """For each word, the number of masks it intersects."""
    words = np.asarray(words)
    out = np.zeros(words.shape, dtype=np.int64)
    if words.dtype == np.uint64:
        for m in masks:
            out += (words & np.uint64(m)) != 0
    else:
        for m in masks:
            out += np.array([(int(w) & m) != 0 for w in words.ravel()], dtype=np.int64).reshape(words.shape)
    return out


def weights(words: np.ndarray, N: int, t: int) -> np.ndarray:
    """Hamming weights (number of nonzero coordinates)."""
    return support_count(words, field_masks(N, t))


def f2_generators(field: Field, basis: np.ndarray) -> np.ndarray:
    """Rows α^j b (j < t) for each basis row b: an F_2-basis of the F_q-span."""
    basis = np.asarray(basis, dtype=field.dtype)
    if basis.shape[0] == 0:
        return basis.reshape(0, basis.shape[1] if basis.ndim == 2 else 0)
    rows = []
    for b in basis:
        scale = 1
        for _ in range(field.t):
            rows.append(field.vmul(b, scale))
            scale = field.mul(scale, 2) if field.q > 2 else 1
    return np.array(rows, dtype=field.dtype).reshape(len(rows), basis.shape[1])


def span_words(gens: Sequence[int], nbits: int) -> np.ndarray:
    """All F_2 combinations of packed generators; generator j is index bit j."""
    dtype = word_dtype(nbits)
    arr = np.zeros(1, dtype=dtype)
    for g in gens:
        g = dtype(g) if dtype is np.uint64 else int(g)
        arr = np.concatenate([arr, arr ^ g])
    return arr


def span_of_basis(field: Field, basis: np.ndarray, N: int) -> np.ndarray:
    """Every vector of the F_q-span of ``basis`` (rows of length N), packed."""
    gens = f2_generators(field, basis)
    packed = [pack(g, field.t) for g in gens] if len(gens) else []
    return span_words(packed, N * field.t)


def cayley_bfs(elements: np.ndarray, gens: Sequence[int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Breadth-first search from 0 in the Cayley graph of a finite F_2-space.

    ``elements`` is the sorted packed list of all group elements (it must
    contain 0 and be closed under XOR with every generator). Returns
    (dist, parent, via): ``dist[j]`` is the least number of generators
    summing to ``elements[j]``; ``parent[j]`` and ``via[j]`` give the
    predecessor index and the generator used (-1 at the root).
    """
    size = len(elements)
    dist = np.full(size, -1, dtype=np.int64)
    parent = np.full(size, -1, dtype=np.int64)
    via = np.full(size, -1, dtype=np.int64)
    root = int(np.searchsorted(elements, elements.dtype.type(0) if elements.dtype != object else 0))
    dist[root] = 0
    if elements.dtype == object:
        return _bfs_dict(elements, gens, dist, parent, via, root)
    gens_arr = [np.uint64(g) for g in gens]
    frontier = np.array([root], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        fresh = []
        base = elements[frontier]
        for gi, g in enumerate(gens_arr):
            nb = base ^ g
            pos = np.searchsorted(elements, nb)
            if np.any(pos >= size) or np.any(elements[np.minimum(pos, size - 1)] != nb):
                raise ValueError("element set is not closed under the generators")
            new = dist[pos] < 0
            if np.any(new):
                p = pos[new]
                dist[p] = level
                parent[p] = frontier[new]
                via[p] = gi
                fresh.append(p)
        frontier = np.concatenate(fresh) if fresh else np.zeros(0, dtype=np.int64)
    return dist, parent, via


def _bfs_dict(elements, gens, dist, parent, via, root):
    index = {int(e): j for j, e in enumerate(elements)}
    frontier = [root]
    level = 0
    while frontier:
        level += 1
        fresh = []
        for j in frontier:
            e = int(elements[j])
            for gi, g in enumerate(gens):
                k = index.get(e ^ int(g))
                if k is None:
                    raise ValueError("element set is not closed under the generators")
                if dist[k] < 0:
                    dist[k] = level
                    parent[k] = j
                    via[k] = gi
                    fresh.append(k)
        frontier = fresh
    return dist, parent, via


def sorted_span(field: Field, basis: np.ndarray, N: int) -> np.ndarray:
    words = span_of_basis(field, basis, N)
    return np.sort(words) if words.dtype != object else np.array(sorted(words, key=int), dtype=object)
