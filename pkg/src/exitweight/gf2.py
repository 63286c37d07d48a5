"""GF(2) linear algebra on int bitsets.

A vector of length n is a Python int whose bit j holds coordinate j.
Packed numpy forms use 64 coordinates per uint64 word, little-endian
within and across words.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


def words_for(n: int) -> int:
    return max(1, (n + 63) // 64)


def rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of a collection of int-encoded vectors."""
    basis: dict[int, int] = {}
    r = 0
    for x in rows:
        while x:
            lead = x.bit_length() - 1
            b = basis.get(lead)
            if b is None:
                basis[lead] = x
                r += 1
                break
            x ^= b
    return r


def rref(rows: Sequence[int], n: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns).

    Pivots are taken in increasing column order, so row t has its pivot
    at pivots[t] and every other row is zero there.
    """
    work = [r for r in rows]
    pivots: list[int] = []
    out: list[int] = []
    for col in range(n):
        bit = 1 << col
        piv = next((t for t, r in enumerate(work) if r & bit), None)
        if piv is None:
            continue
        prow = work.pop(piv)
        work = [r ^ prow if r & bit else r for r in work]
        out = [r ^ prow if r & bit else r for r in out]
        out.append(prow)
        pivots.append(col)
        if not work:
            break
    return out, pivots


def span(rows: Sequence[int]) -> list[int]:
    """All 2^len(rows) vectors in the span, message order (row t = bit t)."""
    vecs = [0]
    for r in rows:
        vecs += [v ^ r for v in vecs]
    return vecs


def pack(vectors: Sequence[int], n: int) -> np.ndarray:
    """Pack int vectors into a (len, words) uint64 array."""
    w = words_for(n)
    out = np.zeros((len(vectors), w), dtype=np.uint64)
    mask = (1 << 64) - 1
    for t, v in enumerate(vectors):
        for j in range(w):
            out[t, j] = (v >> (64 * j)) & mask
    return out


def unpack(packed: np.ndarray) -> list[int]:
    out = []
    for row in packed:
        v = 0
        for j, word in enumerate(row):
            v |= int(word) << (64 * j)
        out.append(v)
    return out


def to_matrix(rows: Sequence[int], n: int) -> np.ndarray:
    """Dense (len, n) uint8 matrix of 0/1 entries."""
    m = np.zeros((len(rows), n), dtype=np.uint8)
    for t, r in enumerate(rows):
        for j in range(n):
            m[t, j] = (r >> j) & 1
    return m


def from_bits(bits: Iterable[int]) -> int:
    v = 0
    for j, b in enumerate(bits):
        if b:
            v |= 1 << j
    return v


def columns(rows: Sequence[int], n: int) -> list[int]:
    """Transpose: column j as an int with bit t = entry (t, j)."""
    cols = [0] * n
    for t, r in enumerate(rows):
        x = r
        while x:
            low = x & -x
            cols[low.bit_length() - 1] |= 1 << t
            x ^= low
    return cols


def weight(x: int) -> int:
    return x.bit_count()
