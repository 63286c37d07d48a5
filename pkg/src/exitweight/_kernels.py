"""Compiled inner loop for Monte Carlo erasure sampling."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def erasure_rows(rows, keep, ranks, unrecovered):
    """Row-echelon sweep of the generator with pivots restricted to S.

    rows:        (k, W) packed generator rows
    keep:        (B, W) packed masks of S, one per sample
    ranks[s]:    GF(2) rank of the columns in S
    unrecovered: (B, W) union of supports of codewords vanishing on S, i.e. the
                 coordinates outside S whose column is not in span(S)
    """
    k, words = rows.shape
    nsamp = keep.shape[0]
    work = np.empty((k, words), dtype=np.uint64)
    zero = np.uint64(0)
    one = np.uint64(1)
    for s in range(nsamp):
        for t in range(k):
            for w in range(words):
                work[t, w] = rows[t, w]
        r = 0
        for w in range(words):
            unrecovered[s, w] = zero
        for t in range(k):
            pw = -1
            low = zero
            for w in range(words):
                v = work[t, w] & keep[s, w]
                if v != zero:
                    pw = w
                    low = v ^ (v & (v - one))
                    break
            if pw < 0:
                # row t vanishes on S; later pivots never touch it
                for w in range(words):
                    unrecovered[s, w] |= work[t, w]
                continue
            r += 1
            for u in range(t + 1, k):
                m = zero - np.uint64((work[u, pw] & low) != zero)
                for w in range(words):
                    work[u, w] ^= work[t, w] & m
        ranks[s] = r
