"""Colexicographic ranking of k-subsets, scalar and vectorized.

Colex order compares subsets by their largest differing element, which
makes rank intervals clean prefixes per largest element: sweeps can be
chunked into disjoint rank ranges and resumed from any rank with O(1)
state.
"""
from __future__ import annotations

from math import comb

import numpy as np


def rank_colex(support) -> int:
    """Colex rank of a sorted k-subset of {0..n-1}."""
    return sum(comb(c, j + 1) for j, c in enumerate(support))


def unrank_colex(r: int, k: int) -> tuple[int, ...]:
    """The k-subset with colex rank r (n-independent)."""
    out = [0] * k
    for j in range(k, 0, -1):
        # largest c with comb(c, j) <= r
        c = j - 1
        step = 1
        while comb(c + step, j) <= r:
            c += step
            step *= 2
        while step > 1:
            step //= 2
            if comb(c + step, j) <= r:
                c += step
        out[j - 1] = c
        r -= comb(c, j)
    return tuple(out)


def unrank_colex_block(ranks: np.ndarray, n: int, k: int) -> np.ndarray:
    """Vectorized unrank: (len(ranks), k) support matrix, rows sorted ascending.

    All ranks must lie in [0, comb(n, k)).
    """
    ranks = np.asarray(ranks, dtype=np.int64)
    out = np.empty((ranks.size, k), dtype=np.int64)
    r = ranks.copy()
    # comb_table[j][c] = comb(c, j), monotone in c for fixed j
    for j in range(k, 0, -1):
        table = np.array([comb(c, j) for c in range(n + 1)], dtype=np.int64)
        c = np.searchsorted(table, r, side="right") - 1
        out[:, j - 1] = c
        r = r - table[c]
    return out
