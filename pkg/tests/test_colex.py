from itertools import combinations
from math import comb

import numpy as np

from galdec.colex import rank_colex, unrank_colex, unrank_colex_block


def colex_sorted(n, k):
    """All k-subsets of {0..n-1} in colex order, by definition: sorted by
    reversed tuple (largest element most significant)."""
    return sorted(combinations(range(n), k), key=lambda s: tuple(reversed(s)))


def test_rank_unrank_round_trip_exhaustive():
    for n in range(1, 11):
        for k in range(0, n + 1):
            for r, subset in enumerate(colex_sorted(n, k)):
                assert rank_colex(subset) == r
                assert unrank_colex(r, k) == subset


def test_block_unrank_matches_scalar():
    for n, k in [(12, 3), (20, 4), (96, 4), (50, 5)]:
        total = comb(n, k)
        ranks = np.unique(np.random.default_rng(n * k).integers(0, total, 300))
        block = unrank_colex_block(ranks, n, k)
        for r, row in zip(ranks, block):
            assert tuple(int(x) for x in row) == unrank_colex(int(r), k)


def test_block_unrank_rows_sorted():
    block = unrank_colex_block(np.arange(comb(10, 3)), 10, 3)
    assert (np.diff(block, axis=1) > 0).all()
    # every subset enumerated exactly once
    assert len({tuple(r) for r in block.tolist()}) == comb(10, 3)


def test_weight_zero():
    assert unrank_colex(0, 0) == ()
    assert rank_colex(()) == 0
    assert unrank_colex_block(np.array([0]), 5, 0).shape == (1, 0)
