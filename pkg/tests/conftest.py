"""Shared fixtures: one construction per girth class, built once per session."""
import pytest

from galdec import (ConstructionSpec, TannerGraph, embed_weight4_codeword,
                    peg_construct)


@pytest.fixture(scope="session")
def ring3() -> TannerGraph:
    """3 variables and 3 checks on a single 6-cycle (column weight 2)."""
    return TannerGraph.from_edges(3, 3, [(0, 0), (0, 2), (1, 0), (1, 1),
                                         (2, 1), (2, 2)])


@pytest.fixture(scope="session")
def g10():
    """Column-weight-3, girth-10 code with n in the acceptance range."""
    res = peg_construct(ConstructionSpec(n=96, m=96, dv=3, target_girth=10, seed=1))
    assert res.achieved_girth == 10
    return res.graph


@pytest.fixture(scope="session")
def g12():
    res = peg_construct(ConstructionSpec(n=192, m=192, dv=3, target_girth=12, seed=1))
    assert res.achieved_girth == 12
    return res.graph


@pytest.fixture(scope="session")
def g16():
    res = peg_construct(ConstructionSpec(n=128, m=192, dv=3, target_girth=16, seed=1))
    assert res.achieved_girth == 16
    return res.graph


@pytest.fixture(scope="session")
def control():
    """Girth-6 graph containing a weight-4 codeword (two-error negative control)."""
    base = peg_construct(ConstructionSpec(n=48, m=32, dv=3, target_girth=6, seed=0))
    assert base.achieved_girth == 6
    return embed_weight4_codeword(base.graph)
