import numpy as np
import pytest

from galdec import (ConstructionSpec, InfeasibleSpecError, TannerGraph,
                    embed_weight4_codeword, girth, pattern_from_support,
                    peg_construct, syndrome, to_alist, validate_column_weight)


def test_spec_validation():
    with pytest.raises(ValueError):
        ConstructionSpec(n=0, m=3)
    with pytest.raises(ValueError):
        ConstructionSpec(n=3, m=3, dv=2, target_girth=7)
    with pytest.raises(ValueError):
        ConstructionSpec(n=3, m=3, dv=2, target_girth=4)


def test_ring_forced_by_sizes(ring3):
    # 3 variables of degree 2 on 3 checks admit only the single 6-cycle
    for seed in range(4):
        res = peg_construct(ConstructionSpec(n=3, m=3, dv=2, target_girth=6,
                                             seed=seed))
        assert res.achieved_girth == 6
        assert sorted(len(a) for a in res.graph.chk_adj) == [2, 2, 2]


def test_infeasible_when_checks_run_out():
    with pytest.raises(ValueError):
        peg_construct(ConstructionSpec(n=5, m=2, dv=3, target_girth=6, seed=0))


def test_infeasibility_is_pigeonhole_on_checks():
    # placing dv distinct checks per variable needs dv <= m; anything else
    # would force a parallel edge on the first variable
    with pytest.raises(ValueError, match="m=2"):
        ConstructionSpec(n=5, m=2, dv=3, target_girth=6, seed=0)


def test_column_weight_and_reported_girth():
    res = peg_construct(ConstructionSpec(n=96, m=96, dv=3, target_girth=10, seed=7))
    assert validate_column_weight(res.graph, 3)
    assert res.achieved_girth == girth(res.graph)
    assert res.achieved_girth >= 8


def test_determinism_and_seed_sensitivity():
    spec = ConstructionSpec(n=60, m=60, dv=3, target_girth=8, seed=5)
    a = peg_construct(spec)
    b = peg_construct(spec)
    assert to_alist(a.graph) == to_alist(b.graph)
    c = peg_construct(ConstructionSpec(n=60, m=60, dv=3, target_girth=8, seed=6))
    assert to_alist(c.graph) != to_alist(a.graph)


def test_girth_never_below_8_at_target_10():
    for seed in range(5):
        res = peg_construct(ConstructionSpec(n=96, m=96, dv=3, target_girth=10,
                                             seed=seed))
        assert res.achieved_girth >= 8


def tree_bound_girth(n, m, dv, dc) -> int:
    """Largest even girth whose breadth-first tree from a variable still fits
    in (n, m) when every variable has degree dv and every check at least dc."""
    g = 4
    while True:
        depth = (g + 2) // 2 - 1  # balls of this depth must be trees
        vars_, chks = 1, 0
        frontier, is_var = 1, True
        for d in range(1, depth + 1):
            if is_var:
                frontier *= dv if d == 1 else (dv - 1)
                chks += frontier
            else:
                frontier *= dc - 1
                vars_ += frontier
            is_var = not is_var
        if vars_ > n or chks > m:
            return g
        g += 2


def test_achieved_girth_within_tree_bound():
    for n, m, target in [(96, 96, 10), (192, 192, 12), (128, 192, 16)]:
        res = peg_construct(ConstructionSpec(n=n, m=m, dv=3, target_girth=target,
                                             seed=1))
        dc_min = min(len(a) for a in res.graph.chk_adj)
        assert res.achieved_girth <= tree_bound_girth(n, m, 3, max(dc_min, 2))


def test_embed_minimal_instance():
    host = TannerGraph.from_edges(0, 6, [])
    emb = embed_weight4_codeword(host)
    g = emb.graph
    assert (g.n, g.m) == (4, 6)
    assert girth(g) == 6
    assert validate_column_weight(g, 3)
    assert syndrome(g, pattern_from_support(4, emb.codeword_support))
    assert syndrome(g, np.zeros(4, dtype=np.uint8))
    # each pair of codeword variables shares exactly one check
    for i in range(4):
        for j in range(i + 1, 4):
            shared = set(g.var_adj[i]) & set(g.var_adj[j])
            assert len(shared) == 1


def test_embed_on_peg_host(control):
    g, support = control.graph, control.codeword_support
    assert girth(g) == 6
    assert validate_column_weight(g, 3)
    assert syndrome(g, pattern_from_support(g.n, support))


def test_embed_rejects_short_girth():
    g4 = TannerGraph.from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    with pytest.raises(InfeasibleSpecError):
        embed_weight4_codeword(g4)
