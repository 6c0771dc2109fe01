"""Column-weight-constrained Tanner graph construction.

Progressive edge growth places each variable's edges one at a time,
connecting to a check that keeps every cycle at least ``target_girth``
long whenever such a check exists (unreached checks, or checks at BFS
distance >= target_girth - 1).  When none exists the edge falls back to
the most distant reachable check, trading girth for feasibility; callers
gate on the achieved girth reported alongside the graph.

Candidate ties are broken by lowest current check degree and then by
check index under a seed-derived relabeling, so a construction is fully
determined by its spec and different seeds explore different graphs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import TannerGraph, girth, validate_column_weight


class InfeasibleSpecError(ValueError):
    """No admissible edge placement exists for the named variable."""

    def __init__(self, variable: int, message: str):
        self.variable = variable
        super().__init__(f"variable {variable}: {message}")


@dataclass(frozen=True)
class ConstructionSpec:
    n: int
    m: int
    dv: int = 3
    target_girth: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        if self.dv < 1:
            raise ValueError("dv must be >= 1")
        if self.dv > self.m:
            raise ValueError(f"dv={self.dv} exceeds the number of checks m={self.m}")
        if self.target_girth < 6 or self.target_girth % 2:
            raise ValueError("target_girth must be even and >= 6")


@dataclass(frozen=True)
class PegResult:
    graph: TannerGraph
    achieved_girth: int | float
    spec: ConstructionSpec


def _check_distances(var_adj, chk_pad, var_pad, n, m, v, cap):
    """BFS distances (odd depths) from variable v to every check; -1 unreached.

    Expansion stops after depth ``cap``; checks farther than that keep -1
    and count as unreached, which is exactly how they are used.
    """
    dist = np.full(m, -1, dtype=np.int64)
    seen_v = np.zeros(n, dtype=bool)
    seen_v[v] = True
    frontier = np.array(var_adj[v], dtype=np.int64)
    depth = 1
    while frontier.size and depth <= cap:
        fresh = frontier[dist[frontier] < 0]
        dist[fresh] = depth
        nxt = chk_pad[fresh].ravel()
        nxt = nxt[nxt >= 0]
        nxt = np.unique(nxt[~seen_v[nxt]])
        seen_v[nxt] = True
        if not nxt.size:
            break
        frontier = var_pad[nxt].ravel()
        frontier = frontier[frontier >= 0]
        frontier = np.unique(frontier[dist[frontier] < 0])
        depth += 2
    return dist


def peg_construct(spec: ConstructionSpec) -> PegResult:
    """Grow a column-weight-``dv`` graph aiming for ``target_girth``."""
    n, m, dv = spec.n, spec.m, spec.dv
    rng = np.random.default_rng(spec.seed)
    tie_order = rng.permutation(m).astype(np.int64)
    chk_deg = np.zeros(m, dtype=np.int64)
    var_adj: list[list[int]] = [[] for _ in range(n)]
    chk_adj: list[list[int]] = [[] for _ in range(m)]
    # padded adjacency grows in place as edges are added
    var_pad = np.full((n, dv), -1, dtype=np.int64)
    dc_cap = -(-n * dv // m) + dv + 2  # generous bound on any check degree
    chk_pad = np.full((m, dc_cap), -1, dtype=np.int64)

    # connecting at distance >= target-1 (or to an unreached check) keeps
    # every new cycle at target_girth or longer
    safe_dist = spec.target_girth - 1

    def place(v: int, candidates: np.ndarray) -> int:
        keys = chk_deg[candidates] * (m + 1) + tie_order[candidates]
        c = int(candidates[np.argmin(keys)])
        var_adj[v].append(c)
        chk_adj[c].append(v)
        var_pad[v, len(var_adj[v]) - 1] = c
        if len(chk_adj[c]) > dc_cap:
            raise InfeasibleSpecError(v, "check capacity bound exceeded")
        chk_pad[c, len(chk_adj[c]) - 1] = v
        chk_deg[c] += 1
        return c

    all_checks = np.arange(m, dtype=np.int64)
    for v in range(n):
        for t in range(dv):
            if t == 0:
                place(v, all_checks)
                continue
            dist = _check_distances(var_adj, chk_pad, var_pad, n, m, v, safe_dist)
            attached = np.array(var_adj[v], dtype=np.int64)
            unattached = np.ones(m, dtype=bool)
            unattached[attached] = False
            safe = unattached & ((dist < 0) | (dist >= safe_dist))
            if safe.any():
                place(v, all_checks[safe])
                continue
            # fallback: most distant reachable check not already attached
            reach = unattached & (dist > 0)
            if not reach.any():
                raise InfeasibleSpecError(
                    v, "every check is already attached; cannot place edge "
                       "without a parallel edge")
            dmax = dist[reach].max()
            place(v, all_checks[reach & (dist == dmax)])

    g = TannerGraph.from_edges(n, m, [(v, c) for v in range(n) for c in var_adj[v]])
    assert validate_column_weight(g, dv)
    return PegResult(graph=g, achieved_girth=girth(g), spec=spec)


@dataclass(frozen=True)
class EmbedResult:
    graph: TannerGraph
    codeword_support: tuple[int, int, int, int]


def embed_weight4_codeword(g: TannerGraph) -> EmbedResult:
    """Adjoin four variables whose pairwise supports share checks.

    The four new variables sit on six existing checks, one shared check
    per pair, so their indicator word has zero syndrome: a weight-4
    codeword, the negative control for two-error correction at girth 6.
    The host graph must be free of 4-cycles and offer six checks that
    pairwise share no variable; the result has girth exactly 6.
    """
    gg = girth(g)
    if gg < 6:
        raise InfeasibleSpecError(-1, f"host graph has girth {gg} < 6")
    # six checks, pairwise variable-disjoint: backtracking over checks in
    # (degree, index) order, bounded so adversarial hosts fail fast
    order = sorted(range(g.m), key=lambda c: (len(g.chk_adj[c]), c))
    nbrs = [frozenset(g.chk_adj[c]) for c in range(g.m)]
    chosen: list[int] = []
    used: set[int] = set()
    steps = 0

    def pick(start: int) -> bool:
        nonlocal steps
        if len(chosen) == 6:
            return True
        for i in range(start, len(order)):
            steps += 1
            if steps > 200_000:
                return False
            c = order[i]
            if nbrs[c] & used:
                continue
            chosen.append(c)
            used.update(nbrs[c])
            if pick(i + 1):
                return True
            chosen.pop()
            used.difference_update(nbrs[c])
        return False

    if not pick(0):
        raise InfeasibleSpecError(
            -1, "host graph has no six pairwise variable-disjoint checks")
    a, b, c_, d = g.n, g.n + 1, g.n + 2, g.n + 3
    s_ab, s_ac, s_ad, s_bc, s_bd, s_cd = chosen
    new_edges = [
        (a, s_ab), (a, s_ac), (a, s_ad),
        (b, s_ab), (b, s_bc), (b, s_bd),
        (c_, s_ac), (c_, s_bc), (c_, s_cd),
        (d, s_ad), (d, s_bd), (d, s_cd),
    ]
    edges = list(g.edges) + new_edges
    out = TannerGraph.from_edges(g.n + 4, g.m, edges)
    assert girth(out) == 6
    return EmbedResult(graph=out, codeword_support=(a, b, c_, d))
