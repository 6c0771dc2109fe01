"""Bipartite Tanner graphs and their structural queries.

A Tanner graph has n variable nodes and m check nodes.  Adjacency lists
are kept sorted ascending so that edge ids (positions in the (v, c)-sorted
edge list) are deterministic across runs; all message and report indexing
relies on that ordering.

Graphs are immutable after construction and safe to share across worker
processes.  Everything in this module is a pure function of its inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

VAR = "var"
CHK = "chk"


class GraphError(ValueError):
    """Raised for structurally invalid graphs or graph arguments."""


@dataclass(frozen=True)
class DirectedEdge:
    """An oriented edge: variable-to-check (``var``) or check-to-variable (``chk``).

    ``kind`` names the side the tail is on; ``tail`` and ``head`` are node
    indices on their respective sides.
    """

    kind: str  # VAR: tail is a variable; CHK: tail is a check
    tail: int
    head: int

    def reverse(self) -> "DirectedEdge":
        other = CHK if self.kind == VAR else VAR
        return DirectedEdge(other, self.head, self.tail)


@dataclass(frozen=True)
class TannerGraph:
    """Immutable bipartite graph with sorted adjacency and dense edge ids."""

    n: int
    m: int
    var_adj: tuple[tuple[int, ...], ...]
    chk_adj: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_edges(n: int, m: int, edges) -> "TannerGraph":
        """Build a graph from (variable, check) pairs.

        Rejects out-of-range indices and parallel edges.
        """
        if n < 0 or m < 0:
            raise GraphError(f"negative node count: n={n}, m={m}")
        va: list[list[int]] = [[] for _ in range(n)]
        ca: list[list[int]] = [[] for _ in range(m)]
        seen = set()
        for v, c in edges:
            if not (0 <= v < n):
                raise GraphError(f"variable index {v} out of range [0, {n})")
            if not (0 <= c < m):
                raise GraphError(f"check index {c} out of range [0, {m})")
            if (v, c) in seen:
                raise GraphError(f"parallel edge ({v}, {c})")
            seen.add((v, c))
            va[v].append(c)
            ca[c].append(v)
        return TannerGraph(
            n=n,
            m=m,
            var_adj=tuple(tuple(sorted(a)) for a in va),
            chk_adj=tuple(tuple(sorted(a)) for a in ca),
        )

    # -- derived structure (cached; the dataclass is frozen but has a __dict__) --

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """All (v, c) pairs sorted ascending; position is the dense edge id."""
        return tuple((v, c) for v in range(self.n) for c in self.var_adj[v])

    @cached_property
    def edge_id(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def var_degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.var_adj], dtype=np.int64)

    @cached_property
    def chk_degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.chk_adj], dtype=np.int64)

    @cached_property
    def var_of_edge(self) -> np.ndarray:
        return np.array([v for v, _ in self.edges], dtype=np.int64)

    @cached_property
    def chk_of_edge(self) -> np.ndarray:
        return np.array([c for _, c in self.edges], dtype=np.int64)

    @cached_property
    def _padded_adj(self) -> tuple[np.ndarray, np.ndarray]:
        """(var_pad, chk_pad) adjacency padded with -1, for vectorized BFS."""
        dv = int(self.var_degrees.max(initial=0))
        dc = int(self.chk_degrees.max(initial=0))
        var_pad = np.full((self.n, max(dv, 1)), -1, dtype=np.int64)
        for v, adj in enumerate(self.var_adj):
            var_pad[v, : len(adj)] = adj
        chk_pad = np.full((self.m, max(dc, 1)), -1, dtype=np.int64)
        for c, adj in enumerate(self.chk_adj):
            chk_pad[c, : len(adj)] = adj
        return var_pad, chk_pad

    def has_edge(self, v: int, c: int) -> bool:
        return (v, c) in self.edge_id

    def check_directed_edge(self, e: DirectedEdge) -> None:
        v, c = (e.tail, e.head) if e.kind == VAR else (e.head, e.tail)
        if e.kind not in (VAR, CHK):
            raise GraphError(f"unknown edge kind {e.kind!r}")
        if not self.has_edge(v, c):
            raise GraphError(f"({v}, {c}) is not an edge of the graph")


def validate_column_weight(g: TannerGraph, w: int) -> bool:
    """True iff every variable participates in exactly w checks."""
    return bool(g.n == 0 or (g.var_degrees == w).all())


def girth(g: TannerGraph) -> int | float:
    """Length of the shortest cycle, or ``math.inf`` for a forest.

    Per-edge search: the shortest cycle through edge {v, c} is 1 plus the
    shortest v-to-c path avoiding that edge.  Each BFS is truncated once it
    can no longer beat the best cycle found so far.
    """
    best = math.inf
    var_pad, chk_pad = g._padded_adj
    for v, c in g.edges:
        d = _distance_var_to_chk(g, var_pad, chk_pad, v, c, best - 2)
        if d is not None:
            best = min(best, d + 1)
            if best == 4:  # bipartite minimum; cannot improve
                return 4
    return best


def _distance_var_to_chk(g, var_pad, chk_pad, v, c, depth_cap) -> int | None:
    """Shortest path length from variable v to check c avoiding edge (v, c).

    Levels are expanded vectorized; returns None if no path within
    depth_cap (or at all).
    """
    if depth_cap < 1:
        return None
    seen_v = np.zeros(g.n, dtype=bool)
    seen_c = np.zeros(g.m, dtype=bool)
    seen_v[v] = True
    frontier = np.array([x for x in g.var_adj[v] if x != c], dtype=np.int64)
    seen_c[frontier] = True
    depth = 1
    while frontier.size:
        if seen_c[c]:
            return depth
        if depth + 2 > depth_cap:
            return None
        nxt = chk_pad[frontier].ravel()
        nxt = nxt[nxt >= 0]
        nxt = np.unique(nxt[~seen_v[nxt]])
        seen_v[nxt] = True
        if not nxt.size:
            return None
        frontier = var_pad[nxt].ravel()
        frontier = frontier[frontier >= 0]
        frontier = np.unique(frontier[~seen_c[frontier]])
        seen_c[frontier] = True
        depth += 2
    return None


@dataclass
class NeighborhoodTree:
    """Breadth-first expansion of the paths leaving a root edge or node.

    Entry format per level: (node_index, parent_position_in_previous_level).
    Node kinds alternate between levels starting from ``root_kind``.  A node
    reached along several distinct paths appears once per path (the levels
    form the computation tree, so counts are per-occurrence).
    """

    root_kind: str
    root: int
    depth: int
    levels: list[list[tuple[int, int]]]
    is_tree: bool
    root_edge: DirectedEdge | None = None

    def kind_at(self, depth: int) -> str:
        if depth % 2 == 0:
            return self.root_kind
        return CHK if self.root_kind == VAR else VAR

    def variable_levels(self):
        """Yield (depth, entries) for the levels holding variable nodes."""
        for d, entries in enumerate(self.levels):
            if self.kind_at(d) == VAR:
                yield d, entries

    def node_set(self) -> set[tuple[str, int]]:
        """Distinct (kind, node) pairs appearing anywhere in the expansion."""
        out = set()
        for d, entries in enumerate(self.levels):
            k = self.kind_at(d)
            for node, _ in entries:
                out.add((k, node))
        return out


@dataclass
class NeighborhoodStats:
    """Bad-variable tally of a neighborhood: total and per depth."""

    bad_total: int
    bad_by_depth: dict[int, int] = field(default_factory=dict)


def _expand(g: TannerGraph, root_kind: str, root: int, depth: int,
            exclude_first: int | None) -> NeighborhoodTree:
    adj = (g.var_adj, g.chk_adj)
    levels: list[list[tuple[int, int]]] = [[(root, -1)]]
    counts: dict[tuple[str, int], int] = {(root_kind, root): 1}
    # parent graph-node of each entry, used to forbid immediate backtracking
    prev_parents: list[int | None] = [exclude_first]
    kind_idx = 0 if root_kind == VAR else 1
    for d in range(depth):
        side = adj[(kind_idx + d) % 2]
        cur = levels[d]
        nxt: list[tuple[int, int]] = []
        nxt_parents: list[int | None] = []
        nkind = VAR if ((kind_idx + d) % 2 == 1) else CHK
        for pos, (node, _) in enumerate(cur):
            banned = prev_parents[pos]
            for nb in side[node]:
                if nb == banned:
                    continue
                nxt.append((nb, pos))
                nxt_parents.append(node)
                key = (nkind, nb)
                counts[key] = counts.get(key, 0) + 1
        if not nxt:
            levels.append([])
            prev_parents = []
            break
        levels.append(nxt)
        prev_parents = nxt_parents
    while len(levels) < depth + 1:
        levels.append([])
    is_tree = all(c == 1 for c in counts.values())
    return NeighborhoodTree(root_kind=root_kind, root=root, depth=depth,
                            levels=levels, is_tree=is_tree)


def directed_neighborhood(g: TannerGraph, e: DirectedEdge, d: int) -> NeighborhoodTree:
    """Expand the depth-d neighborhood of directed edge e.

    Paths start at the tail of e; the first step may not traverse e itself,
    and no step immediately backtracks.  ``is_tree`` is set when no graph
    node is reached along two distinct paths.
    """
    g.check_directed_edge(e)
    if d < 0:
        raise GraphError("depth must be >= 0")
    tree = _expand(g, e.kind, e.tail, d, exclude_first=e.head)
    tree.root_edge = e
    return tree


def node_neighborhood(g: TannerGraph, kind: str, node: int, d: int) -> NeighborhoodTree:
    """Depth-d neighborhood of a node (all outgoing first steps allowed)."""
    limit = g.n if kind == VAR else g.m
    if not (0 <= node < limit):
        raise GraphError(f"{kind} node {node} out of range")
    if d < 0:
        raise GraphError("depth must be >= 0")
    return _expand(g, kind, node, d, exclude_first=None)


def count_bad(tree: NeighborhoodTree, pattern: np.ndarray) -> NeighborhoodStats:
    """Count flipped variables in the tree, per depth and in total.

    A variable occurring along several paths of a non-tree neighborhood is
    counted once per occurrence.
    """
    pattern = np.asarray(pattern)
    by_depth: dict[int, int] = {}
    for d, entries in tree.variable_levels():
        bad = sum(int(pattern[node]) for node, _ in entries)
        by_depth[d] = bad
    return NeighborhoodStats(bad_total=sum(by_depth.values()), bad_by_depth=by_depth)
