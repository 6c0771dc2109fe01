"""Error-pattern sweeps, minimal-uncorrectable-pattern search, and
bad-variable-count bound checking.

Exhaustive sweeps enumerate weight-w supports in colex order and decode
them in vectorized blocks; disjoint rank ranges can be partitioned across
worker processes and merged back into a report identical to the
single-process one.  The search for a minimal non-converging pattern
tries supports concentrated on shortest cycles before falling back to the
plain colex order, since decoder failures cluster on cycle structure.
"""
from __future__ import annotations

import itertools
import json
import math
import time
from collections import deque
from dataclasses import dataclass, field
from math import comb
from multiprocessing import get_context

import numpy as np

from .colex import unrank_colex_block
from .decoder import (BatchDecoder, DecoderConfig, decode_with_trace,
                      message_trace, pattern_from_support, syndrome)
from .graph import (VAR, DirectedEdge, TannerGraph, count_bad,
                    directed_neighborhood, girth)

REPORT_SCHEMA = "galdec.verification-report/v1"


class BudgetExceededError(ValueError):
    """Exhaustive enumeration would exceed the configured pattern budget."""


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep: weights, iteration cap, and enumeration mode."""

    max_weight: int | None = None
    weight_range: tuple[int, int] | None = None
    max_iterations: int = 1
    mode: str = "exhaustive"  # or "sampled"
    sample_count: int = 0
    sample_seed: int = 0
    enumeration_budget: int = 10 ** 8
    failure_cap: int = 100

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if (self.max_weight is None) == (self.weight_range is None):
            raise ValueError("exactly one of max_weight / weight_range required")
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "sampled" and self.sample_count < 1:
            raise ValueError("sampled mode needs sample_count >= 1")

    def weights(self, n: int) -> list[int]:
        if self.weight_range is not None:
            lo, hi = self.weight_range
        else:
            lo, hi = 0, self.max_weight
        if not (0 <= lo <= hi <= n):
            raise ValueError(f"weight range [{lo}, {hi}] invalid for n={n}")
        return list(range(lo, hi + 1))


@dataclass
class WeightRow:
    weight: int
    tested: int
    corrected: int
    failed: int
    max_iterations_observed: int  # over corrected patterns


@dataclass
class VerificationReport:
    graph_n: int
    graph_m: int
    graph_girth: int | float
    mode: str
    weights: list[int]
    max_iterations: int
    rows: list[WeightRow]
    failures: list[tuple[int, tuple[int, ...]]]  # (weight, support), capped
    failure_cap: int
    failures_capped: bool
    sample_count: int = 0
    sample_seed: int = 0
    wall_time_s: float = 0.0

    @property
    def total_failed(self) -> int:
        return sum(r.failed for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "graph": {"n": self.graph_n, "m": self.graph_m,
                      "girth": None if math.isinf(self.graph_girth) else self.graph_girth},
            "mode": self.mode,
            "weights": self.weights,
            "max_iterations": self.max_iterations,
            "sample_count": self.sample_count,
            "sample_seed": self.sample_seed,
            "per_weight": [vars(r).copy() for r in self.rows],
            "total_failed": self.total_failed,
            "failures": [{"weight": w, "support": list(s)} for w, s in self.failures],
            "failure_cap": self.failure_cap,
            "failures_capped": self.failures_capped,
            "wall_time_s": round(self.wall_time_s, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        lines = ["weight,tested,corrected,failed,max_iters"]
        for r in self.rows:
            lines.append(f"{r.weight},{r.tested},{r.corrected},{r.failed},"
                         f"{r.max_iterations_observed}")
        return "\n".join(lines) + "\n"


_CHUNK = 8192

# per-process state for sweep workers
_worker_state: dict = {}


def _init_worker(graph: TannerGraph, max_iterations: int):
    _worker_state["bd"] = BatchDecoder(graph, max_iterations)
    _worker_state["n"] = graph.n


def _sweep_chunk(task):
    """Decode one block of patterns; returns mergeable partial results.

    task: (weight, kind, a, b) where exhaustive blocks carry a colex rank
    range [a, b) and sampled blocks carry (chunk_index, count, seed).
    """
    w, kind, a, b = task
    bd: BatchDecoder = _worker_state["bd"]
    n: int = _worker_state["n"]
    if kind == "exh":
        ranks = np.arange(a, b, dtype=np.int64)
        supports = unrank_colex_block(ranks, n, w) if w else np.zeros((b - a, 0), np.int64)
    else:
        chunk_idx, count, seed = a, b[0], b[1]
        rng = np.random.default_rng((seed, w, chunk_idx))
        if w:
            keys = rng.random((count, n))
            supports = np.argpartition(keys, min(w, n - 1), axis=1)[:, :w]
            supports.sort(axis=1)
        else:
            supports = np.zeros((count, 0), np.int64)
    conv, iters, _, _ = bd.decode_supports(supports)
    failed_idx = np.flatnonzero(~conv)
    failures = [tuple(int(x) for x in supports[i]) for i in failed_idx[:_worker_state.get("cap", 100)]]
    corrected = int(conv.sum())
    max_it = int(iters[conv].max()) if corrected else 0
    return (w, len(conv), corrected, len(failed_idx), max_it, failures)


def _sweep_tasks(n: int, spec: SweepSpec, chunk: int):
    for w in spec.weights(n):
        if spec.mode == "exhaustive":
            total = comb(n, w)
            for lo in range(0, total, chunk):
                yield (w, "exh", lo, min(lo + chunk, total))
        else:
            total = spec.sample_count
            idx = 0
            for lo in range(0, total, chunk):
                yield (w, "smp", idx, (min(chunk, total - lo), spec.sample_seed))
                idx += 1


def exhaustive_verify(g: TannerGraph, spec: SweepSpec, workers: int | None = None,
                      chunk: int = _CHUNK) -> VerificationReport:
    """Decode every (or a sampled set of) weight-w error pattern(s).

    Exhaustive mode refuses up front when the total pattern count exceeds
    ``spec.enumeration_budget``.  The report does not depend on ``workers``
    or ``chunk``.
    """
    t0 = time.time()
    weights = spec.weights(g.n)
    if spec.mode == "exhaustive":
        total = sum(comb(g.n, w) for w in weights)
        if total > spec.enumeration_budget:
            raise BudgetExceededError(
                f"{total} patterns exceed the budget of {spec.enumeration_budget}; "
                f"use sampled mode")
    tasks = list(_sweep_tasks(g.n, spec, chunk))
    _worker_state["cap"] = spec.failure_cap
    if workers is None:
        workers = 1
    if workers > 1 and len(tasks) > 1:
        ctx = get_context("fork")
        with ctx.Pool(workers, initializer=_init_worker,
                      initargs=(g, spec.max_iterations)) as pool:
            partials = pool.map(_sweep_chunk, tasks, chunksize=1)
    else:
        _init_worker(g, spec.max_iterations)
        partials = [_sweep_chunk(t) for t in tasks]

    rows = {w: WeightRow(w, 0, 0, 0, 0) for w in weights}
    failures: list[tuple[int, tuple[int, ...]]] = []
    capped = False
    for w, tested, corrected, failed, max_it, fails in partials:
        row = rows[w]
        row.tested += tested
        row.corrected += corrected
        row.failed += failed
        row.max_iterations_observed = max(row.max_iterations_observed, max_it)
        for sup in fails:
            if len(failures) < spec.failure_cap:
                failures.append((w, sup))
            else:
                capped = True
        if failed > len(fails):
            capped = capped or len(failures) >= spec.failure_cap
    if spec.mode == "exhaustive":
        for w in weights:  # enumeration completeness cross-check
            assert rows[w].tested == comb(g.n, w), (w, rows[w].tested)
    return VerificationReport(
        graph_n=g.n, graph_m=g.m, graph_girth=girth(g),
        mode=spec.mode, weights=weights, max_iterations=spec.max_iterations,
        rows=[rows[w] for w in weights], failures=failures,
        failure_cap=spec.failure_cap, failures_capped=capped,
        sample_count=spec.sample_count if spec.mode == "sampled" else 0,
        sample_seed=spec.sample_seed if spec.mode == "sampled" else 0,
        wall_time_s=time.time() - t0)


# -- shortest cycles ----------------------------------------------------------

def _shortest_cycle_through(g: TannerGraph, v: int, c: int, cap: float):
    """Variables and checks of a shortest cycle through edge (v, c), if any."""
    par: dict[tuple[str, int], tuple[str, int] | None] = {(VAR, v): None}
    dq = deque([((VAR, v), 0)])
    found = False
    while dq and not found:
        (kind, u), d = dq.popleft()
        if d + 1 > cap:
            break
        if kind == VAR:
            for cc in g.var_adj[u]:
                if u == v and cc == c:
                    continue
                if ("chk", cc) not in par:
                    par[("chk", cc)] = (kind, u)
                    if cc == c:
                        found = True
                        break
                    dq.append((("chk", cc), d + 1))
        else:
            for vv in g.chk_adj[u]:
                if (VAR, vv) not in par:
                    par[(VAR, vv)] = (kind, u)
                    dq.append(((VAR, vv), d + 1))
    if ("chk", c) not in par:
        return None
    node: tuple[str, int] | None = ("chk", c)
    vars_, chks = [], []
    while node is not None:
        (vars_ if node[0] == VAR else chks).append(node[1])
        node = par[node]
    return tuple(sorted(vars_)), tuple(sorted(chks))


def shortest_cycles(g: TannerGraph) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Distinct shortest cycles, one per girth-length cycle found through
    each edge, as (variables, checks) pairs sorted deterministically."""
    gg = girth(g)
    if math.isinf(gg):
        return []
    seen = set()
    out = []
    for v, c in g.edges:
        hit = _shortest_cycle_through(g, v, c, gg - 1)
        if hit is None:
            continue
        if len(hit[0]) + len(hit[1]) != gg:
            continue
        if hit not in seen:
            seen.add(hit)
            out.append(hit)
    out.sort()
    return out


# -- failure configurations ---------------------------------------------------

@dataclass
class FailureConfiguration:
    """A non-converging error pattern and the structure it sits on."""

    support: tuple[int, ...]
    checks: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    shortest_cycle_in_support: int | float
    first_stuck_iteration: int | None


def extract_failure_configuration(g: TannerGraph, pattern,
                                  outcome) -> FailureConfiguration:
    """Induced subgraph of a failed pattern plus stall diagnostics.

    ``first_stuck_iteration`` is the first iteration at the end of which
    some variable receives two or more incorrect check messages.
    """
    if outcome.converged:
        raise ValueError("outcome converged; there is no failure to extract")
    pattern = np.asarray(pattern, dtype=np.uint8)
    support = tuple(int(x) for x in np.flatnonzero(pattern))
    checks = tuple(sorted({c for v in support for c in g.var_adj[v]}))
    edges = tuple((v, c) for v in support for c in g.var_adj[v])
    vmap = {v: i for i, v in enumerate(support)}
    cmap = {c: i for i, c in enumerate(checks)}
    sub = TannerGraph.from_edges(len(support), len(checks),
                                 [(vmap[v], cmap[c]) for v, c in edges])
    trace = outcome.trace
    if not trace:
        trace = message_trace(g, pattern, max(outcome.iterations_used, 1))
    first_stuck = None
    voe = g.var_of_edge
    for state, _ in trace:
        incoming = np.bincount(voe, weights=state.chk_to_var.astype(np.float64),
                               minlength=g.n)
        if (incoming >= 2).any():
            first_stuck = state.iteration
            break
    return FailureConfiguration(
        support=support, checks=checks, edges=edges,
        shortest_cycle_in_support=girth(sub), first_stuck_iteration=first_stuck)


@dataclass
class MinSearchResult:
    """Outcome of the minimal-uncorrectable-pattern search."""

    found: FailureConfiguration | None
    weight: int | None
    patterns_tested: int
    budget: int
    max_iterations: int
    exhausted_weights: list[int] = field(default_factory=list)

    @property
    def none_found(self) -> bool:
        return self.found is None


def _cycle_candidates(g: TannerGraph, cycles, w: int, per_cycle_cap: int = 512):
    """Supports of weight w concentrated on shortest cycles, deduplicated."""
    seen = set()
    out = []
    for cyc_vars, cyc_chks in cycles:
        produced = 0
        if w <= len(cyc_vars):
            pool = itertools.combinations(cyc_vars, w)
        else:
            ring = sorted({v for c in cyc_chks for v in g.chk_adj[c]}
                          | {v for cv in cyc_vars for c in g.var_adj[cv]
                             for v in g.chk_adj[c]})
            extras = [v for v in ring if v not in cyc_vars]
            if w - len(cyc_vars) > len(extras):
                continue
            pool = (tuple(sorted(cyc_vars + e))
                    for e in itertools.combinations(extras, w - len(cyc_vars)))
        for sup in pool:
            if sup not in seen:
                seen.add(sup)
                out.append(sup)
                produced += 1
                if produced >= per_cycle_cap:
                    break
    return out


def find_min_uncorrectable(g: TannerGraph, max_iterations: int | None = None,
                           start_weight: int = 1,
                           budget: int = 10 ** 7) -> MinSearchResult:
    """Search ascending weights for the lightest non-converging pattern.

    Shortest-cycle-concentrated supports are tried first at each weight,
    then the colex enumeration, until the weight is exhausted or the
    pattern budget runs out.  The returned failure re-decodes to the same
    non-convergence by construction (it is re-decoded to build the
    configuration).
    """
    if start_weight < 1:
        raise ValueError("start_weight must be >= 1")
    if max_iterations is None:
        gg = girth(g)
        if math.isinf(gg):
            raise ValueError("max_iterations required on an acyclic graph")
        max_iterations = 4 * int(gg)
    bd = BatchDecoder(g, max_iterations)
    cycles = shortest_cycles(g)
    tested = 0
    exhausted: list[int] = []

    def decode_block(support_rows) -> int | None:
        conv, _, _, _ = bd.decode_supports(np.asarray(support_rows, dtype=np.int64))
        bad = np.flatnonzero(~conv)
        return int(bad[0]) if bad.size else None

    for w in range(start_weight, g.n + 1):
        if tested >= budget:
            break
        # phase A: cycle-concentrated supports
        cands = _cycle_candidates(g, cycles, w)
        for lo in range(0, len(cands), _CHUNK):
            block = cands[lo:lo + min(_CHUNK, budget - tested)]
            if not block:
                break
            tested += len(block)
            hit = decode_block(np.array(block, dtype=np.int64))
            if hit is not None:
                return _finish(g, block[hit], w, tested, budget, max_iterations,
                               exhausted)
            if tested >= budget:
                break
        # phase B: colex enumeration
        total = comb(g.n, w)
        lo = 0
        while lo < total and tested < budget:
            hi = min(lo + _CHUNK, total, lo + (budget - tested))
            sup = unrank_colex_block(np.arange(lo, hi, dtype=np.int64), g.n, w)
            tested += hi - lo
            hit = decode_block(sup)
            if hit is not None:
                return _finish(g, tuple(int(x) for x in sup[hit]), w, tested,
                               budget, max_iterations, exhausted)
            lo = hi
        if lo >= total:
            exhausted.append(w)
    return MinSearchResult(found=None, weight=None, patterns_tested=tested,
                           budget=budget, max_iterations=max_iterations,
                           exhausted_weights=exhausted)


def _finish(g, support, w, tested, budget, max_iterations, exhausted):
    pattern = pattern_from_support(g.n, support)
    outcome = decode_with_trace(g, pattern, DecoderConfig(max_iterations))
    assert not outcome.converged, "batch decoder flagged a converging pattern"
    cfgn = extract_failure_configuration(g, pattern, outcome)
    return MinSearchResult(found=cfgn, weight=w, patterns_tested=tested,
                           budget=budget, max_iterations=max_iterations,
                           exhausted_weights=exhausted)


# -- bad-variable-count bounds ------------------------------------------------

@dataclass
class BadCountBoundCheck:
    """Result of one bound check; ``applicable`` is False when the
    preconditions fail, which is distinct from a bound violation."""

    applicable: bool
    reason: str | None = None
    tail_is_bad: bool | None = None
    k: int | None = None
    bad_in_window: int | None = None       # flipped variables within depth 2k
    bad_in_prev_window: int | None = None  # within depth 2k-2
    bound: int | None = None
    satisfied: bool | None = None


def _bad_count_bound(tail_bad: bool, k: int, prev: int) -> int:
    """Lower bound on flipped variables within depth 2k given the count
    within depth 2k-2, for a tail emitting an incorrect message at
    iteration k+1 on a tree neighborhood."""
    if tail_bad:
        bound = k + 1
        if prev == 1:
            bound = max(bound, 2 ** (k - 1) + 1)
        elif prev == 2 and k >= 2:
            bound = max(bound, 2 ** (k - 2) + 2)
    else:
        bound = 2 * k
        if prev == 0:
            bound = max(bound, 2 ** k)
        elif prev == 1 and k >= 2:
            bound = max(bound, 2 ** (k - 1) + 2 ** (k - 2) + 1)
        elif prev == 2:
            bound = max(bound, 2 ** (k - 1) + 2)
    return bound


def check_bad_count_bounds(g: TannerGraph, pattern, e: DirectedEdge, k: int,
                        _trace=None) -> BadCountBoundCheck:
    """Verify the neighborhood bad-count bound for one (pattern, edge, k).

    Applicable when e is variable-to-check, its depth-2k neighborhood is a
    tree, the decoder has not stopped before iteration k+1, and the
    message on e at iteration k+1 is incorrect.
    """
    if e.kind != VAR:
        return BadCountBoundCheck(False, "bounds apply to variable-to-check messages")
    if k < 1:
        return BadCountBoundCheck(False, "k must be >= 1")
    pattern = np.asarray(pattern, dtype=np.uint8)
    tree = directed_neighborhood(g, e, 2 * k)
    if not tree.is_tree:
        return BadCountBoundCheck(False, f"depth-{2 * k} neighborhood is not a tree")
    if _trace is None:
        outcome = decode_with_trace(g, pattern, DecoderConfig(k + 1))
        if outcome.iterations_used < k + 1:
            return BadCountBoundCheck(
                False, f"decoder stopped at iteration {outcome.iterations_used}")
        trace = outcome.trace
    else:
        trace = _trace
        if len(trace) < k + 1:
            return BadCountBoundCheck(False, "trace shorter than k+1 iterations")
    eid = g.edge_id[(e.tail, e.head)]
    if trace[k][0].var_to_chk[eid] != 1:
        return BadCountBoundCheck(False, f"message on edge at iteration {k + 1} is correct")
    stats = count_bad(tree, pattern)
    b_total = stats.bad_total
    b_prev = sum(cnt for d, cnt in stats.bad_by_depth.items() if d <= 2 * k - 2)
    tail_bad = bool(pattern[e.tail])
    bound = _bad_count_bound(tail_bad, k, b_prev)
    return BadCountBoundCheck(True, None, tail_bad, k, b_total, b_prev, bound,
                       b_total >= bound)


@dataclass
class BadCountSweepResult:
    patterns_tried: int
    applicable: int
    violations: list[dict]
    wall_time_s: float


def bad_count_bound_sweep(g: TannerGraph, count: int, seed: int = 0,
                        weight_lo: int = 1, weight_hi: int = 8,
                        ks: tuple[int, ...] = (1, 2, 3),
                        edges_per_case: int = 4) -> BadCountSweepResult:
    """Randomized bound sweep: draw patterns, locate incorrect messages at
    iterations k+1, and check every applicable triple until ``count``
    applicable checks have run.  Returns all violations (expected none).
    """
    rng = np.random.default_rng(seed)
    kmax = max(ks)
    t0 = time.time()
    applicable = 0
    tried = 0
    violations: list[dict] = []
    attempts_cap = count * 200
    while applicable < count and tried < attempts_cap:
        tried += 1
        w = int(rng.integers(weight_lo, weight_hi + 1))
        support = rng.choice(g.n, w, replace=False)
        pattern = pattern_from_support(g.n, support)
        if syndrome(g, pattern):
            continue  # decoder stops immediately; nothing to check
        trace = message_trace(g, pattern, kmax + 1)
        # iteration at which decode() would stop
        stop = None
        for state, est in trace:
            if syndrome(g, est):
                stop = state.iteration
                break
        for k in ks:
            if applicable >= count:
                break
            if stop is not None and stop < k + 1:
                continue
            bad_edges = np.flatnonzero(trace[k][0].var_to_chk)
            if not bad_edges.size:
                continue
            pick = rng.choice(bad_edges, min(edges_per_case, bad_edges.size),
                              replace=False)
            for eid in pick:
                e = DirectedEdge(VAR, int(g.var_of_edge[eid]), int(g.chk_of_edge[eid]))
                res = check_bad_count_bounds(g, pattern, e, k, _trace=trace)
                if res.applicable:
                    applicable += 1
                    if not res.satisfied:
                        violations.append({
                            "support": [int(x) for x in support], "k": k,
                            "edge": (e.tail, e.head),
                            "bad_in_window": res.bad_in_window,
                            "bound": res.bound,
                        })
                    if applicable >= count:
                        break
    return BadCountSweepResult(tried, applicable, violations, time.time() - t0)
