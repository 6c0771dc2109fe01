"""Seeded Monte Carlo of Gallager A over the binary symmetric channel.

Every frame's flip pattern is a pure function of (master_seed, point
index, frame index): a counter hash seeds the frame, the flip count is
drawn by inverting the exact binomial CDF, and the flip positions come
from a Philox generator keyed by the same hash.  That makes results
byte-identical across reruns and independent of block size or worker
count, and lets frames below a verified correction radius be skipped
without touching the statistics.

Frame errors compare the estimate at stopping against the transmitted
all-zero word, so convergence to a wrong codeword counts as an error.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from multiprocessing import get_context

import numpy as np

from .decoder import BatchDecoder
from .graph import TannerGraph

SIM_SCHEMA = "galdec.sim-result/v1"

_U64 = np.uint64
_PHI1 = _U64(0x9E3779B97F4A7C15)
_PHI2 = _U64(0xD1B54A32D192ED03)


def _mix64(x: np.ndarray | int):
    """splitmix64 finalizer, vectorized over uint64 (wrapping arithmetic)."""
    z = np.atleast_1d(np.asarray(x, dtype=np.uint64)).copy()
    with np.errstate(over="ignore"):
        z += _PHI1
        z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
        z ^= z >> _U64(31)
    return z if np.ndim(x) else z[0]


def frame_seeds(master_seed: int, point_index: int, frames: np.ndarray) -> np.ndarray:
    """Per-frame 64-bit seeds: hash of master seed, point index, frame index."""
    with np.errstate(over="ignore"):
        base = _mix64(_U64(master_seed & 0xFFFFFFFFFFFFFFFF)
                      ^ (_U64(point_index) * _PHI2))
        keys = frames.astype(np.uint64) * _PHI1
    return _mix64(base ^ keys)


def _binomial_cdf(n: int, p: float) -> np.ndarray:
    """cdf[w] = P(Binomial(n, p) <= w), computed iteratively in float64."""
    pmf = np.empty(n + 1, dtype=np.float64)
    # log-space recurrence avoids underflow of (1-p)^n at large n
    logs = np.empty(n + 1, dtype=np.float64)
    logs[0] = n * math.log1p(-p)
    for w in range(n):
        logs[w + 1] = logs[w] + math.log((n - w) * p) - math.log((w + 1) * (1 - p))
    np.exp(logs, out=pmf)
    cdf = np.cumsum(pmf)
    cdf[-1] = 1.0
    return cdf


@dataclass(frozen=True)
class SimSpec:
    crossover_probabilities: tuple[float, ...]
    frames_per_point: int
    max_iterations: int
    master_seed: int = 0
    target_frame_errors: int | None = 100
    slope_p_range: tuple[float, float] | None = None
    min_decode_weight: int = 0  # skip lighter frames; needs a verified radius
    block: int = 8192

    def __post_init__(self):
        for p in self.crossover_probabilities:
            if not (0 < p < 0.5):
                raise ValueError(f"crossover probability {p} outside (0, 0.5)")
        if self.frames_per_point < 1:
            raise ValueError("frames_per_point must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.target_frame_errors is not None and self.target_frame_errors < 1:
            raise ValueError("target_frame_errors must be >= 1 or None")


@dataclass
class PointResult:
    p: float
    frames: int
    frame_errors: int
    bit_errors: int
    n: int

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self.n)

    def ci_halfwidth(self) -> float:
        """95% normal-approximation halfwidth on the FER."""
        fer = self.fer
        return 1.96 * math.sqrt(max(fer * (1.0 - fer), 0.0) / self.frames)


@dataclass
class SimResult:
    spec: SimSpec
    graph_n: int
    graph_m: int
    points: list[PointResult]
    slope: float | None
    slope_points: int
    wall_time_s: float = 0.0

    def to_csv(self) -> str:
        lines = ["p,frames,frame_errors,bit_errors,fer,ber,ci"]
        for pt in self.points:
            lines.append(
                f"{pt.p:.10g},{pt.frames},{pt.frame_errors},{pt.bit_errors},"
                f"{pt.fer:.10g},{pt.ber:.10g},{pt.ci_halfwidth():.10g}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "schema": SIM_SCHEMA,
            "graph": {"n": self.graph_n, "m": self.graph_m},
            "spec": {
                "crossover_probabilities": list(self.spec.crossover_probabilities),
                "frames_per_point": self.spec.frames_per_point,
                "max_iterations": self.spec.max_iterations,
                "master_seed": self.spec.master_seed,
                "target_frame_errors": self.spec.target_frame_errors,
                "slope_p_range": (list(self.spec.slope_p_range)
                                  if self.spec.slope_p_range else None),
                "min_decode_weight": self.spec.min_decode_weight,
            },
            "points": [{
                "p": pt.p, "frames": pt.frames, "frame_errors": pt.frame_errors,
                "bit_errors": pt.bit_errors, "fer": pt.fer,
                "ber": pt.ber, "ci": pt.ci_halfwidth(),
            } for pt in self.points],
            "slope": {"value": self.slope, "points_used": self.slope_points,
                      "p_range": (list(self.spec.slope_p_range)
                                  if self.spec.slope_p_range else None)},
            "wall_time_s": round(self.wall_time_s, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _simulate_point(g: TannerGraph, spec: SimSpec, point_index: int) -> PointResult:
    p = spec.crossover_probabilities[point_index]
    bd = BatchDecoder(g, spec.max_iterations)
    cdf = _binomial_cdf(g.n, p)
    frames_done = 0
    frame_errors = 0
    bit_errors = 0
    target = spec.target_frame_errors
    min_w = max(spec.min_decode_weight, 1)
    while frames_done < spec.frames_per_point:
        count = min(spec.block, spec.frames_per_point - frames_done)
        fidx = np.arange(frames_done, frames_done + count, dtype=np.uint64)
        seeds = frame_seeds(spec.master_seed, point_index, fidx)
        u = (seeds >> _U64(11)).astype(np.float64) * (1.0 / (1 << 53))
        weights = np.searchsorted(cdf, u, side="right").astype(np.int64)
        decode_rows = np.flatnonzero(weights >= min_w)
        block_err = np.zeros(count, dtype=bool)
        block_bits = np.zeros(count, dtype=np.int64)
        if decode_rows.size:
            # flip positions: rank the per-(frame, bit) hashes; the W
            # smallest form a uniform W-subset, a pure function of the seed
            with np.errstate(over="ignore"):
                keys = _mix64(seeds[decode_rows, None] ^
                              (np.arange(g.n, dtype=np.uint64) * _PHI2))
            ranks = np.argsort(np.argsort(keys, axis=1, kind="stable"), axis=1)
            words = (ranks < weights[decode_rows, None]).astype(np.int8)
            _, _, fe, be = bd.decode_words(words)
            block_err[decode_rows] = fe
            block_bits[decode_rows] = be
        if target is not None and frame_errors + int(block_err.sum()) >= target:
            cum = np.cumsum(block_err)
            cut = int(np.searchsorted(cum, target - frame_errors)) + 1
            frames_done += cut
            frame_errors += int(block_err[:cut].sum())
            bit_errors += int(block_bits[:cut].sum())
            break
        frames_done += count
        frame_errors += int(block_err.sum())
        bit_errors += int(block_bits.sum())
    return PointResult(p=p, frames=frames_done, frame_errors=frame_errors,
                       bit_errors=bit_errors, n=g.n)


_sim_state: dict = {}


def _init_sim_worker(g: TannerGraph, spec: SimSpec):
    _sim_state["g"] = g
    _sim_state["spec"] = spec


def _sim_point_task(point_index: int) -> PointResult:
    return _simulate_point(_sim_state["g"], _sim_state["spec"], point_index)


def simulate(g: TannerGraph, spec: SimSpec, workers: int | None = None) -> SimResult:
    """Run the per-point frame loops and fit the log-log FER slope.

    Points are independent; ``workers`` only distributes them and never
    changes any tally.
    """
    t0 = time.time()
    n_points = len(spec.crossover_probabilities)
    if workers and workers > 1 and n_points > 1:
        ctx = get_context("fork")
        with ctx.Pool(min(workers, n_points), initializer=_init_sim_worker,
                      initargs=(g, spec)) as pool:
            points = pool.map(_sim_point_task, range(n_points))
    else:
        points = [_simulate_point(g, spec, i) for i in range(n_points)]
    usable = [(pt.p, pt.fer) for pt in points if pt.frame_errors >= 1]
    if spec.slope_p_range is not None:
        lo, hi = spec.slope_p_range
        usable = [(p, f) for p, f in usable if lo <= p <= hi]
    slope = fit_slope(usable) if len(usable) >= 2 else None
    return SimResult(spec=spec, graph_n=g.n, graph_m=g.m, points=points,
                     slope=slope, slope_points=len(usable),
                     wall_time_s=time.time() - t0)


def fit_slope(points) -> float:
    """Least-squares slope of log FER against log p."""
    pts = list(points)
    if len(pts) < 2:
        raise ValueError("slope needs at least 2 points")
    if any(f <= 0 for _, f in pts):
        raise ValueError("slope needs FER > 0 at every point")
    x = np.log([p for p, _ in pts])
    y = np.log([f for _, f in pts])
    return float(np.polyfit(x, y, 1)[0])
