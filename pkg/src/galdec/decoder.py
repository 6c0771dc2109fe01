"""Bit-exact Gallager A hard-decision decoding on Tanner graphs.

Each iteration is two-phase (flooding): every variable-to-check message is
computed from the previous check-to-variable messages, then every
check-to-variable message from the fresh variable-to-check ones, then the
per-variable estimate.  Messages live in flat arrays indexed by the
graph's dense edge ids, so identical inputs give identical outcomes
regardless of how the per-node work is ordered.

A variable forwards its received bit unless all extrinsic check messages
agree; a check returns the XOR of the extrinsic variable messages; the
estimate is the majority of a variable's incoming check messages, falling
back to the received bit on a tie (ties cannot occur at column weight 3).
Decoding stops as soon as the estimate is a codeword, checking the
received word itself before any message passing.

The threshold entry point generalizes the variable rule to Gallager B:
flip away from the received bit once at least ``threshold`` extrinsic
messages disagree with it.  At column weight 3 with threshold 2 it
coincides with Gallager A, which is the verified scope.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import TannerGraph


@dataclass(frozen=True)
class DecoderConfig:
    max_iterations: int
    trace: bool = False
    threshold: int | None = None  # None: Gallager A

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.threshold is not None and self.threshold < 1:
            raise ValueError("threshold must be >= 1")


@dataclass
class MessageState:
    """All messages of one iteration, one bit per directed edge."""

    iteration: int
    var_to_chk: np.ndarray
    chk_to_var: np.ndarray


@dataclass
class DecodeOutcome:
    converged: bool
    iterations_used: int
    estimate: np.ndarray
    trace: list[tuple[MessageState, np.ndarray]] = field(default_factory=list)


def _as_word(g: TannerGraph, r) -> np.ndarray:
    r = np.asarray(r, dtype=np.uint8)
    if r.shape != (g.n,):
        raise ValueError(f"word length {r.shape} does not match n={g.n}")
    if ((r != 0) & (r != 1)).any():
        raise ValueError("word entries must be bits")
    return r


def pattern_from_support(n: int, support) -> np.ndarray:
    """Length-n binary word with ones at the given variable indices."""
    w = np.zeros(n, dtype=np.uint8)
    for i in support:
        if not (0 <= i < n):
            raise ValueError(f"support index {i} out of range [0, {n})")
        w[i] = 1
    return w


# -- single-message update rules (unit-testable against the truth tables) --

def variable_update(received_bit: int, incoming, first_iteration: bool = False,
                    threshold: int | None = None) -> int:
    """Message a variable sends on one edge given the extrinsic check messages.

    First iteration: the received bit.  Gallager A (threshold None):
    unanimous extrinsic messages win, anything mixed repeats the received
    bit.  Gallager B: the complement of the received bit once at least
    ``threshold`` extrinsic messages equal that complement.
    """
    if first_iteration:
        return int(received_bit)
    inc = list(incoming)
    if threshold is None:
        if inc and all(b == 1 for b in inc):
            return 1
        if inc and all(b == 0 for b in inc):
            return 0
        return int(received_bit)
    flip = 1 - int(received_bit)
    if sum(1 for b in inc if b == flip) >= threshold:
        return flip
    return int(received_bit)


def check_update(incoming) -> int:
    """Message a check sends on one edge: XOR of the extrinsic variable bits."""
    out = 0
    for b in incoming:
        out ^= int(b)
    return out


def estimate(received_bit: int, incoming) -> int:
    """Majority of all incoming check messages; received bit breaks ties."""
    inc = list(incoming)
    ones = sum(int(b) for b in inc)
    if 2 * ones > len(inc):
        return 1
    if 2 * ones < len(inc):
        return 0
    return int(received_bit)


def syndrome(g: TannerGraph, word) -> bool:
    """True iff every check's incident bits XOR to zero (word is a codeword)."""
    w = _as_word(g, word)
    if g.num_edges == 0:
        return True
    parity = np.bincount(g.chk_of_edge, weights=w[g.var_of_edge].astype(np.float64),
                         minlength=g.m).astype(np.int64) & 1
    return not parity.any()


# -- full decoder ------------------------------------------------------------

def _iterate(g: TannerGraph, r: np.ndarray, max_iterations: int,
             threshold: int | None, keep_trace: bool, stop_on_codeword: bool):
    """Shared engine; yields per-iteration state and the stopping decision."""
    voe, coe = g.var_of_edge, g.chk_of_edge
    deg = g.var_degrees
    degm1_e = (deg - 1)[voe]
    r_e = r[voe].astype(np.int64)
    n, m = g.n, g.m

    def var_sums(c2v):
        return np.bincount(voe, weights=c2v.astype(np.float64), minlength=n).astype(np.int64)

    def chk_parity(bits_e):
        return np.bincount(coe, weights=bits_e.astype(np.float64), minlength=m).astype(np.int64) & 1

    trace: list[tuple[MessageState, np.ndarray]] = []
    c2v = None
    est = r.copy()
    for j in range(1, max_iterations + 1):
        if j == 1:
            v2c = r_e.copy()
        else:
            sums = var_sums(c2v)
            cnt_excl = sums[voe] - c2v
            if threshold is None:
                v2c = np.where(cnt_excl == degm1_e, 1,
                               np.where(cnt_excl == 0, 0, r_e))
            else:
                flip_e = 1 - r_e
                cnt_flip = np.where(flip_e == 1, cnt_excl, degm1_e - cnt_excl)
                v2c = np.where(cnt_flip >= threshold, flip_e, r_e)
        parity = chk_parity(v2c)
        c2v = parity[coe] ^ v2c
        sums = var_sums(c2v)
        est = np.where(2 * sums > deg, 1, np.where(2 * sums < deg, 0, r)).astype(np.uint8)
        done = stop_on_codeword and not chk_parity(est[voe]).any()
        if keep_trace:
            trace.append((MessageState(j, v2c.astype(np.uint8), c2v.astype(np.uint8)),
                          est.copy()))
        if done:
            return True, j, est, trace
    return False, max_iterations, est, trace


def decode(g: TannerGraph, r, cfg: DecoderConfig) -> DecodeOutcome:
    """Run Gallager A (or thresholded B) until a codeword or M iterations.

    A received word that is already a codeword converges in 0 iterations.
    """
    r = _as_word(g, r)
    if syndrome(g, r):
        out = DecodeOutcome(True, 0, r.copy())
        return out
    converged, used, est, trace = _iterate(
        g, r, cfg.max_iterations, cfg.threshold, cfg.trace, stop_on_codeword=True)
    return DecodeOutcome(converged, used, est, trace)


def decode_with_trace(g: TannerGraph, r, cfg: DecoderConfig) -> DecodeOutcome:
    """decode() with the per-iteration messages and estimates retained."""
    cfg = DecoderConfig(cfg.max_iterations, True, cfg.threshold)
    return decode(g, r, cfg)


def message_trace(g: TannerGraph, r, iterations: int,
                  threshold: int | None = None) -> list[tuple[MessageState, np.ndarray]]:
    """Messages of the first ``iterations`` rounds with no stopping rule.

    The pure message recursion: used to probe locality and bound properties
    of individual messages independent of the codeword test.
    """
    r = _as_word(g, r)
    _, _, _, trace = _iterate(g, r, iterations, threshold, True, stop_on_codeword=False)
    return trace


def trace_records(g: TannerGraph, outcome: DecodeOutcome) -> list[dict]:
    """Trace as JSON-ready records, one per iteration.

    Incorrect means 1 under the all-zero-codeword convention.
    """
    recs = []
    for state, est in outcome.trace:
        recs.append({
            "j": state.iteration,
            "incorrect_v2c_edges": np.flatnonzero(state.var_to_chk).tolist(),
            "incorrect_c2v_edges": np.flatnonzero(state.chk_to_var).tolist(),
            "estimate_support": np.flatnonzero(est).tolist(),
        })
    return recs


# -- batched decoder ---------------------------------------------------------

class BatchDecoder:
    """Decode many received words at once on one shared graph.

    Semantically identical to decode(): per word it reports whether a
    codeword was reached within M iterations, at which iteration, whether
    the estimate at stopping differs from the all-zero word (frame error),
    and its weight (bit errors).  Converged words drop out of the working
    set, so the cost tracks the words still active.
    """

    def __init__(self, g: TannerGraph, max_iterations: int,
                 threshold: int | None = None):
        self.g = g
        self.max_iterations = max_iterations
        self.threshold = threshold
        if g.num_edges and (g.var_degrees.max() > 100 or g.chk_degrees.max() > 100):
            raise ValueError("batch decoder assumes node degrees <= 100")
        E = g.num_edges
        self._degm1_e = (g.var_degrees - 1)[g.var_of_edge].astype(np.int8)
        # segmented sums via gathers padded with a sentinel zero column at
        # position E; a regular variable side skips the gather entirely
        # because edges are already grouped by variable
        edge_pos = {e: i for i, e in enumerate(g.edges)}
        dc_max = max(int(g.chk_degrees.max(initial=0)), 1)
        chk_gather = np.full((g.m, dc_max), E, dtype=np.int64)
        for c, adj in enumerate(g.chk_adj):
            for t, v in enumerate(adj):
                chk_gather[c, t] = edge_pos[(v, c)]
        self._chk_gather = chk_gather.ravel()
        self._dc_max = dc_max
        self._dv_uniform = (g.n > 0 and len(set(map(len, g.var_adj))) == 1
                            and len(g.var_adj[0]) > 0)
        if not self._dv_uniform:
            dv_max = max(int(g.var_degrees.max(initial=0)), 1)
            var_gather = np.full((g.n, dv_max), E, dtype=np.int64)
            for v, adj in enumerate(g.var_adj):
                for t, c in enumerate(adj):
                    var_gather[v, t] = edge_pos[(v, c)]
            self._var_gather = var_gather.ravel()
            self._dv_max = dv_max

    @staticmethod
    def _with_sentinel(bits):
        B, E = bits.shape
        ext = np.empty((B, E + 1), dtype=np.int8)
        ext[:, :E] = bits
        ext[:, E] = 0
        return ext

    def _chk_parity(self, bits):  # bits: (B, E) -> (B, m)
        B = bits.shape[0]
        ext = self._with_sentinel(bits)
        seg = np.take(ext, self._chk_gather, axis=1).reshape(
            B, self.g.m, self._dc_max).sum(axis=2, dtype=np.int8)
        return seg & 1

    def _var_sums(self, c2v):  # (B, E) -> (B, n)
        B = c2v.shape[0]
        if self._dv_uniform:
            dv = len(self.g.var_adj[0])
            return c2v.reshape(B, self.g.n, dv).sum(axis=2, dtype=np.int8)
        ext = self._with_sentinel(c2v)
        return np.take(ext, self._var_gather, axis=1).reshape(
            B, self.g.n, self._dv_max).sum(axis=2, dtype=np.int8)

    def decode_words(self, words: np.ndarray):
        """Decode a (B, n) bit matrix.

        Returns (converged, iterations, frame_error, bit_errors) arrays of
        length B.
        """
        g = self.g
        words = np.ascontiguousarray(words, dtype=np.int8)
        B = words.shape[0]
        if words.shape != (B, g.n):
            raise ValueError("word matrix width does not match n")
        converged = np.zeros(B, dtype=bool)
        iters = np.full(B, self.max_iterations, dtype=np.int32)
        frame_err = np.zeros(B, dtype=bool)
        bit_err = np.zeros(B, dtype=np.int64)

        def retire(idx, est, j):
            converged[idx] = True
            iters[idx] = j
            w = est.sum(axis=1)
            bit_err[idx] = w
            frame_err[idx] = w > 0

        if g.num_edges == 0:
            retire(np.arange(B), words, 0)
            return converged, iters, frame_err, bit_err

        voe = g.var_of_edge
        r = words
        parity0 = self._chk_parity(np.take(r, voe, axis=1))
        ok0 = ~parity0.any(axis=1)
        idx = np.arange(B)
        if ok0.any():
            retire(idx[ok0], r[ok0], 0)
        active = idx[~ok0]
        r = r[~ok0]
        deg = g.var_degrees.astype(np.int8)
        degm1_e = self._degm1_e
        c2v = None
        est = None
        for j in range(1, self.max_iterations + 1):
            if active.size == 0:
                break
            r_e = np.take(r, voe, axis=1)
            if j == 1:
                v2c = r_e
            else:
                sums = self._var_sums(c2v)
                cnt_excl = np.take(sums, voe, axis=1) - c2v
                if self.threshold is None:
                    v2c = np.where(cnt_excl == degm1_e, 1,
                                   np.where(cnt_excl == 0, 0, r_e)).astype(np.int8)
                else:
                    flip_e = 1 - r_e
                    cnt_flip = np.where(flip_e == 1, cnt_excl, degm1_e - cnt_excl)
                    v2c = np.where(cnt_flip >= self.threshold, flip_e, r_e).astype(np.int8)
            parity = self._chk_parity(v2c)
            c2v = np.take(parity, g.chk_of_edge, axis=1) ^ v2c
            sums = self._var_sums(c2v)
            est = np.where(2 * sums > deg, 1, np.where(2 * sums < deg, 0, r)).astype(np.int8)
            ok = ~self._chk_parity(np.take(est, voe, axis=1)).any(axis=1)
            if ok.any():
                retire(active[ok], est[ok], j)
                keep = ~ok
                active = active[keep]
                r = r[keep]
                c2v = c2v[keep]
                est = est[keep]
        if active.size:
            # not converged: estimate is nonzero (zero is a codeword)
            bit_err[active] = est.sum(axis=1)
            frame_err[active] = True
        return converged, iters, frame_err, bit_err

    def decode_supports(self, supports: np.ndarray, n: int | None = None):
        """decode_words() for a (B, k) matrix of flip-position rows."""
        n = self.g.n if n is None else n
        B = supports.shape[0]
        words = np.zeros((B, n), dtype=np.int8)
        if supports.size:
            words[np.arange(B)[:, None], supports] = 1
        return self.decode_words(words)
