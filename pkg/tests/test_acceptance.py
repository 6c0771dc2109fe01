"""The acceptance gate: one test per criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Tolerances are stated inline; none are loosened at runtime.
"""
import json
import math
import time
from itertools import product
from math import comb

import numpy as np
import pytest

from galdec import (DecoderConfig, DirectedEdge, SweepSpec, VAR, check_update,
                    decode, directed_neighborhood, exhaustive_verify,
                    find_min_uncorrectable, girth, bad_count_bound_sweep,
                    message_trace, pattern_from_support, save_alist, simulate,
                    SimSpec, validate_column_weight, variable_update)
from galdec.cli import main as cli_main

from oracles import oracle_girth, random_bipartite
from test_decoder import node_rule_outputs

WORKERS = 2


def verdict(num, ok, detail):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_1_girth10_corrects_weight_up_to_4(g10):
    # tolerance: exactly 0 failures over all patterns of weight 0..4
    assert 96 <= g10.n <= 155
    assert validate_column_weight(g10, 3)
    assert girth(g10) >= 10
    spec = SweepSpec(max_weight=4, max_iterations=5)
    rep = exhaustive_verify(g10, spec, workers=WORKERS)
    total = sum(comb(g10.n, w) for w in range(5))
    tested = sum(r.tested for r in rep.rows)
    ok = rep.total_failed == 0 and tested == total
    verdict(1, ok, f"{tested} patterns of weight <= 4 on n={g10.n}, "
                   f"girth-10 code; failures={rep.total_failed}; "
                   f"max iterations observed="
                   f"{max(r.max_iterations_observed for r in rep.rows)} (cap 5)")


def test_criterion_2_weight5_failure_exists(g10):
    res = find_min_uncorrectable(g10, max_iterations=40, start_weight=5,
                                 budget=10 ** 7)
    ok = res.found is not None and res.weight == 5
    support = res.found.support if res.found else None
    if ok:
        out = decode(g10, pattern_from_support(g10.n, support),
                     DecoderConfig(40))
        ok = not out.converged
    verdict(2, ok, f"weight-5 non-converging support {support} found within "
                   f"{res.patterns_tested} patterns (budget 10^7, M=40); "
                   f"re-decode reproduces non-convergence")


def test_criterion_3_girth12_sampled_weight5(g12):
    assert girth(g12) >= 12
    spec = SweepSpec(weight_range=(5, 5), max_iterations=6, mode="sampled",
                     sample_count=10 ** 6, sample_seed=12)
    rep = exhaustive_verify(g12, spec, workers=WORKERS)
    row = rep.rows[0]
    ok = row.tested == 10 ** 6 and row.failed == 0
    verdict(3, ok, f"girth-12 code (n={g12.n}): 10^6 sampled weight-5 patterns, "
                   f"M=6, failures={row.failed}")


def test_criterion_4_girth6_weight4_codeword_control(control):
    g, support = control.graph, control.codeword_support
    assert girth(g) == 6
    spec = SweepSpec(weight_range=(2, 2), max_iterations=30, failure_cap=2000)
    rep = exhaustive_verify(g, spec, workers=1)
    inside = [sup for _, sup in rep.failures if set(sup) <= set(support)]
    ok = len(inside) >= 1
    verdict(4, ok, f"girth-6 control (n={g.n}): exhaustive weight-2 sweep found "
                   f"{rep.total_failed} failures, {len(inside)} inside the "
                   f"weight-4 codeword support {support}")


def test_criterion_5_truth_tables():
    mismatches = 0
    cases = 0
    for received in (0, 1):
        for incoming in product((0, 1), repeat=3):
            expected = node_rule_outputs(received, incoming)
            got = [variable_update(received,
                                   [incoming[j] for j in range(3) if j != i])
                   for i in range(3)]
            mismatches += got != expected
            cases += 1
            for i in range(3):  # first-iteration flag forces the received bit
                ext = [incoming[j] for j in range(3) if j != i]
                mismatches += variable_update(received, ext, True) != received
                cases += 1
    for deg in range(2, 11):
        for bits in product((0, 1), repeat=deg - 1):
            mismatches += check_update(bits) != sum(bits) % 2
            cases += 1
    verdict(5, mismatches == 0,
            f"{cases} truth-table cases (variable rule vs message case "
            f"analysis, check rule vs parity), mismatches={mismatches}")


def test_criterion_6_bound_sweep_on_girth16(g16):
    assert girth(g16) >= 16
    t0 = time.time()
    res = bad_count_bound_sweep(g16, count=10 ** 4, seed=16)
    elapsed = time.time() - t0
    ok = (res.applicable == 10 ** 4 and not res.violations and elapsed < 60.0)
    verdict(6, ok, f"10^4 applicable (pattern, edge, k) checks on the girth-16 "
                   f"construction (n={g16.n}), violations="
                   f"{len(res.violations)}, {elapsed:.1f}s (< 60s)")


def test_criterion_7_girth_oracle_equivalence():
    rng = np.random.default_rng(7)
    mismatches = 0
    for _ in range(100):
        n = int(rng.integers(2, 31))
        m = int(rng.integers(2, 21))
        g = random_bipartite(rng, n, m, float(rng.uniform(0.04, 0.3)))
        mismatches += girth(g) != oracle_girth(g)
    verdict(7, mismatches == 0,
            f"girth equals exhaustive simple-cycle enumeration on 100 random "
            f"graphs (n <= 30), mismatches={mismatches}")


def test_criterion_8_message_locality(g10):
    rng = np.random.default_rng(8)
    checked = 0
    diffs = 0
    for _ in range(100):
        eid = int(rng.integers(g10.num_edges))
        v, c = g10.edges[eid]
        k = int(rng.integers(1, 3))
        tree = directed_neighborhood(g10, DirectedEdge(VAR, v, c), 2 * k)
        assert tree.is_tree
        inside = {node for d, lv in tree.variable_levels() for node, _ in lv}
        base = pattern_from_support(
            g10.n, rng.choice(g10.n, int(rng.integers(0, 8)), replace=False))
        ref = message_trace(g10, base, k + 1)[k][0].var_to_chk[eid]
        for u in range(g10.n):
            if u in inside:
                continue
            mutated = base.copy()
            mutated[u] ^= 1
            got = message_trace(g10, mutated, k + 1)[k][0].var_to_chk[eid]
            diffs += got != ref
            checked += 1
    verdict(8, diffs == 0,
            f"100 tree (edge, k) pairs; {checked} outside-bit flips never "
            f"changed the iteration-(k+1) message, diffs={diffs}")


def test_criterion_9_fer_slope(g10):
    # statistical stretch criterion: slope 5 +/- 1 with >= 100 errors/point.
    # M = 5 matches the verified correction radius's iteration cap; frames
    # lighter than 5 flips are skipped, lossless per criterion 1.
    spec = SimSpec(crossover_probabilities=(0.012, 0.017, 0.023, 0.03),
                   frames_per_point=2 * 10 ** 8, max_iterations=5,
                   master_seed=9, target_frame_errors=120,
                   min_decode_weight=5)
    res = simulate(g10, spec, workers=WORKERS)
    errs = [pt.frame_errors for pt in res.points]
    ok = all(e >= 100 for e in errs) and res.slope is not None \
        and 4.0 <= res.slope <= 6.0
    verdict(9, ok, f"FER points {[f'{pt.fer:.2e}' for pt in res.points]} with "
                   f"errors {errs}; fitted log-log slope "
                   f"{res.slope:.2f} within 5 +/- 1")


def _run_cli(argv):
    code = cli_main(argv)
    assert code == 0, argv


def _snapshot(outdir, strip_wall=("report.json", "sim.json")):
    files = {}
    for f in sorted(outdir.iterdir()):
        data = f.read_bytes()
        if f.name in strip_wall:
            d = json.loads(data)
            d.pop("wall_time_s", None)
            data = json.dumps(d, sort_keys=True).encode()
        files[f.name] = data
    return files


def test_criterion_10_byte_identical_reruns(tmp_path, g10):
    apath = tmp_path / "g.alist"
    save_alist(g10, apath)
    runs = {}
    for tag, threads in [("a", "1"), ("b", "2")]:
        base = tmp_path / tag
        _run_cli(["construct", "--n", "48", "--m", "48", "--dv", "3",
                  "--girth", "8", "--seed", "2", "--threads", threads,
                  "--out", str(base / "construct")])
        _run_cli(["verify", "--in", str(apath), "--max-weight", "2",
                  "--max-iters", "5", "--threads", threads,
                  "--out", str(base / "verify")])
        _run_cli(["decode", "--in", str(apath), "--errors", "1,8,40",
                  "--max-iters", "6", "--threads", threads,
                  "--out", str(base / "decode")])
        _run_cli(["simulate", "--in", str(apath), "--p", "0.02,0.05",
                  "--frames", "3000", "--max-iters", "5", "--seed", "3",
                  "--threads", threads, "--out", str(base / "simulate")])
        runs[tag] = {sub: _snapshot(base / sub)
                     for sub in ("construct", "verify", "decode", "simulate")}
    mism = [(sub, name)
            for sub in runs["a"]
            for name in runs["a"][sub]
            if runs["a"][sub][name] != runs["b"][sub].get(name)]
    counts = sum(len(v) for v in runs["a"].values())
    verdict(10, not mism,
            f"{counts} output files from construct/verify/decode/simulate "
            f"byte-identical across reruns and thread counts "
            f"(wall-time stripped); mismatches={mism}")
