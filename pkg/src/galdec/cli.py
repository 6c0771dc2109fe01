"""Command-line front end.

Subcommands: construct, girth, verify, decode, simulate.  Every run
echoes its resolved configuration as JSON (for exact reproduction),
writes its outputs under ``--out`` together with a manifest, and renders
figures next to the delimited reports on the verify and simulate paths.

Exit codes: 0 success / claim holds, 1 usage error, 2 infeasible spec or
I/O failure, 3 sweep found failures (claim regression gate).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .alist import AlistError, load_alist, save_alist
from .analysis import (BudgetExceededError, SweepSpec, exhaustive_verify,
                       find_min_uncorrectable)
from .construct import ConstructionSpec, InfeasibleSpecError, peg_construct
from .decoder import (DecoderConfig, decode_with_trace, pattern_from_support,
                      trace_records)
from .graph import girth
from .simulate import SimSpec, simulate

MANIFEST_SCHEMA = "galdec.run-manifest/v1"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(",") if t.strip())


def _parse_float_range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    return float(lo), float(hi)


def build_parser() -> _Parser:
    p = _Parser(prog="galdec", description=__doc__)
    p.add_argument("--version", action="version", version=f"galdec {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file overlaying flag defaults")
    common.add_argument("--out", default="galdec_run",
                        help="run directory for all file outputs")
    common.add_argument("--threads", type=int, default=os.cpu_count(),
                        help="worker processes (results never depend on this)")

    c = sub.add_parser("construct", parents=[common],
                       help="grow a column-weight-dv graph with a target girth")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--dv", type=int, default=3)
    c.add_argument("--girth", type=int, default=10, dest="target_girth")
    c.add_argument("--seed", type=int, default=0)

    gi = sub.add_parser("girth", parents=[common], help="print a graph's girth")
    gi.add_argument("--in", dest="infile", required=True)

    v = sub.add_parser("verify", parents=[common],
                       help="sweep error patterns / search minimal failures")
    v.add_argument("--in", dest="infile", required=True)
    v.add_argument("--max-weight", type=int)
    v.add_argument("--weights", type=_parse_range, metavar="LO:HI")
    v.add_argument("--max-iters", type=int, required=True)
    v.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    v.add_argument("--samples", type=int, default=0)
    v.add_argument("--sample-seed", type=int, default=0)
    v.add_argument("--budget", type=int, default=10 ** 8,
                   help="refuse exhaustive sweeps larger than this")
    v.add_argument("--find-min", type=int, metavar="W0",
                   help="search ascending weights from W0 for a failure instead")
    v.add_argument("--search-budget", type=int, default=10 ** 7)
    v.add_argument("--no-figure", action="store_true")

    d = sub.add_parser("decode", parents=[common],
                       help="decode one error pattern with a full trace")
    d.add_argument("--in", dest="infile", required=True)
    d.add_argument("--errors", default="",
                   help="comma-separated flipped variable indices")
    d.add_argument("--max-iters", type=int, required=True)

    s = sub.add_parser("simulate", parents=[common],
                       help="Monte Carlo FER/BER over the BSC")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--p", type=_parse_floats, required=True,
                   help="comma-separated crossover probabilities")
    s.add_argument("--frames", type=int, required=True)
    s.add_argument("--target-errors", type=int, default=100)
    s.add_argument("--no-target", action="store_true",
                   help="always run the full frame count")
    s.add_argument("--max-iters", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--slope-range", type=_parse_float_range, metavar="LO:HI")
    s.add_argument("--min-decode-weight", type=int, default=0)
    s.add_argument("--no-figure", action="store_true")
    return p


def _apply_config(parser: _Parser, argv: list[str]) -> argparse.Namespace:
    """--config JSON supplies defaults; explicit flags still win."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if known.config:
        try:
            with open(known.config) as fh:
                overlay = json.load(fh)
        except OSError as exc:
            print(f"galdec: cannot read config: {exc}", file=sys.stderr)
            raise SystemExit(2)
        if not isinstance(overlay, dict):
            print("galdec: config must be a JSON object", file=sys.stderr)
            raise SystemExit(1)
        for sp in parser._subparsers._group_actions[0].choices.values():  # type: ignore[union-attr]
            for action in sp._actions:
                if action.dest in overlay:
                    action.default = overlay[action.dest]
                    action.required = False
    return parser.parse_args(argv)


def _echo_config(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "config"}
    print(json.dumps({"galdec": __version__, "resolved_config": cfg}, default=str))
    return cfg


def _outdir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _write_manifest(args, cfg: dict, outputs: list[str]) -> None:
    # thread count and output placement never affect results; keeping them
    # out of the manifest keeps reruns byte-identical
    stable_cfg = {k: v for k, v in cfg.items() if k not in ("threads", "out")}
    manifest = {"schema": MANIFEST_SCHEMA, "command": args.command,
                "config": stable_cfg, "outputs": sorted(outputs)}
    with open(os.path.join(args.out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")


def _load(args):
    try:
        return load_alist(args.infile)
    except OSError as exc:
        print(f"galdec: cannot read {args.infile}: {exc}", file=sys.stderr)
        raise SystemExit(2)
    except AlistError as exc:
        print(f"galdec: {args.infile}: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _cmd_construct(args, cfg) -> int:
    try:
        spec = ConstructionSpec(n=args.n, m=args.m, dv=args.dv,
                                target_girth=args.target_girth, seed=args.seed)
        res = peg_construct(spec)
    except (InfeasibleSpecError, ValueError) as exc:
        print(f"galdec: infeasible construction: {exc}", file=sys.stderr)
        return 2
    out = _outdir(args)
    save_alist(res.graph, os.path.join(out, "code.alist"))
    sidecar = {
        "achieved_girth": (None if math.isinf(res.achieved_girth)
                           else res.achieved_girth),
        "seed": spec.seed,
        "spec": {"n": spec.n, "m": spec.m, "dv": spec.dv,
                 "target_girth": spec.target_girth, "seed": spec.seed},
    }
    with open(os.path.join(out, "code.json"), "w") as fh:
        json.dump(sidecar, fh, indent=2)
        fh.write("\n")
    _write_manifest(args, cfg, ["code.alist", "code.json"])
    print(f"achieved girth {sidecar['achieved_girth']}")
    return 0


def _cmd_girth(args, cfg) -> int:
    g = _load(args)
    val = girth(g)
    print("inf" if math.isinf(val) else int(val))
    return 0


def _cmd_verify(args, cfg) -> int:
    g = _load(args)
    out = _outdir(args)
    if args.find_min is not None:
        res = find_min_uncorrectable(g, max_iterations=args.max_iters,
                                     start_weight=args.find_min,
                                     budget=args.search_budget)
        payload = {
            "schema": "galdec.min-search/v1",
            "found": res.found is not None,
            "weight": res.weight,
            "support": list(res.found.support) if res.found else None,
            "shortest_cycle_in_support": (
                None if res.found is None or math.isinf(res.found.shortest_cycle_in_support)
                else res.found.shortest_cycle_in_support),
            "first_stuck_iteration": (res.found.first_stuck_iteration
                                      if res.found else None),
            "patterns_tested": res.patterns_tested,
            "budget": res.budget,
            "max_iterations": res.max_iterations,
        }
        with open(os.path.join(out, "search.json"), "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        _write_manifest(args, cfg, ["search.json"])
        print("found weight-{} failure {}".format(res.weight, payload["support"])
              if res.found else
              f"none found within budget ({res.patterns_tested} patterns)")
        return 0
    try:
        spec = SweepSpec(
            max_weight=args.max_weight,
            weight_range=tuple(args.weights) if args.weights else None,
            max_iterations=args.max_iters, mode=args.mode,
            sample_count=args.samples, sample_seed=args.sample_seed,
            enumeration_budget=args.budget)
        report = exhaustive_verify(g, spec, workers=args.threads)
    except (BudgetExceededError, ValueError) as exc:
        print(f"galdec: {exc}", file=sys.stderr)
        return 2
    outputs = ["report.json", "report.csv"]
    with open(os.path.join(out, "report.json"), "w") as fh:
        fh.write(report.to_json())
    with open(os.path.join(out, "report.csv"), "w") as fh:
        fh.write(report.to_csv())
    if not args.no_figure:
        from .figures import save_verify_figure
        save_verify_figure(report, os.path.join(out, "verify.png"))
        outputs.append("verify.png")
    _write_manifest(args, cfg, outputs)
    for r in report.rows:
        print(f"weight {r.weight}: tested {r.tested}, corrected {r.corrected}, "
              f"failed {r.failed}, max iterations {r.max_iterations_observed}")
    if report.total_failed:
        print(f"FAILURES: {report.total_failed}")
        return 3
    print("all patterns corrected")
    return 0


def _cmd_decode(args, cfg) -> int:
    g = _load(args)
    out = _outdir(args)
    try:
        support = [int(t) for t in args.errors.split(",") if t.strip()]
        pattern = pattern_from_support(g.n, support)
    except ValueError as exc:
        print(f"galdec: bad --errors: {exc}", file=sys.stderr)
        return 1
    outcome = decode_with_trace(g, pattern, DecoderConfig(args.max_iters))
    payload = {
        "schema": "galdec.decode-outcome/v1",
        "errors": support,
        "converged": outcome.converged,
        "iterations_used": outcome.iterations_used,
        "estimate_support": np.flatnonzero(outcome.estimate).tolist(),
    }
    with open(os.path.join(out, "outcome.json"), "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    with open(os.path.join(out, "trace.jsonl"), "w") as fh:
        for rec in trace_records(g, outcome):
            fh.write(json.dumps(rec) + "\n")
    _write_manifest(args, cfg, ["outcome.json", "trace.jsonl"])
    print(f"converged={outcome.converged} iterations={outcome.iterations_used}")
    return 0


def _cmd_simulate(args, cfg) -> int:
    g = _load(args)
    out = _outdir(args)
    try:
        spec = SimSpec(
            crossover_probabilities=args.p,
            frames_per_point=args.frames,
            max_iterations=args.max_iters,
            master_seed=args.seed,
            target_frame_errors=None if args.no_target else args.target_errors,
            slope_p_range=tuple(args.slope_range) if args.slope_range else None,
            min_decode_weight=args.min_decode_weight)
    except ValueError as exc:
        print(f"galdec: {exc}", file=sys.stderr)
        return 1
    result = simulate(g, spec, workers=args.threads)
    outputs = ["sim.csv", "sim.json"]
    with open(os.path.join(out, "sim.csv"), "w") as fh:
        fh.write(result.to_csv())
    with open(os.path.join(out, "sim.json"), "w") as fh:
        fh.write(result.to_json())
    if not args.no_figure:
        from .figures import save_sim_figure
        save_sim_figure(result, os.path.join(out, "fer.png"))
        outputs.append("fer.png")
    _write_manifest(args, cfg, outputs)
    for pt in result.points:
        print(f"p={pt.p:g}: frames={pt.frames} errors={pt.frame_errors} "
              f"FER={pt.fer:.3e}")
    if result.slope is not None:
        print(f"fitted log-log slope: {result.slope:.3f} "
              f"({result.slope_points} points)")
    return 0


_COMMANDS = {
    "construct": _cmd_construct,
    "girth": _cmd_girth,
    "verify": _cmd_verify,
    "decode": _cmd_decode,
    "simulate": _cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    args = _apply_config(parser, argv)
    cfg = _echo_config(args)
    return _COMMANDS[args.command](args, cfg)


if __name__ == "__main__":
    raise SystemExit(main())
