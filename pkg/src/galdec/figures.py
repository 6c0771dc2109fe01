"""Figure rendering for sweep reports and channel simulations.

Figures are written straight to files next to the delimited output; no
interactive backend is ever touched.  PNG metadata is pinned so reruns
are byte-identical.
"""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_PNG_META = {"Software": "galdec"}


def save_verify_figure(report, path) -> None:
    """Per-weight tested/corrected/failed counts as a log-scale bar chart."""
    weights = [r.weight for r in report.rows]
    tested = [r.tested for r in report.rows]
    failed = [r.failed for r in report.rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar([w - 0.18 for w in weights], tested, width=0.36, label="tested",
           color="#4878a8")
    ax.bar([w + 0.18 for w in weights], [max(f, 0.1) for f in failed], width=0.36,
           label="failed", color="#c44e52")
    ax.set_yscale("log")
    ax.set_xticks(weights)
    ax.set_xlabel("error pattern weight")
    ax.set_ylabel("patterns")
    gtxt = "inf" if report.graph_girth is None or math.isinf(report.graph_girth) \
        else str(report.graph_girth)
    ax.set_title(f"{report.mode} sweep: n={report.graph_n}, m={report.graph_m}, "
                 f"girth {gtxt}, M={report.max_iterations} "
                 f"({report.total_failed} failures)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)


def save_sim_figure(result, path) -> None:
    """FER/BER against crossover probability on log-log axes."""
    pts = result.points
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    ps = [pt.p for pt in pts]
    fers = [pt.fer for pt in pts]
    bers = [pt.ber for pt in pts]
    cis = [pt.ci_halfwidth() for pt in pts]
    shown = [(p, f, c) for p, f, c in zip(ps, fers, cis) if f > 0]
    if shown:
        xs, ys, es = zip(*shown)
        ax.errorbar(xs, ys, yerr=es, fmt="o-", label="FER", color="#4878a8")
    shown_b = [(p, b) for p, b in zip(ps, bers) if b > 0]
    if shown_b:
        xs, ys = zip(*shown_b)
        ax.plot(xs, ys, "s--", label="BER", color="#6acc64")
    if result.slope is not None and shown:
        xs, ys = zip(*[(p, f) for p, f, _ in shown])
        anchor = ys[-1]
        ref = [anchor * (p / xs[-1]) ** result.slope for p in xs]
        ax.plot(xs, ref, ":", color="#555555",
                label=f"slope {result.slope:.2f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("crossover probability p")
    ax.set_ylabel("error rate")
    ax.set_title(f"BSC performance: n={result.graph_n}, "
                 f"M={result.spec.max_iterations}, "
                 f"seed {result.spec.master_seed}")
    ax.grid(True, which="both", alpha=0.3)
    if shown or shown_b:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)
