"""Figure rendering for verdict reports.

Two figures per problem, written next to the delimited report output:
a bar chart of torsion-free fibers against the smooth benchmark D-1,
and the truncated Hilbert-Samuel growth against binom(n+d, d).
"""

from __future__ import annotations

import os
from math import comb

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _fiber_figure(report, path):
    verdicts = report["verdicts"]
    labels = []
    fibers = []
    expected = []
    colors = []
    for v in verdicts:
        labels.append(f"({', '.join(v['point'])})\nn={v['n']}")
        fibers.append(v["fiber_dim_torsion_free"])
        expected.append(v["expected_rank_D"] - 1)
        colors.append("tab:green" if v["jacobian_smooth"] else "tab:red")
    fig, ax = plt.subplots(figsize=(max(4.0, 1.2 * len(labels)), 3.2))
    xs = range(len(labels))
    ax.bar(xs, fibers, color=colors, alpha=0.8, label="torsion-free fiber")
    ax.plot(xs, expected, "k_", markersize=18, label="smooth benchmark D-1")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("fiber dimension")
    ax.set_title(f"{report['problem']['name']}: torsion-free fibers vs D-1")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _growth_figure(report, path):
    prob = report["problem"]
    d = prob["dimension"]
    per_point = {}
    for v in report["verdicts"]:
        key = "(" + ", ".join(v["point"]) + ")"
        per_point.setdefault(key, []).append((v["n"], v["fiber_dim_doubled"]))
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    orders = sorted(report["orders"])
    ax.plot(
        orders,
        [comb(n + d, d) for n in orders],
        "k--",
        label=f"smooth binom(n+{d},{d})",
    )
    for key, pairs in per_point.items():
        pairs.sort()
        ax.plot([p[0] for p in pairs], [p[1] for p in pairs], "o-", label=key)
    ax.set_xlabel("order n")
    ax.set_ylabel("dim O/m^(n+1)")
    ax.set_xticks(orders)
    ax.set_title(f"{prob['name']}: infinitesimal neighborhood growth")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report_figures(report, outdir):
    """Write the per-problem figures into `outdir`; returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    name = report["problem"]["name"]
    paths = []
    if report["verdicts"]:
        fiber_path = os.path.join(outdir, f"{name}_fibers.png")
        _fiber_figure(report, fiber_path)
        paths.append(fiber_path)
        growth_path = os.path.join(outdir, f"{name}_growth.png")
        _growth_figure(report, growth_path)
        paths.append(growth_path)
    return paths
