"""Comparison report: delimited table plus rendered figures.

Used by the CLI ``compare`` path; writes comparison.csv alongside PNG
charts for per-key deltas, bundle sizes, and evaluation timings.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def write_report(
    outdir: str,
    rows: list[dict],
    sizes: dict[str, int],
    timings: dict[str, float],
    speedup_pct: float,
) -> list[str]:
    """Write comparison.csv and figures into ``outdir``; returns the paths.

    ``rows`` carry key, baseline, full, compressed, delta per result key.
    """
    os.makedirs(outdir, exist_ok=True)
    written = []

    csv_path = os.path.join(outdir, "comparison.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["key", "baseline", "full", "compressed", "delta"]
        )
        writer.writeheader()
        writer.writerows(rows)
    written.append(csv_path)

    keys = [r["key"] for r in rows]
    deltas = [r["delta"] for r in rows]

    # keep the per-key chart legible on large bundles
    max_bars = 40
    fig, ax = plt.subplots(figsize=(max(6, min(len(keys), max_bars) * 0.3), 4))
    ax.bar(keys[:max_bars], deltas[:max_bars], color="#1f6fb2")
    ax.axhline(0, color="black", linewidth=0.8)
    ax.set_ylabel("value − baseline")
    ax.set_title("Result deltas under the scenario" + (" (first 40 keys)" if len(keys) > max_bars else ""))
    ax.tick_params(axis="x", rotation=90, labelsize=7)
    fig.tight_layout()
    deltas_path = os.path.join(outdir, "deltas.png")
    fig.savefig(deltas_path, dpi=120)
    plt.close(fig)
    written.append(deltas_path)

    fig, ax = plt.subplots(figsize=(4, 4))
    ax.bar(["full", "compressed"], [sizes["full"], sizes["compressed"]], color=["#888", "#1f6fb2"])
    ax.set_ylabel("monomials")
    ax.set_title("Provenance size")
    fig.tight_layout()
    sizes_path = os.path.join(outdir, "sizes.png")
    fig.savefig(sizes_path, dpi=120)
    plt.close(fig)
    written.append(sizes_path)

    fig, ax = plt.subplots(figsize=(4, 4))
    ax.bar(
        ["full", "compressed"],
        [timings["full"] * 1e3, timings["compressed"] * 1e3],
        color=["#888", "#1f6fb2"],
    )
    ax.set_ylabel("median evaluation time (ms)")
    ax.set_title(f"Valuation time (speedup {speedup_pct:.1f}%)")
    fig.tight_layout()
    timings_path = os.path.join(outdir, "timings.png")
    fig.savefig(timings_path, dpi=120)
    plt.close(fig)
    written.append(timings_path)

    return written
