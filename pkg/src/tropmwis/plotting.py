"""Figures for bench reports. Headless backend, one PNG per call."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_bench(rows: list, path) -> None:
    """Circuit sizes against vertex count on a log scale, one series per family and mode."""
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    series = {}
    for r in rows:
        for col, tag in (("tw_size", "tw DP"), ("td_size", "td formula"), ("formula_size", "expander formula")):
            if r.get(col) not in (None, ""):
                series.setdefault(f"{r['family']} / {tag}", []).append((r["n"], r[col]))
        if r.get("size_limit") not in (None, ""):
            series.setdefault(f"{r['family']} / 3d2^(w/d)", []).append((r["n"], r["size_limit"]))
    markers = iter("osd^v<>ph*")
    for label, pts in sorted(series.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker=next(markers, "o"),
                lw=1.2, ms=4, label=label)
    if series:
        ax.set_yscale("log")
        ax.legend(fontsize=8, frameon=False)
    else:
        ax.text(0.5, 0.5, "no instances", ha="center", va="center", transform=ax.transAxes)
    ax.set_xlabel("vertices")
    ax.set_ylabel("gates")
    ax.spines[["top", "right"]].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
