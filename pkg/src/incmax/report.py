"""Figure rendering for the command-line report paths.

Every plotting command writes data first and figures second; the figures
are a convenience view of the same rows, never the source of truth.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be fixed first)

from .continuous import PiecewiseLinearValue


def plot_curve(curve: PiecewiseLinearValue, path: str,
               sizes: Optional[Sequence] = None, title: str = "") -> None:
    """Value curve with optional block markers, log-scaled when wide."""
    bps = [(float(c), float(v)) for c, v in curve.breakpoints]
    xs = [0.0] + [c for c, _ in bps]
    ys = [0.0] + [v for _, v in bps]
    last_c, last_v = bps[-1]
    extend = float(curve.extend_slope)
    xs.append(last_c * 1.5)
    ys.append(last_v + extend * last_c * 0.5)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(xs, ys, lw=1.5, color="tab:blue", label="value")
    if sizes:
        spent = []
        run = 0.0
        for c in sizes:
            run += float(c)
            spent.append(run)
        vals = [float(curve.value_at(min(s, xs[-1]))) for s in spent]
        ax.plot(spent, vals, "o", color="tab:red", ms=5, label="prefix budgets")
    if last_c > 100:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel("size")
    ax.set_ylabel("value")
    if title:
        ax.set_title(title)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_trace(rows: Sequence[Sequence], path: str, title: str = "") -> None:
    """Block index against size and density from a scaling-run trace."""
    idx = [int(r[0]) for r in rows]
    sizes = [float(r[1]) for r in rows]
    dens = [float(r[2]) for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.semilogy(idx, sizes, "o-", color="tab:blue")
    ax1.set_xlabel("block")
    ax1.set_ylabel("size")
    ax2.plot(idx, dens, "s-", color="tab:orange")
    ax2.set_xlabel("block")
    ax2.set_ylabel("density")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_expectation(rows: Sequence[Sequence], path: str,
                     reference: float = 0.569) -> None:
    """Guaranteed expected fraction per budget with the headline reference."""
    xs = [int(r[0]) for r in rows]
    ys = [float(r[1]) for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(xs, ys, lw=1.2, color="tab:blue")
    ax.axhline(reference, color="tab:red", ls="--", lw=1, label=f"{reference}")
    ax.set_xlabel("budget")
    ax.set_ylabel("guaranteed fraction")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_envelope_grid(rows: Sequence[Sequence], path: str) -> None:
    """I(k, delta) minus g per k, one polyline per k over delta."""
    by_k = {}
    g_ref = None
    for k, delta, value, g in rows:
        by_k.setdefault(int(k), []).append((float(delta), float(value)))
        g_ref = float(g)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for k, pts in sorted(by_k.items()):
        pts.sort()
        ax.plot([d for d, _ in pts], [v - g_ref for _, v in pts],
                lw=1, label=f"k={k}")
    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_xlabel("delta")
    ax.set_ylabel("envelope minus guarantee")
    ax.legend(loc="best", ncol=2, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
