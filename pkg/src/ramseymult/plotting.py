"""Figures for region and search reports, rendered to files with the Agg backend."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .region import RegionPoint, upper_branches  # noqa: E402


def plot_region(s: int, t: int, points: Sequence[RegionPoint], path: str | Path,
                lower_bound: Fraction | None = None, grid: int = 400) -> Path:
    xs = [i / (grid - 1) for i in range(grid)]
    first, second = zip(*(upper_branches(s, t, x) for x in xs))
    fig, ax = plt.subplots(figsize=(5.5, 5))
    ax.plot(xs, [max(a, b) for a, b in zip(first, second)], color="black", lw=1.5, label="upper curve")
    ax.plot(xs, first, color="tab:blue", lw=0.8, ls=":", label="branch 1")
    ax.plot(xs, second, color="tab:orange", lw=0.8, ls=":", label="branch 2")
    if lower_bound is not None:
        c = float(lower_bound)
        ax.plot([0, c], [c, 0], color="tab:green", lw=1, ls="--", label=f"y = {lower_bound} - x")
    for p in points:
        ax.plot(float(p.x), float(p.y), "o", color="tab:red", ms=4)
        ax.annotate(p.source, (float(p.x), float(p.y)), fontsize=6, xytext=(3, 3), textcoords="offset points")
    ax.set_xlabel(f"clique density (t = {t})")
    ax.set_ylabel(f"independent set density (s = {s})")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_zoom(points: Sequence[RegionPoint], path: str | Path, s: int = 3, t: int = 4,
              lower_bound: Fraction | None = None) -> Path:
    """Construction points only, with axes fitted to them."""
    fig, ax = plt.subplots(figsize=(5.5, 5))
    xs = [float(p.x) for p in points]
    ys = [float(p.y) for p in points]
    hi_x = max(xs) * 1.1 if xs else 1
    hi_y = max(ys) * 1.1 if ys else 1
    grid = [hi_x * i / 200 for i in range(201)]
    ax.plot(grid, [max(upper_branches(s, t, x)) for x in grid], color="black", lw=1)
    if lower_bound is not None:
        c = float(lower_bound)
        ax.plot([0, c], [c, 0], color="tab:green", lw=1, ls="--")
    ax.plot(xs, ys, "o", color="tab:red", ms=4)
    for p, x, y in zip(points, xs, ys):
        ax.annotate(p.source, (x, y), fontsize=6, xytext=(3, 3), textcoords="offset points")
    ax.set_xlim(0, hi_x)
    ax.set_ylim(0, hi_y)
    ax.set_xlabel(f"clique density (t = {t})")
    ax.set_ylabel(f"independent set density (s = {s})")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_trace(trace: Sequence[tuple[int, int, bool, Fraction]], path: str | Path, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    its = [e[0] for e in trace]
    costs = [float(e[3]) for e in trace]
    best = []
    cur = float("inf")
    for c in costs:
        cur = min(cur, c)
        best.append(cur)
    ax.plot(its, costs, lw=0.6, color="tab:gray", label="current")
    ax.plot(its, best, lw=1.2, color="tab:red", label="best")
    ax.set_xlabel("iteration")
    ax.set_ylabel("cost")
    ax.set_yscale("symlog", linthresh=1e-4)
    if title:
        ax.set_title(title, fontsize=9)
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
