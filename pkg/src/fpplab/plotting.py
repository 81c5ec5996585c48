"""Figure rendering for report output. All functions write PNG files."""
from __future__ import annotations

import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import theory

_DPI = 130


def ecdf_vs_limit(t_values, s: float, k: int, path: str,
                  title: str = "") -> str:
    t = np.sort(np.asarray(t_values, dtype=float))
    if t.size == 0:
        raise ValueError("no samples to plot")
    ec = np.arange(1, t.size + 1) / t.size
    grid = np.linspace(min(t[0], -6.0), max(t[-1], 4.0), 400)
    lim = 1.0 - np.array([theory.gumbel_sf(s, k, g) for g in grid])
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.step(t, ec, where="post", lw=1.0, label="empirical")
    ax.plot(grid, lim, lw=1.4, ls="--", label="limit")
    ax.set_xlabel("standardized weight")
    ax.set_ylabel("CDF")
    if title:
        ax.set_title(title, fontsize=10)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def hop_bars(histogram, path: str, reference=None, title: str = "") -> str:
    ks = sorted(histogram)
    vals = [float(histogram[k]) for k in ks]
    fig, ax = plt.subplots(figsize=(4.6, 3.4))
    ax.bar([str(k) for k in ks], vals, width=0.6, label="observed")
    if reference:
        xs = [str(k) for k in ks]
        ys = [float(reference.get(k, 0.0)) for k in ks]
        ax.plot(xs, ys, "o", color="black", ms=5, label="predicted")
        ax.legend(frameon=False, fontsize=8)
    ax.set_xlabel("hopcount")
    ax.set_ylabel("frequency")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def count_pmf(counts, mean: float, path: str, title: str = "") -> str:
    c = np.asarray(counts, dtype=int)
    kmax = int(c.max()) if c.size else 0
    support = np.arange(0, max(kmax, int(mean * 3) + 2) + 1)
    emp = np.bincount(c, minlength=support.size)[:support.size] / c.size
    pmf = np.exp(-mean) * np.array(
        [mean ** k / math.factorial(k) for k in support])
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.bar(support - 0.18, emp, width=0.36, label="observed")
    ax.bar(support + 0.18, pmf, width=0.36, label="Poisson")
    ax.set_xlabel("count")
    ax.set_ylabel("probability")
    if title:
        ax.set_title(title, fontsize=10)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def report_bars(reports, path: str, title: str = "") -> str:
    """Per-test statistic against threshold, one horizontal bar each.

    Bars show statistic minus threshold so that anything extending to
    the right of zero is a failure; shifted tests with negative-valued
    conventions read the same way.
    """
    names = [r.test_name for r in reports]
    gaps = [r.statistic - r.threshold for r in reports]
    colors = ["#2a7e43" if r.passed else "#b0332a" for r in reports]
    fig, ax = plt.subplots(figsize=(6.4, 0.42 * len(names) + 1.2))
    ax.barh(range(len(names)), gaps, color=colors)
    ax.axvline(0.0, color="black", lw=0.8)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("statistic minus threshold")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def sweep_modal_hops(s_values, modal_hops, path: str,
                     title: str = "") -> str:
    fig, ax = plt.subplots(figsize=(4.8, 3.4))
    ax.plot(list(s_values), list(modal_hops), "o-", lw=1.2)
    svals = np.linspace(min(s_values), max(s_values), 300)
    ax.plot(svals, [theory.limit_hops(float(s)) for s in svals],
            ls=":", color="gray", label="predicted")
    ax.set_xlabel("s")
    ax.set_ylabel("modal hopcount")
    ax.legend(frameon=False, fontsize=8)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
