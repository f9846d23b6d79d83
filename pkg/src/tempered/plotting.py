"""Figures written next to the CLI's CSV reports.

Uses the object-oriented matplotlib API (no pyplot state, no GUI backend).
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from . import schwartz as sw

_SAVE_KW = {"dpi": 120, "metadata": {"Software": None}}


def _window(f: sw.SchwartzFn, margin: float = 1.25) -> np.ndarray:
    half = margin * sw.seminorm_radius(f.degree, sw.SeminormIndex(0, 0)) + 0.5
    return np.linspace(-half, half, 801)


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, **_SAVE_KW)
    return path


def seminorm_heatmap(table: np.ndarray, path) -> Path:
    """``table[k, n] = p_{k,n}(f)`` rendered as log10 heat map."""
    fig = Figure(figsize=(5.0, 4.0))
    ax = fig.add_subplot()
    with np.errstate(divide="ignore"):
        shown = np.log10(np.where(table > 0, table, np.nan))
    im = ax.imshow(shown, origin="lower", cmap="viridis", aspect="auto")
    ax.set_xlabel("derivative order n")
    ax.set_ylabel("power k")
    ax.set_xticks(range(table.shape[1]))
    ax.set_yticks(range(table.shape[0]))
    fig.colorbar(im, ax=ax, label=r"$\log_{10} p_{k,n}(f)$")
    fig.tight_layout()
    return _save(fig, path)


def plancherel_figure(f: sw.SchwartzFn, path) -> Path:
    x = _window(f)
    fhat = sw.fourier(f)
    fig = Figure(figsize=(8.0, 3.2))
    ax1, ax2 = fig.subplots(1, 2, sharey=True)
    ax1.plot(x, np.abs(f(x)), lw=1.2)
    ax1.set_title(rf"$|f(x)|$, $\|f\|_2$ = {sw.l2_norm(f):.6g}")
    ax1.set_xlabel("x")
    ax2.plot(x, np.abs(fhat(x)), lw=1.2, color="C1")
    ax2.set_title(rf"$|\hat f(\xi)|$, $\|\hat f\|_2$ = {sw.l2_norm(fhat):.6g}")
    ax2.set_xlabel(r"$\xi$")
    fig.tight_layout()
    return _save(fig, path)


def multiplier_figure(f: sw.SchwartzFn, out: sw.SchwartzFn, label: str, path) -> Path:
    x = _window(out)
    fig = Figure(figsize=(6.0, 3.6))
    ax = fig.add_subplot()
    ax.plot(x, np.abs(f(x)), lw=1.2, label="|f|")
    ax.plot(x, np.abs(out(x)), lw=1.2, label=f"|{label} f|")
    ax.set_xlabel("x")
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def sobolev_figure(f: sw.SchwartzFn, s: float, path) -> Path:
    """Frequency-side weight ``<xi>^s |F f(xi)|`` whose L2 norm is the H^s norm."""
    xi = _window(f)
    fhat = np.abs(sw.fourier(f)(xi))
    weighted = (1.0 + xi * xi) ** (0.5 * s) * fhat
    fig = Figure(figsize=(6.0, 3.6))
    ax = fig.add_subplot()
    ax.plot(xi, fhat, lw=1.2, label=r"$|\hat f(\xi)|$")
    ax.plot(xi, weighted, lw=1.2, label=rf"$\langle\xi\rangle^{{{s:g}}} |\hat f(\xi)|$")
    ax.set_xlabel(r"$\xi$")
    ax.legend(frameon=False)
    if not math.isfinite(float(np.max(weighted))):
        ax.set_yscale("log")
    fig.tight_layout()
    return _save(fig, path)
