"""SVG figures: spectral step curves, MDS scatter, confidence bands, harmonic overlays."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path):
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)


def plot_curve(curve, path, max_rho=None, skip_first=True):
    """Step plot of every eigenvalue as a function of rho."""
    b = curve.breakpoints
    if max_rho is None:
        max_rho = b[-1] * 1.25 if b.size else 1.0
    edges = np.concatenate([[0.0], b, [max_rho]])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    start = 1 if skip_first and curve.K > 1 else 0
    for k in range(curve.K - 1, start - 1, -1):
        y = np.append(curve.values[:, k], curve.values[-1, k])
        ax.step(edges, y, where="post", label=f"$\\lambda_{{{k + 1}}}$")
    ax.set_xlabel(r"$\rho$")
    ax.set_ylabel("spectrum")
    if curve.K <= 8:
        ax.legend(loc="upper left", fontsize="small")
    _save(fig, path)


def plot_mds(coords, path, groups=None, names=None):
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    if groups is None:
        ax.scatter(coords[:, 0], coords[:, 1] if coords.shape[1] > 1 else np.zeros(len(coords)))
    else:
        for g in np.unique(groups):
            sel = groups == g
            y = coords[sel, 1] if coords.shape[1] > 1 else np.zeros(sel.sum())
            ax.scatter(coords[sel, 0], y, label=str(g) if names is None else names[g])
        ax.legend(fontsize="small")
    ax.set_xlabel("MDS 1")
    ax.set_ylabel("MDS 2")
    _save(fig, path)


def plot_bands(bands_list, path, labels=None):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for i, bd in enumerate(bands_list):
        lab = labels[i] if labels else None
        line, = ax.plot(bd.rho, bd.mean, label=lab)
        ax.fill_between(bd.rho, bd.lower, bd.upper, color=line.get_color(), alpha=0.3, step=None)
    ax.set_xlabel(r"$\rho$")
    ax.set_ylabel(f"$\\lambda_{{{bands_list[0].index}}}$")
    if labels:
        ax.legend(fontsize="small")
    _save(fig, path)


def plot_harmonic(coords, report, path):
    """Scatter of node coordinates with the sign-change region highlighted."""
    coords = np.asarray(coords, dtype=float)
    if coords.shape[1] == 1:
        coords = np.column_stack([coords[:, 0], np.zeros(len(coords))])
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    v = report.fiedler_vector
    ax.scatter(coords[:, 0], coords[:, 1], c=np.sign(v), cmap="coolwarm", s=12)
    r = report.sign_region
    ax.scatter(coords[r, 0], coords[r, 1], facecolors="none", edgecolors="blue", s=60)
    ax.set_aspect("equal")
    _save(fig, path)
