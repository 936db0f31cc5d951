"""
Figures written next to the CLI reports.

Everything renders through the non-interactive Agg backend straight to a file.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bands import BlochMap, solid_angles  # noqa: E402
from .links import unit_phase  # noqa: E402


def _style():
    plt.rcParams.update(
        {
            "font.size": 10,
            "axes.titlesize": 11,
            "axes.labelsize": 10,
            "figure.dpi": 100,
            "savefig.bbox": "tight",
        }
    )


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps repeated renders identical
    meta = {"Software": None} if path.suffix.lower() == ".png" else {}
    fig.savefig(path, metadata=meta)
    plt.close(fig)
    return path


def plot_bloch_map(m: BlochMap, path, title: str | None = None):
    """Solid-angle density and the z component of the map over the Brillouin torus."""
    _style()
    omega = solid_angles(m).sum(axis=0) / (4 * math.pi)
    extent = (0, 2 * math.pi, 0, 2 * math.pi)
    fig, axes = plt.subplots(1, 2, figsize=(9.5, 4))
    fig.subplots_adjust(wspace=0.45)
    lim = float(np.max(np.abs(omega))) or 1.0
    im0 = axes[0].imshow(
        omega.T, origin="lower", extent=extent, cmap="RdBu_r", vmin=-lim, vmax=lim
    )
    axes[0].set_title("degree density per plaquette")
    fig.colorbar(im0, ax=axes[0], shrink=0.85)
    im1 = axes[1].imshow(
        m.n[..., 2].T, origin="lower", extent=extent, cmap="viridis", vmin=-1, vmax=1
    )
    axes[1].set_title(r"$\hat d_z$")
    fig.colorbar(im1, ax=axes[1], shrink=0.85)
    for ax in axes:
        ax.set_xlabel(r"$k_x$")
        ax.set_ylabel(r"$k_y$")
    if title:
        fig.suptitle(title)
    return _save(fig, path)


def plot_matrices(mats: dict[str, np.ndarray], path, title: str | None = None):
    """Modulus and phase of each named complex matrix, one column per matrix."""
    _style()
    names = list(mats)
    fig, axes = plt.subplots(2, len(names), figsize=(3.2 * len(names), 6), squeeze=False)
    for col, name in enumerate(names):
        M = np.asarray(mats[name])
        ax = axes[0, col]
        ax.imshow(np.abs(M), cmap="Greys", vmin=0)
        ax.set_title(f"|{name}|")
        ax = axes[1, col]
        phase = np.where(np.abs(M) > 1e-9, np.angle(M), np.nan)
        ax.imshow(phase, cmap="twilight", vmin=-math.pi, vmax=math.pi)
        ax.set_title(f"arg {name}")
        for ax in axes[:, col]:
            ax.set_xticks([])
            ax.set_yticks([])
    if title:
        fig.suptitle(title)
    return _save(fig, path)


def plot_phase_wheel(total: int, path, K_max: int = 12, K: float | None = None,
                     title: str | None = None):
    """Wilson-loop phases ``exp(2 pi i #L / K)`` on the unit circle for K = 1..K_max."""
    _style()
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    t = np.linspace(0, 2 * math.pi, 400)
    ax.plot(np.cos(t), np.sin(t), color="0.7", lw=1)
    for level in range(1, K_max + 1):
        z = unit_phase(math.fmod(total, level) / level)
        ax.plot(z.real, z.imag, "o", color="tab:blue", ms=4)
        ax.annotate(str(level), (z.real, z.imag), textcoords="offset points",
                    xytext=(4, 4), fontsize=7)
    if K is not None:
        z = unit_phase(math.fmod(total, K) / K)
        ax.plot(z.real, z.imag, "s", color="tab:red", ms=8, mfc="none", label=f"K={K:g}")
        ax.legend(loc="lower right")
    ax.set_aspect("equal")
    ax.set_xlim(-1.3, 1.3)
    ax.set_ylim(-1.3, 1.3)
    ax.set_title(title or f"#L = {total}")
    return _save(fig, path)
