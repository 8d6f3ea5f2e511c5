"""Static figures for sweep tables (matplotlib, Agg backend)."""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_sweep(coords: np.ndarray, values: np.ndarray, path: str | Path, title: str, label: str) -> Path:
    """Heatmap over the unit square for g = 2, a line plot for g = 1."""
    coords = np.asarray(coords)
    values = np.asarray(values)
    g = coords.shape[1]
    if g not in (1, 2):
        raise ValueError("figures are drawn only for genus 1 or 2")
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 4.2), dpi=100)
    if g == 1:
        ax.plot(coords[:, 0], values, marker=".")
        ax.set_xlabel("coord_1")
        ax.set_ylabel(label)
    else:
        n = int(round(np.sqrt(len(values))))
        img = values.reshape(n, n).T  # rows follow coord_2
        mesh = ax.imshow(img, origin="lower", extent=(0, 1, 0, 1), cmap="viridis", aspect="equal")
        fig.colorbar(mesh, ax=ax, label=label)
        ax.set_xlabel("coord_1")
        ax.set_ylabel("coord_2")
    ax.set_title(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path
