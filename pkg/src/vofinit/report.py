"""Figure rendering for the CLI report path.

Renders matplotlib figures next to the delimited output: mid-plane slices
of the fraction field along each axis and a histogram of cell fractions.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .grid import FractionField


def render_report(field: FractionField, out_dir) -> list[Path]:
    """Write slice and histogram figures for a fraction field.

    Returns the list of files written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    nx, ny, nz = field.grid.counts
    slices = [
        ("x", field.values[nx // 2, :, :], ("y", "z")),
        ("y", field.values[:, ny // 2, :], ("x", "z")),
        ("z", field.values[:, :, nz // 2], ("x", "y")),
    ]
    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    for ax, (axis, data, labels) in zip(axes, slices):
        im = ax.imshow(
            data.T, origin="lower", vmin=0.0, vmax=1.0, cmap="viridis", interpolation="nearest"
        )
        ax.set_title(f"mid-plane slice, normal {axis}")
        ax.set_xlabel(labels[0])
        ax.set_ylabel(labels[1])
        fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    slice_path = out_dir / "fraction_slices.png"
    fig.savefig(slice_path, dpi=150)
    plt.close(fig)
    written.append(slice_path)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(field.values.ravel(), bins=np.linspace(0.0, 1.0, 41), color="#32628d")
    ax.set_yscale("log")
    ax.set_xlabel("cell volume fraction")
    ax.set_ylabel("cell count")
    ax.set_title("fraction distribution")
    fig.tight_layout()
    hist_path = out_dir / "fraction_histogram.png"
    fig.savefig(hist_path, dpi=150)
    plt.close(fig)
    written.append(hist_path)
    return written
