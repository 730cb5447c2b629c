"""Comparison figures for original vs synthetic samples (written to files)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .data_core import DataMatrix  # noqa: E402
from .evaluate import EvalReport  # noqa: E402

golden_mean = (np.sqrt(5) - 1.0) / 2.0

params = {
    "font.size": 9,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.markersize": 2,
    "savefig.dpi": 150,
    # fixed metadata keeps repeated runs byte-stable
    "svg.hashsalt": "localresampler",
}

ORIGINAL_COLOR = "#2b8cbe"
SYNTHETIC_COLOR = "#e6550d"


def scatter_compare(original: DataMatrix, synthetic: DataMatrix, path, title=None) -> Path:
    """Side-by-side scatter of the first two or three columns.

    Three or more columns are drawn as 3-D scatters of the first three.
    """
    path = Path(path)
    three_d = original.p >= 3
    names = original.names[:3 if three_d else 2]
    if original.p < 2:
        return _hist_compare(original, synthetic, path, title)
    with plt.rc_context(params):
        fig = plt.figure(figsize=(8, 8 * golden_mean))
        kw = {"projection": "3d"} if three_d else {}
        axes = [fig.add_subplot(1, 2, i + 1, **kw) for i in range(2)]
        for ax, data, label, color in ((axes[0], original, "original", ORIGINAL_COLOR),
                                       (axes[1], synthetic, "synthetic", SYNTHETIC_COLOR)):
            cols = [data.column(n) for n in names]
            ax.scatter(*cols, s=2, c=color, alpha=0.5, linewidths=0)
            ax.set_title(f"{label} (n={data.n})")
            ax.set_xlabel(names[0])
            ax.set_ylabel(names[1])
            if three_d:
                ax.set_zlabel(names[2])
        _share_limits(axes, original, synthetic, names)
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
    return path


def _share_limits(axes, a, b, names):
    setters = ("set_xlim", "set_ylim", "set_zlim")
    for j, name in enumerate(names):
        both = np.concatenate([a.column(name), b.column(name)])
        lo, hi = both.min(), both.max()
        pad = 0.03 * (hi - lo) if hi > lo else 0.5
        for ax in axes:
            getattr(ax, setters[j])(lo - pad, hi + pad)


def _hist_compare(original, synthetic, path, title):
    with plt.rc_context(params):
        fig, ax = plt.subplots(figsize=(5, 5 * golden_mean))
        col = original.names[0]
        bins = np.histogram_bin_edges(np.concatenate([original.column(col),
                                                      synthetic.column(col)]), bins=40)
        ax.hist(original.column(col), bins=bins, alpha=0.5, density=True,
                color=ORIGINAL_COLOR, label="original")
        ax.hist(synthetic.column(col), bins=bins, alpha=0.5, density=True,
                color=SYNTHETIC_COLOR, label="synthetic")
        ax.set_xlabel(col)
        ax.legend()
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
    return Path(path)


def ks_bars(report: EvalReport, path) -> Path:
    path = Path(path)
    with plt.rc_context(params):
        fig, ax = plt.subplots(figsize=(5, 5 * golden_mean))
        x = np.arange(len(report.names))
        ax.bar(x, report.ks, color=SYNTHETIC_COLOR)
        ax.axhline(report.average_ks, color="k", lw=0.8, ls="--",
                   label=f"average {report.average_ks:.3f}")
        ax.set_xticks(x)
        ax.set_xticklabels(report.names, rotation=30, ha="right")
        ax.set_ylabel("KS distance")
        ax.set_ylim(0, max(0.05, float(report.ks.max()) * 1.2))
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
    return path


def write_figures(original: DataMatrix, synthetic: DataMatrix, report: EvalReport,
                  directory, stem: str) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return [
        scatter_compare(original, synthetic, directory / f"{stem}_scatter.png", title=stem),
        ks_bars(report, directory / f"{stem}_ks.png"),
    ]
