"""Figure rendering for the CLI report paths (matplotlib, Agg backend).

Figures are written straight to files next to the delimited output; nothing
here is interactive.
"""

from __future__ import annotations

from typing import Optional, Sequence


def _new_axes(title: str, xlabel: str, ylabel: str):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path: str) -> None:
    fig.savefig(path, dpi=130, bbox_inches="tight")
    import matplotlib.pyplot as plt

    plt.close(fig)


def line_plot(
    path: str,
    xs: Sequence[float],
    ys: Sequence[float],
    *,
    title: str,
    xlabel: str,
    ylabel: str,
    logx: bool = False,
    logy: bool = False,
) -> None:
    fig, ax = _new_axes(title, xlabel, ylabel)
    ax.plot(xs, ys, lw=1.2)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    _save(fig, path)


def scatter_plot(
    path: str,
    xs: Sequence[float],
    ys: Sequence[float],
    *,
    title: str,
    xlabel: str,
    ylabel: str,
    logy: bool = False,
) -> None:
    fig, ax = _new_axes(title, xlabel, ylabel)
    ax.scatter(xs, ys, s=8)
    if logy:
        ax.set_yscale("log")
    _save(fig, path)


def heatmap(
    path: str,
    matrix,
    *,
    title: str,
    xlabel: str,
    ylabel: str,
    colorbar_label: Optional[str] = None,
) -> None:
    fig, ax = _new_axes(title, xlabel, ylabel)
    im = ax.imshow(matrix, origin="lower", aspect="auto", interpolation="nearest")
    fig.colorbar(im, ax=ax, label=colorbar_label or "")
    _save(fig, path)


def running_sign_mean(path: str, signs, *, title: str) -> None:
    import numpy as np

    arr = np.asarray(signs, dtype=np.float64)
    cum = np.cumsum(arr) / np.arange(1, len(arr) + 1)
    step = max(1, len(arr) // 4000)
    xs = np.arange(1, len(arr) + 1)[::step]
    line_plot(
        path,
        xs,
        cum[::step],
        title=title,
        xlabel="n",
        ylabel="running mean of signs",
    )
