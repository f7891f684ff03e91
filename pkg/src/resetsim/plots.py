"""Static SVG figure output for the CLI reports.

Every figure is a pure function of its input data: the Agg backend is
forced, the SVG hash salt is pinned, and the date metadata is stripped,
so regenerating a plot from the same CSV yields identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "resetsim"

_MARKERS = "osD^vP*"


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def collapse_overlay_svg(rescaled, sizes, fit, ylabel: str, path) -> None:
    """Rescaled per-size curves overlaid on common axes."""
    fig, ax = plt.subplots(figsize=(5, 3.6), constrained_layout=True)
    for (x, y, e), L, mk in zip(rescaled, sizes, _MARKERS):
        ax.errorbar(x, y, yerr=e, marker=mk, ms=4, lw=1, capsize=2, label=f"L = {L}")
    ax.set_xlabel(r"$L^{1/\nu}\,(p - p_c)$")
    ax.set_ylabel(ylabel)
    ax.set_title(
        rf"$p_c = {fit.p_c:.4f},\ \nu = {fit.nu:.3f}$ (quality {fit.quality:.3g})"
    )
    ax.legend(fontsize=8)
    _save(fig, path)


def derivative_svg(curves, ylabel: str, path) -> None:
    """Second-difference curves per system size.

    curves: {L: [(p, d2), ...]}.
    """
    fig, ax = plt.subplots(figsize=(5, 3.6), constrained_layout=True)
    for L, mk in zip(sorted(curves), _MARKERS):
        pts = curves[L]
        ax.plot([p for p, _ in pts], [v for _, v in pts], marker=mk, ms=4, lw=1,
                label=f"L = {L}")
    ax.axhline(0.0, color="0.7", lw=0.8, zorder=0)
    ax.set_xlabel("p")
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)
    _save(fig, path)


def predict_overlay_svg(p, predicted, data, ylabel: str, path) -> None:
    """Closed-form prediction curve with optional measured points.

    data: list of (p, value, err) triples or None.
    """
    fig, ax = plt.subplots(figsize=(5, 3.6), constrained_layout=True)
    ax.plot(p, predicted, lw=1.5, label="large-d prediction")
    if data:
        ax.errorbar(
            [d[0] for d in data], [d[1] for d in data], yerr=[d[2] for d in data],
            fmt="o", ms=4, capsize=2, label="sweep data",
        )
    ax.set_xlabel("p")
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)
    _save(fig, path)
