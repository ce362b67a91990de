"""Figure construction: density overlays, rate fits, and error evolutions."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# density overlays for the front/waiting/discontinuity/smoothing studies;
# log-log rate plots for the long-time studies; error evolution for the sweep
FIGURE_STYLES = {
    "fig1": "density",
    "fig2": "density",
    "fig3": "density",
    "fig4": "density",
    "fig5": "density",
    "fig6": "rate",
    "fig7": "rate",
    "fig8": "rate",
    "fig9": "evolution",
}

_STYLE = {
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 8,
}


def _density_panel(ax, run):
    for snap in run.snapshots:
        ax.plot(snap["x"], snap["u"], lw=1.0, label=f"t = {snap['t']:g}")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title(run.label)
    ax.legend(loc="upper right")


def _rate_panel(ax, run):
    ts = np.array([row["t"] for row in run.metrics], dtype=float)
    errs = np.array(
        [row["l1_paper"] if row["l1_paper"] is not None else np.nan for row in run.metrics],
        dtype=float,
    )
    keep = np.isfinite(errs) & (ts > 0) & (errs > 0)
    ts, errs = ts[keep], errs[keep]
    if ts.size < 3:
        raise ValueError(f"{run.directory}: need >= 3 positive error points for a rate plot")
    window = ts >= ts.max() / 10.0
    slope, intercept = np.polyfit(np.log(ts[window]), np.log(errs[window]), 1)
    ax.loglog(ts, errs, "o-", ms=3, lw=1.0, label="measured")
    ax.loglog(
        ts[window],
        np.exp(intercept) * ts[window] ** slope,
        "--",
        lw=1.0,
        label=f"fit slope {slope:.3f}",
    )
    ax.set_xlabel("t")
    ax.set_ylabel("node-averaged L1 error")
    ax.set_title(run.label)
    ax.legend(loc="lower left")


def _evolution_panel(ax, runs):
    for run in runs:
        ts = [row["t"] for row in run.metrics if row["l1_quadrature"] is not None]
        errs = [row["l1_quadrature"] for row in run.metrics if row["l1_quadrature"] is not None]
        nu = run.manifest["config"].get("nu")
        ax.semilogy(ts, errs, "o-", ms=3, lw=1.0, label=f"nu = {nu:g}" if nu else run.label)
    ax.set_xlabel("t")
    ax.set_ylabel("L1 distance to the homogeneous limit")
    ax.legend(loc="upper right")


def render_figure(figure_id: str, runs, out_path):
    """Compose and save one PNG for ``figure_id`` from loaded run artifacts."""
    style = FIGURE_STYLES[figure_id]
    with plt.rc_context(_STYLE):
        if style == "evolution":
            fig, ax = plt.subplots(figsize=(5.0, 3.4))
            _evolution_panel(ax, runs)
        else:
            panel = _density_panel if style == "density" else _rate_panel
            fig, axes = plt.subplots(
                1, len(runs), figsize=(5.0 * len(runs), 3.4), squeeze=False
            )
            for ax, run in zip(axes[0], runs):
                panel(ax, run)
        fig.suptitle(figure_id)
        fig.tight_layout()
        fig.savefig(out_path, format="png")
        plt.close(fig)
