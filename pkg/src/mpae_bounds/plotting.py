"""PNG renderings for CLI reports.

Only the command-line front end imports this module; the numerical core has
no plotting dependency. The Agg backend is forced so figures render without
a display.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": (5.0, 3.4),
    "figure.dpi": 120,
    "axes.grid": True,
    "grid.alpha": 0.3,
}

LINESTYLES = {
    "dpt": ":",
    "channel_coding": "-",
    "spherical_cap": "--",
    "spectrum_replication": "-.",
    "unlimited": (0, (1, 3)),
    "achievability": (0, (5, 2, 1, 2)),
}

# PNG text chunks otherwise carry the matplotlib version string
_PNG_META = {"Software": None}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata=_PNG_META, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_bounds(snr: Sequence[float], columns: Mapping[str, Sequence[float]], alpha: float,
                path, log_x: bool = True) -> Path:
    """Exponent curves against SNR, one line per bound column."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for name, vals in columns.items():
            ax.plot(snr, vals, linestyle=LINESTYLES.get(name, "-"), label=name.replace("_", " "))
        if log_x:
            ax.set_xscale("log")
        # the unlimited-bandwidth line grows linearly and would flatten the rest
        limited = [np.nanmax(v) for k, v in columns.items() if k != "unlimited"]
        if limited:
            ax.set_ylim(bottom=0.0, top=1.1 * max(limited))
        ax.set_xlabel(r"SNR $\Gamma$")
        ax.set_ylabel(r"exponent per unit bandwidth")
        ax.set_title(rf"$\alpha = {alpha:g}$")
        ax.legend(loc="upper left")
        return _save(fig, path)


def plot_against_alpha(alphas: Sequence[float], columns: Mapping[str, Sequence[float]],
                       ylabel: str, path, log_y: bool = False,
                       marks: Optional[Sequence[float]] = None) -> Path:
    """Per-bound quantities against the moment order (constants, critical SNRs)."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for name, vals in columns.items():
            vals = np.asarray(vals, dtype=float)
            ax.plot(alphas, vals, linestyle=LINESTYLES.get(name, "-"), marker=".",
                    label=name.replace("_", " "))
        for a in marks or ():
            ax.axvline(a, color="0.6", linewidth=0.8)
        if log_y:
            ax.set_yscale("log")
        ax.set_xlabel(r"$\alpha$")
        ax.set_ylabel(ylabel)
        ax.legend()
        return _save(fig, path)
