"""Report figures, rendered off-screen next to the CSV output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (5.0, 3.4),
    "figure.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
    "savefig.bbox": "tight",
}
PNG_META = {"Software": None}  # keep the files free of version strings


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata=PNG_META)
    plt.close(fig)
    return path


def ratio_figure(report, path, title=None):
    """Per-run ratios and their running supremum."""
    with plt.rc_context(STYLE):
        fig, (a, b) = plt.subplots(1, 2, figsize=(8.0, 3.2))
        ratios = np.array([r.ratio for r in report.runs])
        runs = np.arange(len(ratios))
        a.plot(runs, ratios, "o", ms=3, color="C0")
        a.plot(runs, report.prefix_sup(), "-", color="C3", label="running sup")
        a.set_xlabel("run")
        a.set_ylabel("lhs / rhs")
        a.legend(loc="lower right")
        finite = ratios[np.isfinite(ratios)]
        if finite.size:
            b.hist(finite, bins=min(20, max(5, finite.size // 3)), color="C0", alpha=0.8)
        b.set_xlabel("lhs / rhs")
        b.set_ylabel("count")
        fig.suptitle(title or f"{report.kind} estimate, sup = {report.sup_ratio:.4g}")
        return _save(fig, path)


def refinement_figure(sizes, sups, path, ylabel="sup ratio"):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(sizes, sups, "o-")
        ax.set_xscale("log", base=2)
        ax.set_xlabel("grid size")
        ax.set_ylabel(ylabel)
        return _save(fig, path)


def convergence_figure(steps, errors, path, xlabel="difference step", order=2):
    """Log-log errors with a reference slope."""
    steps = np.asarray(steps, dtype=float)
    errors = np.asarray(errors, dtype=float)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.loglog(steps, errors, "o-", label="residual")
        if np.all(errors > 0):
            ref = errors[-1] * (steps / steps[-1]) ** order
            ax.loglog(steps, ref, "k--", lw=0.8, label=f"slope {order}")
        ax.set_xlabel(xlabel)
        ax.set_ylabel("relative residual")
        ax.legend()
        return _save(fig, path)


def energy_figure(t, components, path):
    """``components`` maps labels to arrays sampled at ``t``."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for label, values in components.items():
            ax.plot(t, values, label=label)
        ax.set_xlabel("t = -log x")
        ax.set_ylabel("energy")
        ax.legend()
        return _save(fig, path)


def iteration_figure(history, path, title=None):
    """Picard differences ``d_m`` on a log scale."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        d = np.asarray(history.diffs, dtype=float)
        if d.size:
            ax.semilogy(np.arange(d.size), d, "o-", label="d_m")
            ax.axhline(history.tol_abs, color="k", ls="--", lw=0.8, label="tolerance")
        ax.set_xlabel("iteration m")
        ax.set_ylabel("||u(m+1) - u(m)||_Z")
        ax.legend()
        if title:
            ax.set_title(title)
        return _save(fig, path)
