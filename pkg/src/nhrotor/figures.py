"""Headless figure rendering for the command-line reports.

Every function takes explicit data and writes one PNG next to the
delimited output.  The object API is used directly (no pyplot), so no
global figure state exists and rendering is safe from worker processes
and tests alike.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from . import theory
from .analysis import KIND_EXPONENTIAL, FitResult, PhaseDiagram
from .model import ModelParams, analytic_log_norm
from .observables import MomentumDistribution, ObservableSeries

DPI = 150

_SIM_STYLE = dict(color="C0", lw=1.2)
_THEORY_STYLE = dict(color="C3", ls="--", lw=1.0)


def _finish(fig: Figure, path: str | Path) -> str:
    path = Path(path)
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    return str(path)


def save_series_figure(
    path: str | Path, series: ObservableSeries, params: ModelParams
) -> str:
    """Four panels: log norm, mean momentum, mean square momentum, otoc.

    Simulated curves with the closed forms dashed on top.
    """
    ts = series.t
    tf = ts.astype(np.float64)
    fig = Figure(figsize=(9.0, 6.5))
    axes = fig.subplots(2, 2)

    ax = axes[0][0]
    ax.plot(ts, series.log_norm, label="simulation", **_SIM_STYLE)
    ax.plot(ts, [analytic_log_norm(params, t) for t in tf], label="exact", **_THEORY_STYLE)
    ax.set_ylabel("log norm")

    ax = axes[0][1]
    ax.plot(ts, series.mean_p, **_SIM_STYLE)
    ax.plot(ts, [theory.mean_p_theory(params, t) for t in tf], **_THEORY_STYLE)
    ax.set_ylabel(r"$\langle p \rangle$")

    ax = axes[1][0]
    ax.plot(ts, series.mean_p2, **_SIM_STYLE)
    ax.plot(ts, [theory.mean_p2_theory(params, t) for t in tf], **_THEORY_STYLE)
    ax.set_ylabel(r"$\langle p^2 \rangle$")

    ax = axes[1][1]
    ax.plot(ts, series.otoc, **_SIM_STYLE)
    ax.plot(ts, [theory.otoc_theory(params, t) for t in tf], **_THEORY_STYLE)
    ax.set_ylabel("C(t)")

    for row in axes:
        for ax in row:
            ax.set_xlabel("t (kicks)")
    axes[0][0].legend(loc="best", fontsize=8)
    fig.suptitle(
        f"K={params.kick_k:g}, lambda={params.lam:g}, phi={params.phi:g}", fontsize=10
    )
    fig.tight_layout()
    return _finish(fig, path)


def save_theory_figure(path: str | Path, params: ModelParams, ts: np.ndarray) -> str:
    """Growth-law curvatures versus time with their flat asymptotes."""
    tf = np.asarray(ts, dtype=np.float64)
    fig = Figure(figsize=(10.0, 3.4))
    axes = fig.subplots(1, 3)
    curves = (
        ("$S_p/\\lambda$", lambda t: theory.s_p_theory(params, t) / params.lam
         if params.lam > 0.0 else math.nan),
        ("$S_E$", lambda t: theory.s_e_theory(params, t)),
        ("$S_C/\\epsilon^2$", lambda t: theory.s_c_theory(params, t) / params.epsilon**2),
    )
    for ax, (label, f) in zip(axes, curves):
        ax.plot(tf, [f(t) for t in tf], **_SIM_STYLE)
        ax.set_xscale("log")
        ax.set_xlabel("t (kicks)")
        ax.set_ylabel(label)
        if params.lam > 0.0:
            ax.axvline(theory.t_c(params), color="0.6", ls=":", lw=1.0)
    fig.tight_layout()
    return _finish(fig, path)


def save_sweep_figure(path: str | Path, diagram: PhaseDiagram) -> str:
    """Heatmap of one growth-law quantity on the (t, lambda) grid.

    The crossover curve lambda = 2 pi / t is drawn on top; cells whose
    simulation could not be resolved render as gaps.
    """
    values = np.ma.masked_invalid(diagram.values)
    fig = Figure(figsize=(5.6, 4.2))
    ax = fig.subplots()
    mesh = ax.pcolormesh(
        diagram.t_values, diagram.lambda_values, values, shading="nearest"
    )
    ts = np.asarray(diagram.t_values, dtype=np.float64)
    lam_lo = float(diagram.lambda_values.min())
    lam_hi = float(diagram.lambda_values.max())
    crossover = 2.0 * math.pi / ts
    inside = (crossover >= lam_lo) & (crossover <= lam_hi)
    if inside.any():
        ax.plot(ts[inside], crossover[inside], "w--", lw=1.2, label=r"$t = t_c$")
        ax.legend(loc="best", fontsize=8)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("t (kicks)")
    ax.set_ylabel(r"$\lambda$")
    ax.set_title(f"{diagram.quantity} ({diagram.source})", fontsize=10)
    fig.colorbar(mesh, ax=ax)
    fig.tight_layout()
    return _finish(fig, path)


def save_fit_figure(
    path: str | Path, dist: MomentumDistribution, fit: FitResult
) -> str:
    """Momentum distribution on a log scale with the fitted profile."""
    w = dist.weights
    p = dist.momenta
    peak = int(np.argmax(w))
    visible = w > 1e-14 * w[peak]
    fig = Figure(figsize=(5.6, 4.0))
    ax = fig.subplots()
    ax.semilogy(p[visible], w[visible], ".", ms=3, color="C0", label="modes")

    span = np.linspace(fit.support[0], fit.support[1], 400)
    if fit.kind == KIND_EXPONENTIAL:
        left = span <= p[peak]
        profile = np.where(
            left,
            w[peak] * np.exp(-np.abs(span - p[peak]) / fit.xi_left),
            w[peak] * np.exp(-np.abs(span - p[peak]) / fit.xi_right),
        )
        label = f"exp fit, xi={fit.xi:.3g}"
    else:
        profile = w[peak] * np.exp(
            -((span - fit.p_c) ** 2 - (p[peak] - fit.p_c) ** 2) / fit.sigma
        )
        label = f"gauss fit, p_c={fit.p_c:.4g}, sigma={fit.sigma:.3g}"
    ax.semilogy(span, profile, color="C3", lw=1.2, label=label)
    ax.set_xlabel("p")
    ax.set_ylabel(r"$|\psi(p)|^2$")
    ax.set_title(f"t = {fit.t}", fontsize=10)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return _finish(fig, path)


def save_growth_figure(
    path: str | Path,
    curves: list[tuple[str, np.ndarray, np.ndarray, float, float]],
) -> str:
    """Log-log growth curves with their fitted power laws.

    ``curves`` rows are (label, ts, values, exponent, coefficient); the
    fitted law coefficient * t**exponent is dashed over each curve.
    """
    fig = Figure(figsize=(5.6, 4.2))
    ax = fig.subplots()
    for i, (label, ts, values, exponent, coeff) in enumerate(curves):
        ts = np.asarray(ts, dtype=np.float64)
        vals = np.abs(np.asarray(values, dtype=np.float64))
        keep = vals > 0.0
        ax.loglog(ts[keep], vals[keep], color=f"C{i}", lw=1.2, label=label)
        ax.loglog(
            ts,
            coeff * ts**exponent,
            color=f"C{i}",
            ls="--",
            lw=1.0,
            label=f"{coeff:.3g} t^{exponent:.3f}",
        )
    ax.set_xlabel("t (kicks)")
    ax.set_ylabel("growth")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return _finish(fig, path)
