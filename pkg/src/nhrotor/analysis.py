"""Distribution fits, discrete growth curvatures, and parameter sweeps.

The momentum distribution crosses over from exponential localization,
|psi(p)|^2 ~ exp(-|p - p_peak| / xi), to a drifting Gaussian soliton,
|psi(p)|^2 ~ exp(-(p - p_c)^2 / sigma).  Both shapes are fitted in log
space by least squares over the modes above a relative floor, since the
weights fall over many decades.  The Gaussian fit weights each log
residual by the mode weight itself: the far tails are sub-Gaussian, and
an unweighted fit over ten-plus decades would let them drag the vertex
away from the packet center.

Growth-law curvatures are extracted as centered second differences
with unit step: from the simulated series directly, and from the
closed-form parent curves for theory-sourced diagrams.  Both sources
of a (t, lambda) diagram therefore carry the same stencil, and their
cells differ only by propagation error, never by discretization (the
unit-step stencil deviates from the continuous curvature by more than
5e-3 near t = 1 for lambda above ~1, so mixing the two conventions
would swamp the comparison).  The continuous curvature formulas live
in :mod:`nhrotor.theory`.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .evolve import propagate
from .model import ModelParams, ResolutionError
from .observables import MomentumDistribution, ObservableSeries
from . import theory

WORKERS_ENV_VAR = "NHROTOR_WORKERS"

DEFAULT_FIT_FLOOR = 1e-12
DEFAULT_RESIDUAL_CEILING = 2.5

# Number of lattice points dropped from the start of each flank in the
# exponential fit, counting from the peak inclusive.  The default keeps
# the apex in both flanks: the near-peak drop steepens away from the
# apex, so excluding it biases xi low relative to a fit of the whole
# localized profile.
DEFAULT_CUSP_EXCLUSION = 0

KIND_EXPONENTIAL = "exponential"
KIND_GAUSSIAN = "gaussian"

SOURCE_THEORY = "theory"
SOURCE_SIMULATION = "simulation"

QUANTITY_SP = "sp_over_lambda"
QUANTITY_SE = "se"
QUANTITY_SC = "sc_over_eps2"
SWEEP_QUANTITIES = (QUANTITY_SP, QUANTITY_SE, QUANTITY_SC)

_PARENT_SERIES = {QUANTITY_SP: "mean_p", QUANTITY_SE: "mean_p2", QUANTITY_SC: "otoc"}


class FitError(ValueError):
    """A distribution fit could not be performed."""


class InsufficientSupportError(FitError):
    """Too few modes above the fit floor."""


class NonConcaveFitError(FitError):
    """Log-quadratic fit opened upward; no Gaussian width exists."""


@dataclass(frozen=True)
class FitResult:
    """Outcome of one distribution fit.

    Exponential fits fill ``xi`` (flank-averaged localization length,
    with the per-flank values alongside); Gaussian fits fill ``p_c`` and
    ``sigma``.  ``rms_log_residual`` is the fit residual in log space and
    ``flagged`` marks fits whose residual exceeded the caller's ceiling.
    ``support`` is the momentum span of the points actually fitted.
    """

    kind: str
    t: int
    xi: float | None = None
    xi_left: float | None = None
    xi_right: float | None = None
    p_c: float | None = None
    sigma: float | None = None
    rms_log_residual: float = 0.0
    support: tuple[float, float] = (0.0, 0.0)
    n_points: int = 0
    flagged: bool = False


def _support_mask(weights: np.ndarray, floor_frac: float) -> tuple[np.ndarray, float]:
    peak_weight = float(weights.max())
    if peak_weight <= 0.0:
        raise InsufficientSupportError("distribution has no weight")
    floor = floor_frac * peak_weight
    mask = weights > floor
    if int(mask.sum()) < 5:
        raise InsufficientSupportError(
            f"only {int(mask.sum())} modes above the fit floor; need >= 5"
        )
    return mask, floor


def _flank_line(
    distance: np.ndarray, log_w: np.ndarray
) -> tuple[float, np.ndarray]:
    """Least-squares line of log weight vs distance; returns (xi, residuals)."""
    slope, intercept = np.polyfit(distance, log_w, 1)
    if slope >= 0.0:
        raise FitError("flank weight does not decay away from the peak")
    residuals = log_w - (slope * distance + intercept)
    return -1.0 / slope, residuals


def fit_exponential(
    dist: MomentumDistribution,
    t: int,
    floor_frac: float = DEFAULT_FIT_FLOOR,
    residual_ceiling: float = DEFAULT_RESIDUAL_CEILING,
    cusp_exclusion: int = DEFAULT_CUSP_EXCLUSION,
) -> FitResult:
    """Fit exp(-|p - p_peak| / xi) tails to a localized distribution.

    Each flank is fitted separately (the decay need not be symmetric:
    gain and loss skew the two sides); ``xi`` is the point-count weighted
    average of the flank values.  ``cusp_exclusion`` drops that many
    lattice points from the start of each flank, counting from the peak
    inclusive; 0 fits the whole profile, 2 fits the pure tails with the
    apex and its neighbors removed.
    """
    if cusp_exclusion < 0:
        raise ValueError("cusp_exclusion must be >= 0")
    w = dist.weights
    p = dist.momenta
    mask, _ = _support_mask(w, floor_frac)
    peak = int(np.argmax(w))
    idx = np.arange(len(w))

    results: list[tuple[float, int]] = []
    residuals: list[np.ndarray] = []
    spans: list[np.ndarray] = []
    for flank in (idx <= peak - cusp_exclusion, idx >= peak + cusp_exclusion):
        pick = mask & flank
        n_pts = int(pick.sum())
        if n_pts < 2:
            raise InsufficientSupportError(
                f"flank has {n_pts} usable modes above the floor; need >= 2"
            )
        distance = np.abs(p[pick] - p[peak])
        xi, res = _flank_line(distance, np.log(w[pick]))
        results.append((xi, n_pts))
        residuals.append(res)
        spans.append(p[pick])

    total_pts = sum(n for _, n in results)
    xi_avg = sum(xi * n for xi, n in results) / total_pts
    all_res = np.concatenate(residuals)
    rms = float(np.sqrt(np.mean(all_res**2)))
    fitted_p = np.concatenate(spans)
    return FitResult(
        kind=KIND_EXPONENTIAL,
        t=t,
        xi=xi_avg,
        xi_left=results[0][0],
        xi_right=results[1][0],
        rms_log_residual=rms,
        support=(float(fitted_p.min()), float(fitted_p.max())),
        n_points=total_pts,
        flagged=rms > residual_ceiling,
    )


def fit_gaussian(
    dist: MomentumDistribution,
    t: int,
    floor_frac: float = DEFAULT_FIT_FLOOR,
    residual_ceiling: float = DEFAULT_RESIDUAL_CEILING,
    weighted: bool = True,
) -> FitResult:
    """Fit exp(-(p - p_c)^2 / sigma) to a drifting wavepacket.

    Quadratic least squares of log weight in p (centered before fitting
    for conditioning); the vertex gives p_c, the curvature gives sigma.
    By default each log residual is weighted by the mode weight, the
    standard linearization of a direct profile fit; it keeps the vertex
    at the packet core instead of averaging in the sub-Gaussian tails.
    ``weighted=False`` gives every mode above the floor equal say.
    """
    w = dist.weights
    p = dist.momenta
    mask, _ = _support_mask(w, floor_frac)
    q = p[mask]
    log_w = np.log(w[mask])
    q0 = float(q.mean())
    # polyfit squares its weights, so sqrt(w) makes the objective
    # sum of w * (log residual)^2.
    wt = np.sqrt(w[mask]) if weighted else np.ones(len(q))
    c2, c1, _c0 = np.polyfit(q - q0, log_w, 2, w=wt)
    if c2 >= 0.0:
        raise NonConcaveFitError(
            "log-quadratic fit opened upward; distribution is not Gaussian-like"
        )
    p_c = q0 - c1 / (2.0 * c2)
    sigma = -1.0 / c2
    fitted = c2 * (q - q0) ** 2 + c1 * (q - q0) + _c0
    res_sq = (log_w - fitted) ** 2
    rms = float(np.sqrt(np.sum(wt**2 * res_sq) / np.sum(wt**2)))
    return FitResult(
        kind=KIND_GAUSSIAN,
        t=t,
        p_c=p_c,
        sigma=sigma,
        rms_log_residual=rms,
        support=(float(q.min()), float(q.max())),
        n_points=int(mask.sum()),
        flagged=rms > residual_ceiling,
    )


@dataclass(frozen=True)
class DriftFit:
    """Linear drift of Gaussian centers p_c(t)."""

    slope: float
    intercept: float
    r_squared: float
    through_origin_slope: float


def fit_drift(ts: np.ndarray, centers: np.ndarray) -> DriftFit:
    ts = np.asarray(ts, dtype=np.float64)
    centers = np.asarray(centers, dtype=np.float64)
    if len(ts) < 2:
        raise InsufficientSupportError("drift fit needs at least two snapshots")
    slope, intercept = np.polyfit(ts, centers, 1)
    fitted = slope * ts + intercept
    ss_res = float(np.sum((centers - fitted) ** 2))
    ss_tot = float(np.sum((centers - centers.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    origin = float(np.sum(ts * centers) / np.sum(ts * ts))
    return DriftFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        through_origin_slope=origin,
    )


def second_difference(
    series: ObservableSeries, quantity: str
) -> tuple[np.ndarray, np.ndarray]:
    """Centered second difference f(t+1) - 2 f(t) + f(t-1) of a series.

    Requires the series to have been recorded at every kick.  Returns
    the interior times and the difference values.
    """
    if quantity not in _PARENT_SERIES.values():
        raise ValueError(f"unknown series quantity {quantity!r}")
    ts = series.t
    if len(ts) < 3 or not np.all(np.diff(ts) == 1):
        raise ValueError("second differences need a series recorded at every kick")
    f = getattr(series, quantity)
    d2 = f[2:] - 2.0 * f[1:-1] + f[:-2]
    return ts[1:-1].copy(), d2


@dataclass(frozen=True)
class PhaseDiagram:
    """One growth-law quantity on a (t, lambda) grid.

    ``values[i, j]`` corresponds to ``lambda_values[i]`` and
    ``t_values[j]``; ``flags`` holds '' for clean cells or a short reason
    for cells whose simulation could not be resolved.
    """

    quantity: str
    source: str
    t_values: np.ndarray
    lambda_values: np.ndarray
    values: np.ndarray
    flags: tuple[tuple[str, ...], ...]


def _theory_parent(params: ModelParams, quantity: str, t: float) -> float:
    if quantity == QUANTITY_SP:
        return theory.mean_p_theory(params, t)
    if quantity == QUANTITY_SE:
        return theory.mean_p2_theory(params, t)
    if quantity == QUANTITY_SC:
        return theory.otoc_theory(params, t)
    raise ValueError(f"unknown sweep quantity {quantity!r}")


def _theory_cell(params: ModelParams, quantity: str, t: float) -> float:
    """Unit-step second difference of the closed-form parent curve."""
    d2 = (
        _theory_parent(params, quantity, t + 1.0)
        - 2.0 * _theory_parent(params, quantity, t)
        + _theory_parent(params, quantity, t - 1.0)
    )
    if quantity == QUANTITY_SP:
        return d2 / params.lam
    if quantity == QUANTITY_SC:
        return d2 / params.epsilon**2
    return d2


def _simulation_row(
    args: tuple[ModelParams, tuple[int, ...], str],
) -> tuple[list[float], list[str]]:
    """One lambda row of a simulated diagram.  Module-level for pickling."""
    params, t_values, quantity = args
    parent = _PARENT_SERIES[quantity]
    try:
        series = propagate(params, t_max=max(t_values) + 1, record_every=1)
    except ResolutionError:
        return [math.nan] * len(t_values), ["resolution_error"] * len(t_values)
    ts, d2 = second_difference(series, parent)
    lookup = {int(t): float(v) for t, v in zip(ts, d2)}
    values: list[float] = []
    flags: list[str] = []
    for t in t_values:
        if t not in lookup:
            values.append(math.nan)
            flags.append("outside_difference_stencil")
            continue
        v = lookup[t]
        if quantity == QUANTITY_SP:
            v /= params.lam
        elif quantity == QUANTITY_SC:
            v /= params.epsilon**2
        values.append(v)
        flags.append("")
    return values, flags


def default_worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw is not None:
        count = int(raw)
        if count < 1:
            raise ValueError(f"{WORKERS_ENV_VAR} must be >= 1, got {raw!r}")
        return count
    return os.cpu_count() or 1


def sweep_phase_diagram(
    base_params: ModelParams,
    t_values,
    lambda_values,
    quantity: str,
    source: str = SOURCE_THEORY,
    max_workers: int | None = None,
) -> PhaseDiagram:
    """Evaluate one growth-law quantity over a (t, lambda) grid.

    ``source`` selects unit-step second differences of either the
    closed-form curves or a simulated series per lambda (both sources
    share the stencil; see the module docstring).  Simulation rows are
    independent and run
    on a process pool sized by ``max_workers`` (default: the
    NHROTOR_WORKERS environment variable, else all cores); results are
    merged in grid order, so the output does not depend on scheduling.
    """
    if quantity not in SWEEP_QUANTITIES:
        raise ValueError(f"unknown sweep quantity {quantity!r}")
    if source not in (SOURCE_THEORY, SOURCE_SIMULATION):
        raise ValueError(f"unknown sweep source {source!r}")
    t_values = np.asarray(sorted(int(t) for t in t_values), dtype=np.int64)
    lambda_values = np.asarray(sorted(float(v) for v in lambda_values))
    if len(t_values) == 0 or len(lambda_values) == 0:
        raise ValueError("sweep axes must be non-empty")
    if t_values[0] < 1:
        raise ValueError("sweep times must be >= 1")
    if lambda_values[0] <= 0.0:
        raise ValueError("sweep lambda values must be > 0")

    rows: list[list[float]] = []
    flag_rows: list[list[str]] = []
    if source == SOURCE_THEORY:
        for lam in lambda_values:
            params = base_params.replace(lam=float(lam))
            rows.append([_theory_cell(params, quantity, float(t)) for t in t_values])
            flag_rows.append([""] * len(t_values))
    else:
        jobs = [
            (base_params.replace(lam=float(lam)), tuple(int(t) for t in t_values), quantity)
            for lam in lambda_values
        ]
        workers = default_worker_count() if max_workers is None else max_workers
        workers = min(workers, len(jobs))
        if workers <= 1:
            results = [_simulation_row(job) for job in jobs]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_simulation_row, jobs))
        for values, flags in results:
            rows.append(values)
            flag_rows.append(flags)

    return PhaseDiagram(
        quantity=quantity,
        source=source,
        t_values=t_values,
        lambda_values=lambda_values,
        values=np.asarray(rows, dtype=np.float64),
        flags=tuple(tuple(r) for r in flag_rows),
    )
