"""Split-operator propagation with log-domain norm accounting.

One labeled step is kick-then-rotate: the kick is diagonal on the angle
grid, the free rotation diagonal on the momentum lattice, and the FFT
pair moves between them.  After every kick the state is renormalized and
the squared-norm growth factor is added to a running log, so the stored
amplitudes stay order one while the physical norm grows like
exp(lambda t / 2 pi).

At hbar_eff = 4 pi the free-rotation table is exactly unity (the
quadratic phases are whole multiples of 2 pi, and they are reduced
mod 2 pi before exponentiation so this holds bitwise), which is what
makes the closed-form reference state in :mod:`nhrotor.model` exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    EDGE_BAND,
    EDGE_TAIL_LIMIT,
    ModelParams,
    QuantumState,
    check_edge_tail,
    initial_state,
    kick_potential,
)
from .observables import ObservableSeries, mean_p, mean_p2, otoc


@dataclass(frozen=True)
class PropagatorPlan:
    """Precomputed per-step tables for one parameter set.

    kick_table : exp(-i V(theta_j) / hbar) on the angle grid
    free_table : exp(-i p_n^2 / (2 hbar)) in FFT index order
    """

    params: ModelParams
    kick_table: np.ndarray
    free_table: np.ndarray

    def __post_init__(self) -> None:
        self.kick_table.setflags(write=False)
        self.free_table.setflags(write=False)


def make_plan(params: ModelParams) -> PropagatorPlan:
    grid = params.grid
    kick_table = np.exp(-1j * kick_potential(grid.theta, params) / params.hbar_eff)

    # Free phase per mode, in cycles: p_n^2 / (2 hbar) / (2 pi) = n^2 * (hbar / 4 pi).
    # Reducing the cycle count mod 1 before exponentiating keeps the table
    # accurate for huge n^2, and at hbar = 4 pi it is exactly all ones.
    n = np.fft.ifftshift(grid.indices).astype(np.float64)
    cycles = n * n * (params.hbar_eff / (4.0 * math.pi))
    cycles -= np.round(cycles)
    free_table = np.exp(-2j * math.pi * cycles)
    return PropagatorPlan(params=params, kick_table=kick_table, free_table=free_table)


def _kick_raw(v: np.ndarray, kick_table: np.ndarray) -> tuple[np.ndarray, float]:
    """Apply one kick to FFT-ordered working amplitudes.

    Returns the renormalized amplitudes and the squared-norm growth
    factor of the step.
    """
    w = np.fft.fft(kick_table * np.fft.ifft(v))
    norm_sq = float(np.vdot(w, w).real)
    return w / math.sqrt(norm_sq), norm_sq


def _to_working(state: QuantumState) -> np.ndarray:
    grid = state.grid
    return grid.alternating * np.fft.ifftshift(state.amplitudes)


def _from_working(
    v: np.ndarray, log_norm: float, t: int, params: ModelParams
) -> QuantumState:
    grid = params.grid
    amps = np.fft.fftshift(grid.alternating * v)
    return QuantumState(amplitudes=amps, log_norm=log_norm, t=t, grid=grid)


def apply_kick(state: QuantumState, plan: PropagatorPlan) -> QuantumState:
    """One kick: multiply by the kick table in angle space, renormalize.

    The kick label t does not change; the step count advances with the
    free rotation.
    """
    v, norm_sq = _kick_raw(_to_working(state), plan.kick_table)
    return _from_working(
        v, state.log_norm + math.log(norm_sq), state.t, plan.params
    )


def apply_free(state: QuantumState, plan: PropagatorPlan) -> QuantumState:
    """Free rotation between kicks; completes the step, t -> t + 1."""
    v = plan.free_table * _to_working(state)
    return _from_working(v, state.log_norm, state.t + 1, plan.params)


def propagate(
    params: ModelParams, t_max: int, record_every: int = 1
) -> ObservableSeries:
    """Propagate the plane-wave initial state for t_max kicks.

    Observables are recorded at t = 0, at every ``record_every``-th kick,
    and at t_max.  Deterministic: identical inputs give identical output.
    """
    series, _ = run(params, t_max, record_every=record_every)
    return series


def run(
    params: ModelParams,
    t_max: int,
    record_every: int = 1,
    snapshot_times: tuple[int, ...] = (),
) -> tuple[ObservableSeries, dict[int, QuantumState]]:
    """Like :func:`propagate`, also returning full states at chosen times."""
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    if record_every < 1:
        raise ValueError(f"record_every must be >= 1, got {record_every}")
    wanted = set(snapshot_times)
    if wanted and (min(wanted) < 0 or max(wanted) > t_max):
        raise ValueError("snapshot times must lie in [0, t_max]")

    plan = make_plan(params)
    state0 = initial_state(params)
    v = _to_working(state0)
    log_norm = 0.0

    rows: list[tuple[int, float, float, float, float]] = []
    snapshots: dict[int, QuantumState] = {}
    edge = slice(params.n_modes // 2 - EDGE_BAND, params.n_modes // 2 + EDGE_BAND)

    def materialize(t: int) -> QuantumState:
        return _from_working(v.copy(), log_norm, t, params)

    def record(t: int) -> None:
        state = materialize(t)
        rows.append(
            (
                t,
                log_norm,
                mean_p(state),
                mean_p2(state),
                otoc(state, params.epsilon),
            )
        )

    record(0)
    if 0 in wanted:
        snapshots[0] = materialize(0)

    for t in range(1, t_max + 1):
        v, norm_sq = _kick_raw(v, plan.kick_table)
        log_norm += math.log(norm_sq)
        v = plan.free_table * v
        # |v| in working order equals |psi| in FFT order, so the lattice
        # edge band is the contiguous block around index n_modes/2.
        band = v[edge]
        if float(np.sum(band.real**2 + band.imag**2)) > EDGE_TAIL_LIMIT:
            check_edge_tail(np.abs(np.fft.fftshift(v)) ** 2, t)
        if t % record_every == 0 or t == t_max:
            record(t)
        if t in wanted:
            snapshots[t] = materialize(t)

    return ObservableSeries.from_rows(rows), snapshots
