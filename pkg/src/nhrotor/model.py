"""Run parameters, momentum lattice, and the closed-form resonant state.

The system lives on a momentum lattice p_n = n * hbar_eff with integer
n in [-n_modes/2, n_modes/2), conjugate to the angle grid
theta_j = -pi + 2 pi j / n_modes.  One kick multiplies the angle-space
wavefunction by exp(-i V(theta) / hbar_eff) with the complex potential

    V(theta) = K cos(theta) + i lambda cos(theta + phi),

whose imaginary part makes the evolution non-unitary: the norm grows,
so states are stored renormalized with the accumulated norm kept in log
domain.

At hbar_eff = 4 pi the free rotation between kicks is the identity on
the lattice and the state after t kicks is known in closed form; this
module evaluates that closed form (``analytic_state``) as the exact
reference for the propagator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bessel import bessel_i_scaled

RESONANT_HBAR = 4.0 * math.pi

# Edge-band width (modes per side) inspected by the lattice tail check,
# and the probability allowed there before a run is declared unresolved.
EDGE_BAND = 4
EDGE_TAIL_LIMIT = 1e-10


class ResolutionError(RuntimeError):
    """Momentum lattice too small: probability reached the lattice edge."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class ModelParams:
    """Physical and numerical parameters of one run.

    kick_k    : real kick strength K
    lam       : gain/loss strength lambda >= 0 (0 is the Hermitian control)
    phi       : phase offset between the real and imaginary potential parts
    hbar_eff  : effective Planck constant; 4 pi is the resonant value every
                closed-form observable assumes
    epsilon   : phase-space translation scale used by the OTOC
    n_modes   : lattice size, a power of two >= 8
    """

    kick_k: float = 1.0
    lam: float = 0.3
    phi: float = -math.pi / 6
    hbar_eff: float = RESONANT_HBAR
    epsilon: float = 1e-5
    n_modes: int = 1024

    def __post_init__(self) -> None:
        for name in ("kick_k", "lam", "phi", "hbar_eff", "epsilon"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.lam < 0.0:
            raise ValueError(f"lam must be >= 0, got {self.lam!r}")
        if self.hbar_eff <= 0.0:
            raise ValueError(f"hbar_eff must be > 0, got {self.hbar_eff!r}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon!r}")
        if not _is_power_of_two(self.n_modes) or self.n_modes < 8:
            raise ValueError(
                f"n_modes must be a power of two >= 8, got {self.n_modes!r}"
            )

    @property
    def is_resonant(self) -> bool:
        return abs(self.hbar_eff - RESONANT_HBAR) < 1e-12

    @cached_property
    def grid(self) -> "MomentumGrid":
        return MomentumGrid(n_modes=self.n_modes, hbar_eff=self.hbar_eff)

    def replace(self, **changes) -> "ModelParams":
        import dataclasses

        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class MomentumGrid:
    """Momentum lattice and its conjugate angle grid."""

    n_modes: int
    hbar_eff: float

    @cached_property
    def indices(self) -> np.ndarray:
        """Integer mode numbers n, centered order -N/2 .. N/2-1."""
        half = self.n_modes // 2
        out = np.arange(-half, half, dtype=np.int64)
        out.setflags(write=False)
        return out

    @cached_property
    def momenta(self) -> np.ndarray:
        out = self.indices * self.hbar_eff
        out.setflags(write=False)
        return out

    @cached_property
    def theta(self) -> np.ndarray:
        out = -math.pi + 2.0 * math.pi * np.arange(self.n_modes) / self.n_modes
        out.setflags(write=False)
        return out

    @cached_property
    def alternating(self) -> np.ndarray:
        """(-1)^n in FFT index order; the same vector in centered order.

        This carries the theta-grid offset of -pi through the FFT pair, so
        the discrete transforms below match the continuum convention
        psi(theta) = (2 pi)^{-1/2} sum_n psi_n e^{i n theta} exactly.
        """
        out = np.where(np.arange(self.n_modes) % 2 == 0, 1.0, -1.0)
        out.setflags(write=False)
        return out


def to_angle(amplitudes: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    """Momentum amplitudes (centered order) -> wavefunction on the theta grid."""
    a = np.fft.ifftshift(amplitudes) * grid.alternating
    return np.fft.ifft(a) * (grid.n_modes / math.sqrt(2.0 * math.pi))


def to_momentum(values: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    """Wavefunction on the theta grid -> momentum amplitudes (centered order).

    Exact inverse of :func:`to_angle` up to rounding.
    """
    a = grid.alternating * np.fft.fft(values)
    return np.fft.fftshift(a) * (math.sqrt(2.0 * math.pi) / grid.n_modes)


@dataclass(frozen=True)
class QuantumState:
    """Normalized momentum amplitudes plus accumulated log norm.

    ``amplitudes`` is complex, in centered mode order, with unit summed
    probability; the physical (growing) norm of the run up to kick ``t``
    is exp(log_norm), tracked in log domain so long runs never overflow.
    """

    amplitudes: np.ndarray
    log_norm: float
    t: int
    grid: MomentumGrid

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def check_edge_tail(weights: np.ndarray, t: int) -> None:
    """Raise ResolutionError if the lattice edge band carries real weight."""
    tail = float(np.sum(weights[:EDGE_BAND]) + np.sum(weights[-EDGE_BAND:]))
    if tail > EDGE_TAIL_LIMIT:
        raise ResolutionError(
            f"momentum lattice saturated at t={t}: edge-band probability "
            f"{tail:.3e} exceeds {EDGE_TAIL_LIMIT:g}; enlarge n_modes"
        )


def kick_potential(theta, params: ModelParams):
    """Complex kicking potential V(theta); accepts scalars or arrays."""
    theta = np.asarray(theta, dtype=np.float64)
    value = params.kick_k * np.cos(theta) + 1j * params.lam * np.cos(
        theta + params.phi
    )
    if value.ndim == 0:
        return complex(value)
    return value


def initial_state(params: ModelParams) -> QuantumState:
    """The zero-momentum plane wave, psi(theta) = (2 pi)^{-1/2}."""
    amps = np.zeros(params.n_modes, dtype=np.complex128)
    amps[params.n_modes // 2] = 1.0
    return QuantumState(amplitudes=amps, log_norm=0.0, t=0, grid=params.grid)


def _require_resonance(params: ModelParams, what: str) -> None:
    if not params.is_resonant:
        raise ValueError(
            f"{what} assumes hbar_eff = 4 pi, got hbar_eff={params.hbar_eff!r}"
        )


def analytic_state(params: ModelParams, t: int) -> QuantumState:
    """Closed-form state after t resonant kicks.

    In angle space the state is the initial plane wave times
    exp(-i t V(theta) / (4 pi)); its real exponent is evaluated with the
    grid maximum subtracted so arbitrarily long times never overflow, and
    the subtracted piece is restored into ``log_norm`` exactly.

    Raises
    ------
    ResolutionError
        If the resulting momentum distribution leaks into the lattice
        edge band (the lattice cannot represent the state).
    """
    _require_resonance(params, "analytic_state")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    grid = params.grid
    scale = t / (4.0 * math.pi)
    growth = params.lam * np.cos(grid.theta + params.phi) * scale
    phase = -params.kick_k * np.cos(grid.theta) * scale
    growth_max = float(growth.max()) if t > 0 else 0.0
    values = np.exp((growth - growth_max) + 1j * phase) / math.sqrt(2.0 * math.pi)
    amps = to_momentum(values, grid)
    norm_sq = math.fsum((amps.real**2 + amps.imag**2).tolist())
    amps /= math.sqrt(norm_sq)
    log_norm = 2.0 * growth_max + math.log(norm_sq)
    check_edge_tail(np.abs(amps) ** 2, t)
    return QuantumState(amplitudes=amps, log_norm=log_norm, t=t, grid=grid)


def analytic_log_norm(params: ModelParams, t: float) -> float:
    """Closed-form log of the squared-amplitude integral after t kicks.

    Equals x + log(e^{-x} I_0(x)) at x = lambda t / (2 pi): the large-x
    pieces combine in log domain, so this stays finite for any t.
    """
    _require_resonance(params, "analytic_log_norm")
    x = params.lam * t / (2.0 * math.pi)
    if x == 0.0:
        return 0.0
    return x + math.log(bessel_i_scaled(0, x))
