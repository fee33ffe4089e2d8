"""Spectral simulator for the kicked rotor with an imaginary kick component.

At the resonant effective Planck constant the one-kick propagator has an
exact closed form, so every simulated observable here is backed by an
analytic counterpart: the norm grows as a modified Bessel function, the
momentum moments and the out-of-time-order correlator follow Bessel-ratio
laws, and their discrete growth curvatures separate a lambda-dependent
early regime from a lambda-independent late one at t_c = 2 pi / lambda.

Layers, bottom up: ``bessel`` (scaled I_m kernels), ``model`` (parameters,
grids, exact states), ``evolve`` (split-operator propagation), ``observables``
(compensated moments and the correlator), ``theory`` (closed forms and
asymptotes), ``analysis`` (distribution fits, second differences, sweeps),
``cli`` (data export), ``figures`` (headless rendering).
"""

from .bessel import bessel_i, bessel_i_scaled, ratio_i1_i0
from .model import (
    RESONANT_HBAR,
    ModelParams,
    MomentumGrid,
    QuantumState,
    ResolutionError,
    analytic_log_norm,
    analytic_state,
    initial_state,
    kick_potential,
)
from .evolve import PropagatorPlan, make_plan, propagate, run
from .observables import (
    MomentumDistribution,
    ObservableSeries,
    SeriesRow,
    mean_p,
    mean_p2,
    momentum_distribution,
    otoc,
)
from .theory import (
    TheoryAsymptote,
    TheoryPoint,
    asymptotic_regime_values,
    dp_dt_theory,
    large_t_asymptote,
    mean_p_theory,
    mean_p2_theory,
    otoc_theory,
    regime_label,
    s_c_theory,
    s_e_theory,
    s_p_theory,
    small_t_asymptote,
    t_c,
)
from .analysis import (
    DriftFit,
    FitError,
    FitResult,
    InsufficientSupportError,
    NonConcaveFitError,
    PhaseDiagram,
    fit_drift,
    fit_exponential,
    fit_gaussian,
    second_difference,
    sweep_phase_diagram,
)

__version__ = "0.1.0"

__all__ = [
    "RESONANT_HBAR",
    "DriftFit",
    "FitError",
    "FitResult",
    "InsufficientSupportError",
    "ModelParams",
    "MomentumDistribution",
    "MomentumGrid",
    "NonConcaveFitError",
    "ObservableSeries",
    "PhaseDiagram",
    "PropagatorPlan",
    "QuantumState",
    "ResolutionError",
    "SeriesRow",
    "TheoryAsymptote",
    "TheoryPoint",
    "analytic_log_norm",
    "analytic_state",
    "asymptotic_regime_values",
    "bessel_i",
    "bessel_i_scaled",
    "dp_dt_theory",
    "fit_drift",
    "fit_exponential",
    "fit_gaussian",
    "initial_state",
    "kick_potential",
    "large_t_asymptote",
    "make_plan",
    "mean_p",
    "mean_p2",
    "mean_p_theory",
    "mean_p2_theory",
    "momentum_distribution",
    "otoc",
    "otoc_theory",
    "propagate",
    "ratio_i1_i0",
    "regime_label",
    "run",
    "s_c_theory",
    "s_e_theory",
    "s_p_theory",
    "second_difference",
    "small_t_asymptote",
    "sweep_phase_diagram",
    "t_c",
    "__version__",
]
