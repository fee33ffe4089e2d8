"""Closed-form observables for the resonant run and their growth laws.

All formulas are functions of the scaled time x = lambda t / (2 pi)
through ratios of I_0..I_3 (overflow-safe, see :mod:`nhrotor.bessel`):

    <p>(t)   = -K sin(phi) R(x) t,                       R = I_1/I_0
    <p^2>(t) = K^2 sin^2(phi) t^2
               + (2 pi / lambda) R(x) (K^2 cos(2 phi) + lambda^2) t
    C(t)     = epsilon^2 (<p^2> - <p>^2)

and their first/second time derivatives.  A characteristic time
t_c = 2 pi / lambda separates quadratic early growth from linear late
growth; the curvature formulas below interpolate the full crossover.

The second derivative of <p^2> is implemented with the 1/lambda and
1/sin(phi) factors cancelled symbolically, so it is finite for every
parameter value including lambda = 0 and phi = 0; never divide by user
parameters to build it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bessel import bessel_i_scaled
from .model import ModelParams

REGIME_SMALL = "small"
REGIME_CROSSOVER = "crossover"
REGIME_LARGE = "large"

# Regime boundaries in units of t_c.
SMALL_T_FACTOR = 0.1
LARGE_T_FACTOR = 10.0


def t_c(params: ModelParams) -> float:
    """Crossover time 2 pi / lambda between quadratic and linear growth."""
    if params.lam == 0.0:
        raise ZeroDivisionError("t_c is undefined for lam = 0 (Hermitian case)")
    return 2.0 * math.pi / params.lam


def _scaled_time(params: ModelParams, t: float) -> float:
    return params.lam * t / (2.0 * math.pi)


def _ratios(x: float) -> tuple[float, float, float]:
    """(I_1/I_0, I_2/I_0, I_3/I_0), from scaled values so x may be huge."""
    i0 = bessel_i_scaled(0, x)
    return (
        bessel_i_scaled(1, x) / i0,
        bessel_i_scaled(2, x) / i0,
        bessel_i_scaled(3, x) / i0,
    )


# Both curvature shapes decay like x^-3 while the ratio combinations
# building them decay like x^-1, so past _TAIL_SWITCH the direct forms
# lose relative accuracy to cancellation and both switch to their exact
# asymptotic tails.  The coefficients are the 1/x series of
# d^2[x R(x)]/dx^2 = -(w^3/4)(1 + 3 w + ...), w = 1/x, derived from the
# e^-x I_m(x) expansions; all are dyadic rationals, so the literals are
# exact.  The matching variance-shape series carries the same
# coefficients weighted by the term index.
_TAIL_SWITCH = 32.0
_TAIL_COEFFS = (
    1.0,
    3.0,
    75.0 / 8.0,
    65.0 / 2.0,
    16095.0 / 128.0,
    2163.0 / 4.0,
    2630131.0 / 1024.0,
    214173.0 / 16.0,
    2492314875.0 / 32768.0,
    119925355.0 / 256.0,
)


def _curvature_shape(x: float) -> float:
    """Dimensionless second derivative d^2[R(x(t)) t]/dt^2 / (lambda/2pi).

    Falls from 1 at x = 0 to 0 as x -> inf; multiplied by the
    appropriate prefactors it gives every curvature law below.
    """
    if x > _TAIL_SWITCH:
        w = 1.0 / x
        acc = 0.0
        for c in reversed(_TAIL_COEFFS):
            acc = acc * w + c
        return -0.25 * acc * w**3
    r1, r2, r3 = _ratios(x)
    first = 1.0 + r2 - 2.0 * r1 * r1
    second = 0.25 * (3.0 * r1 - r3) + 1.5 * r1 * r2 - 2.0 * r1**3
    return first - x * second


def _variance_shape(x: float) -> float:
    """Dimensionless second derivative d^2[x^2 (1 - R^2)]/dx^2.

    The ballistic part of the momentum variance; falls from 2 at x = 0
    to 0 as x -> inf.
    """
    if x > _TAIL_SWITCH:
        w = 1.0 / x
        acc = 0.0
        for j in reversed(range(len(_TAIL_COEFFS))):
            acc = acc * w + (j + 1) * _TAIL_COEFFS[j]
        return 0.25 * acc * w**3
    r1, _, _ = _ratios(x)
    drift = _drift_shape(x)
    return 2.0 - 2.0 * drift * drift - 2.0 * x * r1 * _curvature_shape(x)


def _drift_shape(x: float) -> float:
    """Dimensionless first derivative d[R(x(t)) t]/dt; 0 -> 1 across t_c."""
    r1, r2, _ = _ratios(x)
    return 0.5 * x * (1.0 + r2 - 2.0 * r1 * r1) + r1


def mean_p_theory(params: ModelParams, t: float) -> float:
    """Mean momentum: directed drift from the gain/loss asymmetry."""
    x = _scaled_time(params, t)
    r1 = bessel_i_scaled(1, x) / bessel_i_scaled(0, x)
    return -params.kick_k * math.sin(params.phi) * r1 * t


def _linear_growth_factor(params: ModelParams, t: float) -> float:
    """(2 pi / lambda) R(x) t, continued to t^2 / 2 at lambda = 0."""
    if params.lam == 0.0:
        return 0.5 * t * t
    x = _scaled_time(params, t)
    r1 = bessel_i_scaled(1, x) / bessel_i_scaled(0, x)
    return (2.0 * math.pi / params.lam) * r1 * t


def mean_p2_theory(params: ModelParams, t: float) -> float:
    """Second momentum moment: ballistic term plus crossover-linear term."""
    k, phi = params.kick_k, params.phi
    ballistic = (k * math.sin(phi) * t) ** 2
    coupling = k * k * math.cos(2.0 * phi) + params.lam * params.lam
    return ballistic + _linear_growth_factor(params, t) * coupling


def otoc_theory(params: ModelParams, t: float, epsilon: float | None = None) -> float:
    """Rescaled OTOC; identical to epsilon^2 times the momentum variance."""
    eps = params.epsilon if epsilon is None else epsilon
    p1 = mean_p_theory(params, t)
    return eps * eps * (mean_p2_theory(params, t) - p1 * p1)


def dp_dt_theory(params: ModelParams, t: float) -> float:
    """Instantaneous drift velocity d<p>/dt."""
    x = _scaled_time(params, t)
    return -params.kick_k * math.sin(params.phi) * _drift_shape(x)


def s_p_theory(params: ModelParams, t: float) -> float:
    """Drift curvature d^2<p>/dt^2.

    Starts at -K sin(phi) lambda / (2 pi) and decays to 0 past t_c.
    """
    x = _scaled_time(params, t)
    prefactor = params.lam / (2.0 * math.pi)
    return -params.kick_k * math.sin(params.phi) * prefactor * _curvature_shape(x)


def s_e_theory(params: ModelParams, t: float) -> float:
    """Energy-growth curvature d^2<p^2>/dt^2, in the cancelled form.

    2 K^2 sin^2(phi) plus the curvature shape times
    (K^2 cos(2 phi) + lambda^2): K^2 + lambda^2 at t = 0, falling to
    2 K^2 sin^2(phi) past t_c.  Finite for all phi and lambda.
    """
    x = _scaled_time(params, t)
    k, phi = params.kick_k, params.phi
    coupling = k * k * math.cos(2.0 * phi) + params.lam * params.lam
    return 2.0 * (k * math.sin(phi)) ** 2 + _curvature_shape(x) * coupling


def s_c_theory(params: ModelParams, t: float, epsilon: float | None = None) -> float:
    """OTOC curvature d^2 C/dt^2 via the variance identity.

    The identity epsilon^2 [ S_E - 2 (d<p>/dt)^2 - 2 <p> S_p ] regrouped
    into shape form, K^2 sin^2(phi) V''(x) plus the S_E coupling times
    S''(x), which stays relatively accurate down the x^-3 tail where the
    raw subtraction loses all its digits.  Interpolates from
    epsilon^2 (K^2 + lambda^2) at t = 0 to 0 past t_c.
    """
    eps = params.epsilon if epsilon is None else epsilon
    x = _scaled_time(params, t)
    k, phi = params.kick_k, params.phi
    coupling = k * k * math.cos(2.0 * phi) + params.lam * params.lam
    ballistic = (k * math.sin(phi)) ** 2
    return eps * eps * (
        ballistic * _variance_shape(x) + coupling * _curvature_shape(x)
    )


def regime_label(params: ModelParams, t: float) -> str:
    """Classify t against the crossover time; lam = 0 never leaves 'small'."""
    if params.lam == 0.0:
        return REGIME_SMALL
    tc = t_c(params)
    if t < SMALL_T_FACTOR * tc:
        return REGIME_SMALL
    if t > LARGE_T_FACTOR * tc:
        return REGIME_LARGE
    return REGIME_CROSSOVER


@dataclass(frozen=True)
class TheoryAsymptote:
    """Leading-order values in one limiting regime."""

    mean_p: float
    mean_p2: float
    otoc: float
    s_p: float
    s_e: float
    s_c: float
    dp_dt: float


def small_t_asymptote(
    params: ModelParams, t: float, epsilon: float | None = None
) -> TheoryAsymptote:
    """Early-time laws (t << t_c): quadratic growth, constant curvatures."""
    eps = params.epsilon if epsilon is None else epsilon
    k, lam, phi = params.kick_k, params.lam, params.phi
    two_pi = 2.0 * math.pi
    ksq_plus = k * k + lam * lam
    return TheoryAsymptote(
        mean_p=-k * lam * math.sin(phi) * t * t / (2.0 * two_pi),
        mean_p2=0.5 * ksq_plus * t * t,
        otoc=0.5 * eps * eps * ksq_plus * t * t,
        s_p=-k * math.sin(phi) * lam / two_pi,
        s_e=ksq_plus,
        s_c=eps * eps * ksq_plus,
        dp_dt=-k * lam * math.sin(phi) * t / two_pi,
    )


def large_t_asymptote(
    params: ModelParams, t: float, epsilon: float | None = None
) -> TheoryAsymptote:
    """Late-time laws (t >> t_c): ballistic drift, linear spreading."""
    eps = params.epsilon if epsilon is None else epsilon
    k, lam, phi = params.kick_k, params.lam, params.phi
    if lam == 0.0:
        raise ZeroDivisionError("no late-time regime for lam = 0")
    two_pi = 2.0 * math.pi
    coupling = k * k * math.cos(2.0 * phi) + lam * lam
    sin_phi = math.sin(phi)
    return TheoryAsymptote(
        mean_p=-k * sin_phi * (t - math.pi / lam),
        mean_p2=(k * sin_phi * t) ** 2 + (two_pi / lam) * coupling * t,
        otoc=(two_pi * eps * eps / lam)
        * (0.5 * (1.0 + math.cos(2.0 * phi)) * k * k + lam * lam)
        * t,
        s_p=0.0,
        s_e=2.0 * (k * sin_phi) ** 2,
        s_c=0.0,
        dp_dt=-k * sin_phi,
    )


@dataclass(frozen=True)
class TheoryPoint:
    """Exact closed-form values at one time, with regime context."""

    t: float
    mean_p: float
    mean_p2: float
    otoc: float
    s_p: float
    s_e: float
    s_c: float
    dp_dt: float
    regime: str
    asymptote: TheoryAsymptote | None


def asymptotic_regime_values(
    params: ModelParams, t: float, epsilon: float | None = None
) -> TheoryPoint:
    """Exact values plus the limiting law that applies at this t.

    In the crossover window no limiting law applies and ``asymptote``
    is None.
    """
    regime = regime_label(params, t)
    if regime == REGIME_SMALL:
        asymptote = small_t_asymptote(params, t, epsilon)
    elif regime == REGIME_LARGE:
        asymptote = large_t_asymptote(params, t, epsilon)
    else:
        asymptote = None
    return TheoryPoint(
        t=t,
        mean_p=mean_p_theory(params, t),
        mean_p2=mean_p2_theory(params, t),
        otoc=otoc_theory(params, t, epsilon),
        s_p=s_p_theory(params, t),
        s_e=s_e_theory(params, t),
        s_c=s_c_theory(params, t, epsilon),
        dp_dt=dp_dt_theory(params, t),
        regime=regime,
        asymptote=asymptote,
    )
