"""End-to-end release gate: one test per acceptance criterion.

Each test measures its criterion, registers the numbers with the
``acceptance`` recorder (so the terminal summary carries one PASS/FAIL
line per criterion), and only then asserts.  Tolerances here are the
release thresholds; the unit suites pin the same quantities far
tighter.  Two known gaps are recorded as such and carried by strict
xfails: the m = 3 two-term tail (third series term is 1.15e-5 of the
kept pair) and the t = 3000 soliton width reference (every profile
consistent with the recorded distribution sits 12% below it).
"""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

import oracles
from nhrotor import (
    ModelParams,
    analytic_log_norm,
    bessel_i,
    bessel_i_scaled,
    cli,
    dp_dt_theory,
    fit_drift,
    fit_exponential,
    fit_gaussian,
    mean_p2_theory,
    mean_p_theory,
    momentum_distribution,
    otoc_theory,
    run,
    s_c_theory,
    s_e_theory,
    s_p_theory,
    sweep_phase_diagram,
    t_c,
)
from nhrotor.analysis import SWEEP_QUANTITIES


def _rel(got: float, ref: float) -> float:
    if ref == 0.0:
        return abs(got)
    return abs(got - ref) / abs(ref)


# --------------------------------------------- 1: closed-form equivalence


def test_master_oracle_equivalence(lam_runs, acceptance):
    """Simulated moments track the closed forms to 1e-6 for 200 kicks."""
    worst = {"mean_p": 0.0, "mean_p2": 0.0, "otoc": 0.0, "trunc": 0.0}
    start_exact = True
    for lam in sorted(lam_runs):
        params, series = lam_runs[lam]
        eps2 = params.epsilon**2
        for row in series.rows():
            if row.t == 0:
                start_exact &= (
                    row.mean_p == 0.0 and row.mean_p2 == 0.0 and row.otoc == 0.0
                )
                continue
            worst["mean_p"] = max(
                worst["mean_p"], _rel(row.mean_p, mean_p_theory(params, row.t))
            )
            worst["mean_p2"] = max(
                worst["mean_p2"], _rel(row.mean_p2, mean_p2_theory(params, row.t))
            )
            worst["otoc"] = max(
                worst["otoc"], _rel(row.otoc, otoc_theory(params, row.t))
            )
            # The rescaled response must also match the simulation's own
            # momentum variance, bounding the finite-displacement error.
            variance = row.mean_p2 - row.mean_p**2
            worst["trunc"] = max(worst["trunc"], _rel(row.otoc / eps2, variance))
    ok = (
        start_exact
        and worst["mean_p"] <= 1e-6
        and worst["mean_p2"] <= 1e-6
        and worst["otoc"] <= 1e-6
        and worst["trunc"] <= 1e-4
    )
    acceptance.record(
        1,
        "master-oracle-equivalence",
        ok,
        "worst rel over lambda in {0.3, 0.5, 1}, t <= 200: "
        f"<p> {worst['mean_p']:.1e}, <p^2> {worst['mean_p2']:.1e}, "
        f"C {worst['otoc']:.1e}, eps-truncation {worst['trunc']:.1e}",
    )
    assert start_exact
    assert worst["mean_p"] <= 1e-6
    assert worst["mean_p2"] <= 1e-6
    assert worst["otoc"] <= 1e-6
    assert worst["trunc"] <= 1e-4


# ------------------------------------------------------ 2: norm growth law


def test_norm_law(acceptance):
    """log N stays within 1e-9 of log I_0(lambda t / 2 pi) to t = 3000."""
    params = ModelParams(lam=1.0)
    series, _ = run(params, 3000, record_every=1)
    finite = bool(np.all(np.isfinite(series.log_norm)))
    refs = np.array([analytic_log_norm(params, float(t)) for t in series.t])
    worst = float(np.max(np.abs(series.log_norm - refs)))
    ok = finite and worst <= 1e-9
    acceptance.record(
        2,
        "norm-law",
        ok,
        f"lambda=1, t<=3000: worst |log N - log I_0| {worst:.1e}, "
        f"final log N {series.log_norm[-1]:.1f} without overflow",
    )
    assert finite
    assert worst <= 1e-9


# ------------------------------------------------- 3: directed current


def test_crossover_current(long_run, acceptance):
    """Drift saturates at -K sin(phi) late and grows as t^2/4pi early."""
    params, series, _ = long_run
    late = (series.t >= 2500) & (series.t <= 3000)
    slope = float(
        np.polyfit(series.t[late].astype(np.float64), series.mean_p[late], 1)[0]
    )
    slope_rel = _rel(slope, 0.5)

    early_ref = -params.kick_k * params.lam * math.sin(params.phi) / (4.0 * math.pi)
    early_rel = max(
        _rel(series.at(t).mean_p / t**2, early_ref) for t in (1, 2, 3)
    )
    ok = slope_rel <= 0.01 and early_rel <= 0.05
    acceptance.record(
        3,
        "crossover-current",
        ok,
        f"late d<p>/dt {slope:.6f} vs 0.5 (rel {slope_rel:.1e}); "
        f"early <p>/t^2 vs {early_ref:.6f}, worst rel {early_rel:.1e}",
    )
    assert slope_rel <= 0.01
    assert early_rel <= 0.05


# --------------------------------------------- 4: localized-regime widths


def test_localized_exponential_fits(long_run, acceptance):
    """Exponential widths at t = 2 and 10 match the quoted values to 15%."""
    _, _, snaps = long_run
    rels = {}
    widths = {}
    for t, ref in ((2, 2.1), (10, 3.43)):
        result = fit_exponential(momentum_distribution(snaps[t]), t)
        widths[t] = result.xi
        rels[t] = _rel(result.xi, ref)
    ok = rels[2] <= 0.15 and rels[10] <= 0.15
    acceptance.record(
        4,
        "localized-exponential-fits",
        ok,
        f"xi(2) {widths[2]:.3f} vs 2.1 (rel {rels[2]:.1%}), "
        f"xi(10) {widths[10]:.3f} vs 3.43 (rel {rels[10]:.1%})",
    )
    assert rels[2] <= 0.15
    assert rels[10] <= 0.15


# --------------------------------------------------- 5: soliton regime


def test_gaussian_soliton(long_run, acceptance):
    """Late-time profile: center, width growth, and drift line."""
    params, _, snaps = long_run
    ts = (1000, 1500, 2000, 2500, 3000)
    fits = {t: fit_gaussian(momentum_distribution(snaps[t]), t) for t in ts}

    pc_rel = {
        1000: _rel(fits[1000].p_c, 500.0),
        3000: _rel(fits[3000].p_c, 1500.0),
    }
    sigma_rel_1000 = _rel(fits[1000].sigma, 3.9e4)
    sigmas = [fits[t].sigma for t in ts]
    widening = bool(np.all(np.diff(sigmas) > 0.0))

    # Physical ceiling for the t = 3000 width: a Gaussian profile with
    # the analytic momentum variance has sigma = 2 Var(t).
    ceiling = 2.0 * (
        mean_p2_theory(params, 3000.0) - mean_p_theory(params, 3000.0) ** 2
    )
    ceiling_rel = _rel(fits[3000].sigma, ceiling)

    drift = fit_drift(
        np.array(ts, dtype=np.float64), np.array([fits[t].p_c for t in ts])
    )
    drift_ref = dp_dt_theory(params, 2000.0)
    drift_rel = _rel(drift.slope, drift_ref)

    ok = (
        pc_rel[1000] <= 0.02
        and pc_rel[3000] <= 0.02
        and sigma_rel_1000 <= 0.10
        and widening
        and ceiling_rel <= 0.02
        and drift_rel <= 0.02
    )
    acceptance.record(
        5,
        "gaussian-soliton",
        ok,
        f"p_c(1000) {fits[1000].p_c:.1f} vs 500 (rel {pc_rel[1000]:.1%}), "
        f"p_c(3000) {fits[3000].p_c:.1f} vs 1500 (rel {pc_rel[3000]:.1%}); "
        f"sigma(1000) {fits[1000].sigma:.3e} vs 3.9e4 (rel {sigma_rel_1000:.1%}); "
        f"sigma(3000) {fits[3000].sigma:.3e} vs 2 Var {ceiling:.3e} "
        f"(rel {ceiling_rel:.1%}); drift slope {drift.slope:.6f} vs "
        f"{drift_ref:.6f} (rel {drift_rel:.1e})",
    )
    assert pc_rel[1000] <= 0.02
    assert pc_rel[3000] <= 0.02
    assert sigma_rel_1000 <= 0.10
    assert widening
    assert ceiling_rel <= 0.02
    assert drift_rel <= 0.02


@pytest.mark.xfail(
    strict=True,
    reason="sigma(3000) saturates at twice the momentum variance, 1.06e5; "
    "the quoted 1.2e5 sits 12% above every profile consistent with the "
    "recorded distribution",
)
def test_gaussian_soliton_sigma_quoted_width(long_run, acceptance):
    _, _, snaps = long_run
    result = fit_gaussian(momentum_distribution(snaps[3000]), 3000)
    rel = _rel(result.sigma, 1.2e5)
    acceptance.record(
        5,
        "gaussian-soliton",
        rel <= 0.10,
        f"sigma(3000) {result.sigma:.3e} vs quoted 1.2e5 (rel {rel:.1%}), "
        "above the 2 Var ceiling",
        expected_gap=True,
    )
    assert rel <= 0.10


# ------------------------------------------------ 6: growth-rate diagrams


def test_phase_diagram_zones(acceptance):
    """Curvature diagrams obey both limiting laws; simulation agrees."""
    params = ModelParams()
    k, phi = params.kick_k, params.phi
    t_values = np.arange(1, 501)
    lam_values = np.linspace(0.1, 1.5, 15)
    diagrams = {
        q: sweep_phase_diagram(params, t_values, lam_values, q)
        for q in SWEEP_QUANTITIES
    }

    sp_ref = -k * math.sin(phi) / (2.0 * math.pi)
    se_late_ref = 2.0 * (k * math.sin(phi)) ** 2
    worst = dict.fromkeys(
        ("sp_small", "se_small", "sc_small", "sp_large", "se_large", "sc_large"),
        0.0,
    )
    n_small = n_large = 0
    for i, lam in enumerate(lam_values):
        crossover = 2.0 * math.pi / lam
        ksq = k * k + lam * lam
        for j, t in enumerate(t_values):
            sp = diagrams["sp_over_lambda"].values[i, j]
            se = diagrams["se"].values[i, j]
            sc = diagrams["sc_over_eps2"].values[i, j]
            if t < 0.1 * crossover:
                n_small += 1
                worst["sp_small"] = max(worst["sp_small"], _rel(sp, sp_ref))
                worst["se_small"] = max(worst["se_small"], _rel(se, ksq))
                worst["sc_small"] = max(worst["sc_small"], _rel(sc, ksq))
            elif t > 10.0 * crossover:
                n_large += 1
                worst["sp_large"] = max(worst["sp_large"], abs(sp))
                worst["se_large"] = max(worst["se_large"], _rel(se, se_late_ref))
                worst["sc_large"] = max(worst["sc_large"], abs(sc) / ksq)

    zones_ok = (
        worst["sp_small"] <= 0.05
        and worst["se_small"] <= 0.05
        and worst["sc_small"] <= 0.05
        and worst["sp_large"] < 5e-3
        and worst["se_large"] <= 0.05
        and worst["sc_large"] < 5e-3
    )

    sim_t = np.arange(1, 201)
    worst_gap = 0.0
    clean = True
    for q in SWEEP_QUANTITIES:
        sim = sweep_phase_diagram(params, sim_t, lam_values, q, source="simulation")
        gap = float(np.max(np.abs(sim.values - diagrams[q].values[:, :200])))
        worst_gap = max(worst_gap, gap)
        clean &= all(flag == "" for row in sim.flags for flag in row)
    sim_ok = clean and worst_gap <= 5e-3

    acceptance.record(
        6,
        "phase-diagram-zones",
        zones_ok and sim_ok,
        f"{n_small} early / {n_large} late cells; worst early rel "
        f"S_p {worst['sp_small']:.1e}, S_E {worst['se_small']:.1e}, "
        f"S_C {worst['sc_small']:.1e}; worst late S_p {worst['sp_large']:.1e}, "
        f"S_E rel {worst['se_large']:.1e}, S_C/(K^2+l^2) {worst['sc_large']:.1e}; "
        f"sim-theory gap {worst_gap:.1e} over t <= 200",
    )
    assert worst["sp_small"] <= 0.05
    assert worst["se_small"] <= 0.05
    assert worst["sc_small"] <= 0.05
    assert worst["sp_large"] < 5e-3
    assert worst["se_large"] <= 0.05
    assert worst["sc_large"] < 5e-3
    assert clean
    assert worst_gap <= 5e-3


# ------------------------------------------------- 7: growth-law table


def test_growth_law_table(tmp_path, acceptance):
    """Long-time growth laws at phi = pi/2 and pi, via the report path."""
    assert cli.main(["table1", "--out", str(tmp_path), "--no-figures"]) == cli.EXIT_OK
    report = json.loads((tmp_path / "table1.json").read_text())
    half = report["columns"]["pi/2"]
    full = report["columns"]["pi"]

    params = ModelParams()
    k, lam, eps = params.kick_k, params.lam, params.epsilon
    # The report's references are recomputed here so a drift in either
    # place breaks the gate.
    assert half["mean_p"]["reference"] == -k
    assert half["mean_p2"]["reference"] == k**2
    assert half["otoc"]["reference"] == pytest.approx(
        2.0 * math.pi * eps**2 * lam, rel=1e-12
    )
    diffusive = 2.0 * math.pi * (k**2 + lam**2) / abs(lam)
    assert full["mean_p2"]["reference"] == pytest.approx(diffusive, rel=1e-12)
    assert full["otoc"]["reference"] == pytest.approx(
        eps**2 * diffusive, rel=1e-12
    )

    checks = {
        "pi/2 <p>": (half["mean_p"]["rel_err"], 0.01),
        "pi/2 <p^2>": (half["mean_p2"]["rel_err"], 0.02),
        "pi/2 C": (half["otoc"]["rel_err"], 0.02),
        "pi <p^2>": (full["mean_p2"]["rel_err"], 0.02),
        "pi C": (full["otoc"]["rel_err"], 0.02),
    }
    pt_residual = half["pt_residual"]
    odd_ceiling = full["mean_p"]["max_abs_over_t"]
    ok = (
        all(rel <= tol for rel, tol in checks.values())
        and pt_residual <= 1e-14
        and odd_ceiling <= 1e-8
    )
    detail = ", ".join(f"{name} rel {rel:.1e}" for name, (rel, _) in checks.items())
    acceptance.record(
        7,
        "growth-law-table",
        ok,
        f"{detail}; pi/2 PT residual {pt_residual:.1e}, "
        f"pi |<p>|/t {odd_ceiling:.1e}",
    )
    for name, (rel, tol) in checks.items():
        assert rel <= tol, name
    assert pt_residual <= 1e-14
    assert odd_ceiling <= 1e-8


# ---------------------------------------------------- 8: Bessel kernel


def test_bessel_kernel(acceptance):
    """Kernel matches the defining series to 1e-10 and its two-term tail."""
    xs = np.concatenate(([0.0], np.logspace(-6.0, math.log10(700.0), 60)))
    worst_scaled = worst_plain = 0.0
    for m in range(4):
        for x in xs:
            x = float(x)
            worst_scaled = max(
                worst_scaled, _rel(bessel_i_scaled(m, x), oracles.series_i_scaled(m, x))
            )
            worst_plain = max(
                worst_plain, _rel(bessel_i(m, x), oracles.series_i(m, x))
            )
    grid_ok = worst_scaled <= 1e-10 and worst_plain <= 1e-10

    tail_rels = {
        m: _rel(bessel_i_scaled(m, 800.0), oracles.two_term_tail(m, 800.0))
        for m in range(4)
    }
    tail_ok = tail_rels[0] <= 1e-6 and tail_rels[1] <= 1e-5 and tail_rels[2] <= 1e-5
    acceptance.record(
        8,
        "bessel-kernel",
        grid_ok and tail_ok,
        f"series grid worst rel {max(worst_scaled, worst_plain):.1e} "
        f"(m <= 3, x <= 700); two-term tail at x=800 rel "
        f"m=0 {tail_rels[0]:.1e}, m=1 {tail_rels[1]:.1e}, m=2 {tail_rels[2]:.1e}",
    )
    acceptance.record(
        8,
        "bessel-kernel",
        tail_rels[3] <= 1e-5,
        f"m=3 two-term tail rel {tail_rels[3]:.2e} vs 1e-5; the dropped "
        "third term is 1.15e-5 of the kept pair (xfailed in the kernel suite)",
        expected_gap=True,
    )
    assert worst_scaled <= 1e-10
    assert worst_plain <= 1e-10
    assert tail_ok


# ------------------------------------------------- 9: derivative chain


def test_derivative_chain(acceptance):
    """Curvatures match high-precision differences of the parent curves."""
    params = ModelParams()
    k, lam, phi, eps = params.kick_k, params.lam, params.phi, params.epsilon
    crossover = t_c(params)
    worst = {"s_p": 0.0, "s_e": 0.0, "s_c": 0.0}
    for factor in np.logspace(-1.0, 2.0, 13):
        t = float(factor * crossover)
        worst["s_p"] = max(
            worst["s_p"], _rel(s_p_theory(params, t), float(oracles.mp_s_p(k, lam, phi, t)))
        )
        worst["s_e"] = max(
            worst["s_e"], _rel(s_e_theory(params, t), float(oracles.mp_s_e(k, lam, phi, t)))
        )
        worst["s_c"] = max(
            worst["s_c"],
            _rel(s_c_theory(params, t), float(oracles.mp_s_c(k, lam, phi, t, eps))),
        )
    ok = all(value <= 1e-5 for value in worst.values())
    acceptance.record(
        9,
        "derivative-chain",
        ok,
        "worst rel vs mpmath second differences over t/t_c in [0.1, 100]: "
        f"S_p {worst['s_p']:.1e}, S_E {worst['s_e']:.1e}, S_C {worst['s_c']:.1e}",
    )
    assert worst["s_p"] <= 1e-5
    assert worst["s_e"] <= 1e-5
    assert worst["s_c"] <= 1e-5


# ---------------------------------------------- 10: Hermitian control


def test_hermitian_control(acceptance):
    """At lambda = 0 the norm is conserved and <p^2> = t^2/2 exactly."""
    params = ModelParams(lam=0.0)
    series, _ = run(params, 100, record_every=1)
    norm_worst = float(np.max(np.abs(np.exp(series.log_norm) - 1.0)))
    start_exact = series.at(0).mean_p2 == 0.0
    p2_worst = max(
        _rel(row.mean_p2, row.t**2 / 2.0) for row in series.rows() if row.t > 0
    )
    ok = start_exact and norm_worst <= 1e-12 and p2_worst <= 1e-9
    acceptance.record(
        10,
        "hermitian-control",
        ok,
        f"lambda=0, t<=100: worst |N-1| {norm_worst:.1e}, "
        f"worst <p^2> vs t^2/2 rel {p2_worst:.1e}",
    )
    assert start_exact
    assert norm_worst <= 1e-12
    assert p2_worst <= 1e-9
