"""Command-line interface: run configuration and bit-stable data export.

Five subcommands cover the full workflow: ``evolve`` (observable series
vs the closed forms), ``theory`` (closed-form curves alone), ``sweep``
((t, lambda) phase diagrams), ``fit`` (distribution fits and the drift
line), and ``table1`` (long-time growth laws and the PT-symmetry
residual for phi = pi/2 and pi).

Configuration is a flat ``key = value`` text file plus command-line
overrides; a flag beats the file, the file beats the default.  Unknown
keys are a hard error.  All CSV numbers are written with ``repr``, the
shortest round-trip form, so re-ingestion is exact and identical runs
produce identical bytes.

Exit codes: 0 success, 1 configuration error, 2 numerical error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, fields, replace as dc_replace
from pathlib import Path

import numpy as np

from . import analysis, theory
from .analysis import (
    SOURCE_SIMULATION,
    SOURCE_THEORY,
    SWEEP_QUANTITIES,
    FitError,
    fit_drift,
    fit_exponential,
    fit_gaussian,
    sweep_phase_diagram,
)
from .evolve import run
from .model import (
    RESONANT_HBAR,
    ModelParams,
    ResolutionError,
    kick_potential,
)
from .observables import momentum_distribution

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

EVOLVE_HEADER = (
    "t,log_norm,mean_p,mean_p2,otoc,mean_p_theory,mean_p2_theory,otoc_theory"
)
THEORY_HEADER = "t,mean_p,mean_p2,otoc,s_p,s_e,s_c,dp_dt,regime"
SWEEP_HEADER = "t,lambda,value,source,flag"


class ConfigError(ValueError):
    """Invalid configuration: unknown key, bad value, missing input."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one command invocation.

    Defaults reproduce the reference parameter point (K=1, phi=-pi/6,
    lambda=0.3, epsilon=1e-5) over the full three-thousand-kick span.
    """

    kick_k: float = 1.0
    lam: float = 0.3
    phi: float = -math.pi / 6.0
    hbar_eff: float = RESONANT_HBAR
    epsilon: float = 1e-5
    n_modes: int = 1024
    t_max: int = 3000
    record_every: int | None = None
    out_dir: str = "."
    snapshots: tuple[int, ...] = ()
    write_snapshots: bool = False
    figures: bool = True
    sweep_t: tuple[int, ...] = ()
    sweep_lambda: tuple[float, ...] = ()
    sweep_source: str = SOURCE_THEORY
    sweep_quantities: tuple[str, ...] = SWEEP_QUANTITIES
    theory_t: tuple[float, ...] = ()
    workers: int | None = None


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}

_TUPLE_INT_KEYS = {"snapshots", "sweep_t"}
_TUPLE_FLOAT_KEYS = {"sweep_lambda", "theory_t"}
_TUPLE_STR_KEYS = {"sweep_quantities"}
_INT_KEYS = {"n_modes", "t_max"}
_FLOAT_KEYS = {"kick_k", "lam", "phi", "hbar_eff", "epsilon"}
_BOOL_KEYS = {"write_snapshots", "figures"}
_STR_KEYS = {"out_dir", "sweep_source"}
_OPTIONAL_INT_KEYS = {"workers", "record_every"}


def _fmt(value) -> str:
    """Shortest round-trip text for one CSV or config cell."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            if raw not in ("true", "false"):
                raise ValueError(f"expected true/false, got {raw!r}")
            return raw == "true"
        if key in _STR_KEYS:
            return raw
        if key in _OPTIONAL_INT_KEYS:
            return None if raw == "" else int(raw)
        if key in _TUPLE_INT_KEYS:
            return tuple(int(s) for s in raw.split(",") if s.strip())
        if key in _TUPLE_FLOAT_KEYS:
            return tuple(float(s) for s in raw.split(",") if s.strip())
        if key in _TUPLE_STR_KEYS:
            return tuple(s.strip() for s in raw.split(",") if s.strip())
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {exc}") from exc
    raise ConfigError(f"unknown config key {key!r}")


def _format_value(key: str, value) -> str:
    if key in _TUPLE_INT_KEYS | _TUPLE_FLOAT_KEYS | _TUPLE_STR_KEYS:
        return ",".join(_fmt(v) for v in value)
    if key in _OPTIONAL_INT_KEYS:
        return "" if value is None else str(value)
    return _fmt(value)


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse flat ``key = value`` lines over ``base`` (default settings).

    Blank lines and lines starting with ``#`` are skipped; keys outside
    RunConfig raise ConfigError.
    """
    cfg = RunConfig() if base is None else base
    overrides = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        overrides[key] = _parse_value(key, raw)
    return dc_replace(cfg, **overrides)


def serialize_config(cfg: RunConfig) -> str:
    lines = [f"{f.name} = {_format_value(f.name, getattr(cfg, f.name))}" for f in fields(cfg)]
    return "\n".join(lines) + "\n"


def model_params(cfg: RunConfig) -> ModelParams:
    try:
        return ModelParams(
            kick_k=cfg.kick_k,
            lam=cfg.lam,
            phi=cfg.phi,
            hbar_eff=cfg.hbar_eff,
            epsilon=cfg.epsilon,
            n_modes=cfg.n_modes,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "run.cfg").write_text(serialize_config(cfg))
    return out


def _effective_record_every(cfg: RunConfig, t_max: int) -> int:
    # Dense sampling is only needed early; beyond a thousand kicks the
    # series is smooth and every tenth kick suffices.
    if cfg.record_every is not None:
        if cfg.record_every < 1:
            raise ConfigError("record_every must be >= 1")
        return cfg.record_every
    return 1 if t_max <= 1000 else 10


MAX_RESOLUTION_DOUBLINGS = 4


def _run_resolving(params: ModelParams, **kwargs):
    """Run, doubling n_modes on lattice-edge failures before giving up."""
    for _ in range(MAX_RESOLUTION_DOUBLINGS):
        try:
            return run(params, **kwargs), params
        except ResolutionError:
            params = params.replace(n_modes=2 * params.n_modes)
            print(
                f"note: state reached the lattice edge; retrying with "
                f"n_modes={params.n_modes}",
                file=sys.stderr,
            )
    return run(params, **kwargs), params


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header.split(","))
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_distribution(path: Path, dist) -> None:
    _write_csv(path, "n,weight", zip(dist.indices, dist.weights))


# ---------------------------------------------------------------- commands


def cmd_evolve(cfg: RunConfig) -> int:
    params = model_params(cfg)
    snapshot_times = cfg.snapshots if cfg.write_snapshots else ()
    for t in snapshot_times:
        if t < 0 or t > cfg.t_max:
            raise ConfigError(f"snapshot time {t} outside [0, t_max={cfg.t_max}]")
    (series, snaps), params = _run_resolving(
        params,
        t_max=cfg.t_max,
        record_every=_effective_record_every(cfg, cfg.t_max),
        snapshot_times=snapshot_times,
    )
    out = _out_dir(cfg)
    rows = [
        (
            int(t),
            ln,
            mp,
            mp2,
            ot,
            theory.mean_p_theory(params, float(t)),
            theory.mean_p2_theory(params, float(t)),
            theory.otoc_theory(params, float(t)),
        )
        for t, ln, mp, mp2, ot in series.rows()
    ]
    _write_csv(out / "evolve.csv", EVOLVE_HEADER, rows)
    for t in snapshot_times:
        _write_distribution(
            out / f"dist_t{t}.csv", momentum_distribution(snaps[t])
        )
    if cfg.figures:
        from . import figures

        figures.save_series_figure(out / "evolve.png", series, params)
    return EXIT_OK


def cmd_theory(cfg: RunConfig) -> int:
    params = model_params(cfg)
    if cfg.theory_t:
        ts = np.asarray(sorted(cfg.theory_t), dtype=np.float64)
        if ts[0] < 0.0:
            raise ConfigError("theory times must be >= 0")
    else:
        ts = np.arange(0, cfg.t_max + 1, dtype=np.float64)
    out = _out_dir(cfg)
    rows = [
        (
            t,
            theory.mean_p_theory(params, t),
            theory.mean_p2_theory(params, t),
            theory.otoc_theory(params, t),
            theory.s_p_theory(params, t),
            theory.s_e_theory(params, t),
            theory.s_c_theory(params, t),
            theory.dp_dt_theory(params, t),
            theory.regime_label(params, t),
        )
        for t in ts
    ]
    _write_csv(out / "theory.csv", THEORY_HEADER, rows)
    if cfg.figures:
        from . import figures

        figures.save_theory_figure(out / "theory.png", params, ts[ts > 0.0])
    return EXIT_OK


_GNUPLOT_TEMPLATE = """\
# Heatmaps of the growth-law diagrams with the crossover curve
# t_c = 2*pi/lambda overlaid.  Long-format CSV: t,lambda,value,source,flag.
set datafile separator comma
set logscale xy
set xlabel 't (kicks)'
set ylabel 'lambda'
set view map
set style fill solid
set palette rgbformulae 33,13,10
do for [name in "{names}"] {{
    set terminal pngcairo size 720,540
    set output name.'.png'
    set title name
    splot name.'.csv' every ::1 using 1:2:3 with points pt 5 ps 2 palette notitle, \\
          2*pi/x with lines lc rgb 'white' dt 2 title 't = t_c'
    unset output
}}
"""


def cmd_sweep(cfg: RunConfig) -> int:
    if not cfg.sweep_t or not cfg.sweep_lambda:
        raise ConfigError("sweep needs --sweep-t and --sweep-lambda axes")
    for q in cfg.sweep_quantities:
        if q not in SWEEP_QUANTITIES:
            raise ConfigError(
                f"unknown sweep quantity {q!r}; choose from {SWEEP_QUANTITIES}"
            )
    if cfg.sweep_source == "both":
        sources = (SOURCE_THEORY, SOURCE_SIMULATION)
    elif cfg.sweep_source in (SOURCE_THEORY, SOURCE_SIMULATION):
        sources = (cfg.sweep_source,)
    else:
        raise ConfigError(f"unknown sweep source {cfg.sweep_source!r}")

    params = model_params(cfg)
    out = _out_dir(cfg)
    names = []
    clean_cells = 0
    total_cells = 0
    for source in sources:
        for quantity in cfg.sweep_quantities:
            diagram = sweep_phase_diagram(
                params,
                cfg.sweep_t,
                cfg.sweep_lambda,
                quantity,
                source=source,
                max_workers=cfg.workers,
            )
            name = f"sweep_{quantity}_{source}"
            rows = []
            for i, lam in enumerate(diagram.lambda_values):
                for j, t in enumerate(diagram.t_values):
                    flag = diagram.flags[i][j]
                    rows.append((int(t), float(lam), diagram.values[i, j], source, flag))
                    total_cells += 1
                    clean_cells += flag == ""
            _write_csv(out / f"{name}.csv", SWEEP_HEADER, rows)
            names.append(name)
            if cfg.figures:
                from . import figures

                figures.save_sweep_figure(out / f"{name}.png", diagram)
    (out / "sweep.gp").write_text(_GNUPLOT_TEMPLATE.format(names=" ".join(names)))
    return EXIT_OK if clean_cells > 0 else EXIT_NUMERICAL


def cmd_fit(cfg: RunConfig) -> int:
    if not cfg.snapshots:
        raise ConfigError("fit needs --snapshots with at least one time")
    params = model_params(cfg)
    snapshot_times = tuple(sorted(set(cfg.snapshots)))
    if snapshot_times[0] < 0:
        raise ConfigError("snapshot times must be >= 0")
    t_max = max(snapshot_times)
    (_, snaps), params = _run_resolving(
        params,
        t_max=t_max,
        record_every=_effective_record_every(cfg, t_max),
        snapshot_times=snapshot_times,
    )
    crossover = theory.t_c(params) if params.lam > 0.0 else math.inf
    out = _out_dir(cfg)

    entries = []
    centers: list[tuple[int, float]] = []
    for t in snapshot_times:
        dist = momentum_distribution(snaps[t])
        dist_path = out / f"dist_t{t}.csv"
        _write_distribution(dist_path, dist)
        entry = {"t": t, "distribution": dist_path.name}
        try:
            if t < crossover:
                fit = fit_exponential(dist, t)
                entry.update(
                    kind=fit.kind,
                    xi=fit.xi,
                    xi_left=fit.xi_left,
                    xi_right=fit.xi_right,
                )
            else:
                fit = fit_gaussian(dist, t)
                entry.update(kind=fit.kind, p_c=fit.p_c, sigma=fit.sigma)
                centers.append((t, fit.p_c))
            entry.update(
                rms_log_residual=fit.rms_log_residual,
                support=list(fit.support),
                n_points=fit.n_points,
                flagged=fit.flagged,
            )
            if cfg.figures:
                from . import figures

                figures.save_fit_figure(out / f"fit_t{t}.png", dist, fit)
        except FitError as exc:
            entry["error"] = str(exc)
        entries.append(entry)

    report = {"snapshots": entries}
    if len(centers) >= 2:
        ts = np.array([t for t, _ in centers], dtype=np.float64)
        pcs = np.array([pc for _, pc in centers], dtype=np.float64)
        drift = fit_drift(ts, pcs)
        t_mid = 0.5 * (ts.min() + ts.max())
        reference = theory.dp_dt_theory(params, t_mid)
        report["drift"] = {
            "slope": drift.slope,
            "intercept": drift.intercept,
            "r_squared": drift.r_squared,
            "through_origin_slope": drift.through_origin_slope,
            "t_mid": t_mid,
            "dp_dt_theory": reference,
            "rel_err": abs(drift.slope - reference) / abs(reference),
        }
    (out / "fit_report.json").write_text(json.dumps(report, indent=2) + "\n")
    fitted = sum("error" not in e for e in entries)
    return EXIT_OK if fitted > 0 else EXIT_NUMERICAL


def _window(series, t_lo: float):
    keep = series.t >= t_lo
    return series.t[keep].astype(np.float64), keep


def _linear_slope(ts: np.ndarray, values: np.ndarray) -> float:
    slope, _ = np.polyfit(ts, values, 1)
    return float(slope)


def _t_squared_coefficient(ts: np.ndarray, values: np.ndarray) -> float:
    basis = np.column_stack([ts**2, ts, np.ones_like(ts)])
    coef, *_ = np.linalg.lstsq(basis, values, rcond=None)
    return float(coef[0])


def _log_log_exponent(ts: np.ndarray, values: np.ndarray) -> float | None:
    mag = np.abs(values)
    keep = mag > 0.0
    if keep.sum() < 2 or mag.max() < 1e-8 * ts.max():
        return None
    slope, _ = np.polyfit(np.log(ts[keep]), np.log(mag[keep]), 1)
    return float(slope)


def _pt_residual(params: ModelParams) -> float:
    theta = params.grid.theta
    v = kick_potential(theta, params)
    mirrored = v[(params.n_modes - np.arange(params.n_modes)) % params.n_modes]
    return float(np.max(np.abs(v - np.conj(mirrored))))


def _growth_cell(coefficient: float, reference: float, exponent) -> dict:
    cell = {
        "exponent": exponent,
        "coefficient": coefficient,
        "reference": reference,
    }
    if reference != 0.0:
        cell["rel_err"] = abs(coefficient - reference) / abs(reference)
    return cell


def cmd_table1(cfg: RunConfig) -> int:
    """Long-time growth laws at phi = pi/2 and pi, plus the PT residual.

    Laws are extracted from the second half of the run: linear slopes
    for the t-laws, the t^2 basis coefficient for ballistic growth.
    """
    out = _out_dir(cfg)
    t_lo = cfg.t_max / 2.0
    columns = {}
    curves = []
    for label, phi in (("pi/2", math.pi / 2.0), ("pi", math.pi)):
        params = model_params(cfg).replace(phi=phi)
        (series, _), params = _run_resolving(
            params,
            t_max=cfg.t_max,
            record_every=_effective_record_every(cfg, cfg.t_max),
        )
        ts, keep = _window(series, t_lo)
        lam = params.lam
        k = params.kick_k
        eps = params.epsilon

        mean_p = series.mean_p[keep]
        mean_p2 = series.mean_p2[keep]
        otoc = series.otoc[keep]

        col = {"pt_residual": _pt_residual(params)}
        if label == "pi/2":
            col["mean_p"] = _growth_cell(
                _linear_slope(ts, mean_p), -k, _log_log_exponent(ts, mean_p)
            )
            col["mean_p2"] = _growth_cell(
                _t_squared_coefficient(ts, mean_p2),
                k**2,
                _log_log_exponent(ts, mean_p2),
            )
            col["otoc"] = _growth_cell(
                _linear_slope(ts, otoc),
                2.0 * math.pi * eps**2 * lam,
                _log_log_exponent(ts, otoc),
            )
        else:
            col["mean_p"] = {
                "max_abs_over_t": float(np.max(np.abs(mean_p) / ts)),
                "coefficient": _linear_slope(ts, mean_p),
                "reference": 0.0,
                "exponent": _log_log_exponent(ts, mean_p),
            }
            col["mean_p2"] = _growth_cell(
                _linear_slope(ts, mean_p2),
                2.0 * math.pi * (k**2 + lam**2) / abs(lam),
                _log_log_exponent(ts, mean_p2),
            )
            col["otoc"] = _growth_cell(
                _linear_slope(ts, otoc),
                2.0 * math.pi * eps**2 * (k**2 + lam**2) / abs(lam),
                _log_log_exponent(ts, otoc),
            )
        columns[label] = col
        curves.append((f"<p^2>, phi={label}", ts, mean_p2, 2.0 if label == "pi/2" else 1.0,
                       abs(col["mean_p2"]["coefficient"])))
        curves.append((f"C, phi={label}", ts, otoc, 1.0,
                       abs(col["otoc"]["coefficient"])))

    report = {
        "t_max": cfg.t_max,
        "window": [t_lo, float(cfg.t_max)],
        "kick_k": cfg.kick_k,
        "lam": cfg.lam,
        "epsilon": cfg.epsilon,
        "columns": columns,
    }
    (out / "table1.json").write_text(json.dumps(report, indent=2) + "\n")
    (out / "table1.txt").write_text(_render_table1(columns))
    if cfg.figures:
        from . import figures

        figures.save_growth_figure(out / "table1_growth.png", curves)
    return EXIT_OK


def _render_table1(columns: dict) -> str:
    def cell(col, key):
        row = columns[col][key]
        if "rel_err" in row:
            return f"{row['coefficient']:+.6e} (ref {row['reference']:+.6e})"
        return f"{row['coefficient']:+.6e} (ref 0)"

    lines = [
        f"{'quantity':<14}{'phi = pi/2':<38}{'phi = pi':<38}",
        f"{'PT residual':<14}{columns['pi/2']['pt_residual']:<38.3e}"
        f"{columns['pi']['pt_residual']:<38.3e}",
        f"{'<p> slope':<14}{cell('pi/2', 'mean_p'):<38}{cell('pi', 'mean_p'):<38}",
        f"{'<p^2> law':<14}{cell('pi/2', 'mean_p2'):<38}{cell('pi', 'mean_p2'):<38}",
        f"{'C slope':<14}{cell('pi/2', 'otoc'):<38}{cell('pi', 'otoc'):<38}",
    ]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ entry point


class _Parser(argparse.ArgumentParser):
    """Argument errors map to the config-error exit code, not 2."""

    def error(self, message):
        raise ConfigError(message)


def _parse_int_axis(raw: str) -> tuple[int, ...]:
    """Integer axis: 'lo:hi', 'lo:hi:step', or a comma list."""
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) == 2:
            lo, hi, step = int(parts[0]), int(parts[1]), 1
        elif len(parts) == 3:
            lo, hi, step = int(parts[0]), int(parts[1]), int(parts[2])
        else:
            raise ValueError(f"bad axis spec {raw!r}")
        return tuple(range(lo, hi + 1, step))
    return tuple(int(s) for s in raw.split(",") if s.strip())


def _parse_float_axis(raw: str) -> tuple[float, ...]:
    """Float axis: 'lo:hi:n' (n linearly spaced points) or a comma list."""
    if ":" in raw:
        lo, hi, n = raw.split(":")
        return tuple(np.linspace(float(lo), float(hi), int(n)))
    return tuple(float(s) for s in raw.split(",") if s.strip())


def build_parser() -> _Parser:
    parser = _Parser(prog="nhrotor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = common.add_argument_group("run settings")
    g.add_argument("--config", type=str, help="flat key = value config file")
    g.add_argument("--out", dest="out_dir", type=str, help="output directory")
    g.add_argument("--n-modes", dest="n_modes", type=int)
    g.add_argument("--t-max", dest="t_max", type=int)
    g.add_argument("--lambda", dest="lam", type=float)
    g.add_argument("--phi", dest="phi", type=float)
    g.add_argument("--kick-k", dest="kick_k", type=float)
    g.add_argument("--epsilon", dest="epsilon", type=float)
    g.add_argument("--record-every", dest="record_every", type=int)
    g.add_argument(
        "--snapshots",
        dest="snapshots",
        type=lambda s: _parse_int_axis(s),
        help="comma list (or lo:hi[:step]) of kick counts",
    )
    g.add_argument(
        "--seedless",
        action="store_true",
        dest="_seedless",
        help="accepted for interface stability; runs are always deterministic",
    )
    g.add_argument(
        "--no-figures",
        dest="figures",
        action="store_false",
        help="skip PNG rendering next to the delimited output",
    )

    p = sub.add_parser("evolve", parents=[common], help="simulate and export the series")
    p.add_argument(
        "--write-snapshots",
        dest="write_snapshots",
        action="store_true",
        default=argparse.SUPPRESS,
        help="also write (n, weight) distributions at --snapshots times",
    )
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("theory", parents=[common], help="closed-form curves")
    p.add_argument(
        "--theory-t",
        dest="theory_t",
        type=lambda s: _parse_float_axis(s),
        default=argparse.SUPPRESS,
        help="comma list or lo:hi:n; default integers 0..t_max",
    )
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("sweep", parents=[common], help="(t, lambda) phase diagrams")
    p.add_argument(
        "--sweep-t",
        dest="sweep_t",
        type=lambda s: _parse_int_axis(s),
        default=argparse.SUPPRESS,
        help="kick axis: lo:hi[:step] or comma list",
    )
    p.add_argument(
        "--sweep-lambda",
        dest="sweep_lambda",
        type=lambda s: _parse_float_axis(s),
        default=argparse.SUPPRESS,
        help="lambda axis: lo:hi:n or comma list",
    )
    p.add_argument(
        "--source",
        dest="sweep_source",
        choices=(SOURCE_THEORY, SOURCE_SIMULATION, "both"),
        default=argparse.SUPPRESS,
    )
    p.add_argument(
        "--quantities",
        dest="sweep_quantities",
        type=lambda s: tuple(q.strip() for q in s.split(",") if q.strip()),
        default=argparse.SUPPRESS,
        help=f"comma list from {', '.join(SWEEP_QUANTITIES)}",
    )
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", parents=[common], help="distribution fits and drift line")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("table1", parents=[common], help="long-time growth laws")
    p.set_defaults(func=cmd_table1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
        overrides = {
            k: v
            for k, v in vars(namespace).items()
            if k in _FIELD_TYPES
        }
        cfg = RunConfig()
        config_path = getattr(namespace, "config", None)
        if config_path is not None:
            path = Path(config_path)
            if not path.exists():
                raise ConfigError(f"config file not found: {path}")
            cfg = parse_config(path.read_text(), base=cfg)
        cfg = dc_replace(cfg, **overrides)
        return namespace.func(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ResolutionError, OverflowError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
