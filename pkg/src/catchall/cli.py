"""Command-line interface: ``catchall {simulate,reduce,estimate,spectrum,mc}``.

Exit codes: 0 success, 2 flag or validation error, 3 data or parse error,
4 estimator-domain error (non-positive moment ratio).

Data files are CSV with a one-line header; floats are written with
``repr`` so they parse back to the identical double. Every data file gets a
``<out>.manifest.json`` sidecar with what is needed to regenerate it.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from ._accel import BACKEND
from .errors import (CatchallError, DataFormatError, DegenerateSeriesError, NonPositiveRatioError,
                     SeriesTooShortError)
from .estimate import (Method, SearchOptions, WeightScheme, estimate_catchall, estimate_closed_form,
                       profile_objective)
from .model import StructuralParams, asy_variance_factor, bias_constant, plim_k, reduce_to_arma
from .montecarlo import (ExperimentConfig, run_bias_experiment, run_spectral_coverage,
                         run_variance_experiment)
from .simulate import RNG_ALGORITHM, SeriesPath, SimConfig, observe, simulate_latent
from .spectral import (default_half_width, find_features, frequency_grid, identification_bounds,
                       periodogram, smooth, spectrum_ar1, spectrum_y)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_DOMAIN = 4


class UsageError(Exception):
    pass


# --- formatting helpers ----------------------------------------------------

def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else None
    return value


def write_csv(path, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    if path is None or str(path) == "-":
        sys.stdout.write(buf.getvalue())
        return
    Path(path).write_text(buf.getvalue())


def write_manifest(out, command: str, params: dict, seed=None) -> None:
    if out is None or str(out) == "-":
        return
    manifest = {
        "command": command,
        "params": _jsonable(params),
        "master_seed": seed,
        "rng": RNG_ALGORITHM,
        "backend": BACKEND,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    Path(str(out) + ".manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def emit(args, report: dict, text: str) -> None:
    if args.json:
        print(json.dumps(_jsonable(report), indent=2))
    else:
        print(text)


def read_series(path, column: str = "y") -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or column not in reader.fieldnames:
                raise DataFormatError(f"{path}: no column named {column!r}")
            values = [float(row[column]) for row in reader]
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DataFormatError):
            raise
        raise DataFormatError(f"{path}: malformed numeric value ({exc})") from None
    return np.array(values, dtype=np.float64)


def parse_horizons(text: str) -> list[int]:
    try:
        ks = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"cannot parse horizons {text!r}") from None
    if not ks or any(k < 1 for k in ks):
        raise UsageError("horizons must be a comma-separated list of integers >= 1")
    return ks


def _structural(args, strict_positive: bool = True) -> StructuralParams:
    if strict_positive and not 0.0 < args.theta < 1.0:
        raise UsageError(f"--theta must lie in (0, 1), got {args.theta!r}")
    return StructuralParams(args.theta, args.sigma2_eps, args.sigma2_eta)


def _dgp_flags(p, defaults=False):
    kw = {"type": float}
    p.add_argument("--theta", required=not defaults, default=0.9 if defaults else None, **kw)
    p.add_argument("--sigma2-eps", required=not defaults, default=1.0 if defaults else None, **kw)
    p.add_argument("--sigma2-eta", required=not defaults, default=1.0 if defaults else None, **kw)


# --- commands --------------------------------------------------------------

def cmd_simulate(args) -> int:
    p = _structural(args)
    cfg = SimConfig(args.length, args.burn_in, args.seed)
    x = simulate_latent(p, cfg)
    y = observe(x, p.sigma2_eta, cfg.seed)
    header = ["t", "y"] + (["x"] if args.emit_latent else [])
    t = range(1, cfg.length + 1)
    if args.emit_latent:
        rows = zip(t, y.values, x.values)
    else:
        rows = zip(t, y.values)
    write_csv(args.out, header, rows)
    params = {"theta": p.theta, "sigma2_eps": p.sigma2_eps, "sigma2_eta": p.sigma2_eta,
              "length": cfg.length, "burn_in": cfg.burn_in, "emit_latent": args.emit_latent}
    write_manifest(args.out, "simulate", params, cfg.seed)
    if args.out not in (None, "-"):
        report = dict(params, seed=cfg.seed, out=str(args.out),
                      sample_variance=float(np.var(y.values)))
        emit(args, report, f"wrote {cfg.length} rows to {args.out} "
                           f"(sample var of y = {report['sample_variance']:.6f})")
    return EXIT_OK


def cmd_reduce(args) -> int:
    p = _structural(args)
    ks = parse_horizons(args.horizons)
    a = reduce_to_arma(p)
    mom = bias_constant(p)
    report = {
        "theta": p.theta,
        "alpha": a.alpha,
        "sigma2_u": a.sigma2_u,
        "c": mom.c,
        "sigma2_x": mom.sigma2_x,
        "sigma2_y": mom.sigma2_y,
        "plims": [{"k": k, "value": plim_k(p, k)} for k in ks],
        "var_factors": [{"k": k, "value": asy_variance_factor(p.theta, k)} for k in ks],
    }
    lines = [f"{name:>9} = {report[name]!r}" for name in
             ("theta", "alpha", "sigma2_u", "c", "sigma2_x", "sigma2_y")]
    lines.append("    k  plim                 var_factor")
    for pl, vf in zip(report["plims"], report["var_factors"]):
        lines.append(f"{pl['k']:>5}  {pl['value']!r:<20} {vf['value']!r}")
    emit(args, report, "\n".join(lines))
    return EXIT_OK


def cmd_estimate(args) -> int:
    y = read_series(args.input, args.column)
    if y.shape[0] < 2:
        raise DataFormatError("input series needs at least 2 rows")
    if args.demean:
        y = y - y.mean()
    if not np.any(y != y[0]) or not np.any(y != 0.0):
        raise DegenerateSeriesError("input series has zero variance")
    path = SeriesPath(y)
    if args.k is not None:
        w = WeightScheme.point_mass(args.k)
    else:
        w = WeightScheme.parse(args.weights)
    method = args.method or ("closed" if args.k is not None else "minimize")
    opts = SearchOptions()
    if method == "closed":
        if not w.is_point_mass():
            raise UsageError("--method closed needs a single horizon")
        res = estimate_closed_form(path, next(iter(w.active)))
    else:
        res = estimate_catchall(path, w, opts)
    if args.profile:
        grid = np.linspace(opts.lo, opts.hi, args.profile_points)
        prof = profile_objective(path, w, grid)
        write_csv(args.profile, ["theta", "Q"], prof.tolist())
        write_manifest(args.profile, "estimate --profile",
                       {"input": str(args.input), "weights": w.label(), "demean": args.demean,
                        "points": args.profile_points})
    report = {
        "theta_hat": res.theta_hat,
        "objective": res.objective_value,
        "method": res.method.value,
        "weights": {str(k): v for k, v in w.weights.items()},
        "n_terms": {str(k): v for k, v in res.n_terms.items()},
        "outside_unit_interval": res.outside_unit_interval,
        "T": int(y.shape[0]),
    }
    flag = "  (outside (0,1))" if res.outside_unit_interval else ""
    emit(args, report,
         f"theta_hat = {res.theta_hat!r}{flag}\nobjective = {res.objective_value!r}\n"
         f"method    = {res.method.value}\nn_terms   = {report['n_terms']}")
    return EXIT_OK


def _features_report(curve):
    feats = find_features(curve)
    return {
        "peaks": [{"lambda": f, "value": v} for _, f, v in feats.peaks],
        "troughs": [{"lambda": f, "value": v} for _, f, v in feats.troughs],
        "global_peak": None if feats.global_peak() is None else feats.global_peak()[1],
    }


def cmd_spectrum(args) -> int:
    if args.theory:
        p = _structural(args)
        grid = frequency_grid(args.grid_size)
        fx = spectrum_ar1(p, grid)
        fy = spectrum_y(p, grid)
        b = identification_bounds(fy)
        header = ["lambda", "f_x", "f_y", "lower", "upper"]
        rows = zip(grid, fx.values, fy.values, b.lower.values, b.upper.values)
        params = {"theory": True, "theta": p.theta, "sigma2_eps": p.sigma2_eps,
                  "sigma2_eta": p.sigma2_eta, "grid_size": args.grid_size}
        curve = fy
    else:
        if args.input is None:
            raise UsageError("spectrum needs --in <csv> or --theory")
        y = read_series(args.input, args.column)
        if y.shape[0] < 8:
            raise SeriesTooShortError(f"spectrum needs at least 8 observations, got {y.shape[0]}")
        m = args.half_width if args.half_width is not None else default_half_width(y.shape[0])
        sm = smooth(periodogram(SeriesPath(y)), m)
        b = identification_bounds(sm)
        header = ["lambda", "f_hat", "lower", "upper"]
        rows = zip(sm.freqs, sm.values, b.lower.values, b.upper.values)
        params = {"theory": False, "input": str(args.input), "half_width": m, "T": int(y.shape[0])}
        curve = sm
    write_csv(args.out, header, rows)
    write_manifest(args.out, "spectrum", params)
    report = dict(params, f_bar=b.f_bar, **_features_report(curve))
    if args.out not in (None, "-"):
        emit(args, report,
             f"f_bar (upper bound on noise variance) = {b.f_bar!r}\n"
             f"global peak at lambda = {report['global_peak']!r}; "
             f"{len(report['peaks'])} peaks, {len(report['troughs'])} troughs")
    return EXIT_OK


def cmd_mc(args) -> int:
    p = _structural(args)
    ks = parse_horizons(args.horizons)
    weights = WeightScheme.parse(args.weights) if args.weights else None
    cfg = ExperimentConfig(p, args.length, args.replications, tuple(ks), weights,
                           args.seed, args.parallel, args.workers)
    params = {"experiment": args.experiment, "theta": p.theta, "sigma2_eps": p.sigma2_eps,
              "sigma2_eta": p.sigma2_eta, "T": cfg.sample_size, "R": cfg.replications,
              "horizons": list(cfg.horizons), "weights": weights.label() if weights else None,
              "parallel": cfg.parallel}
    if args.experiment == "bias":
        table = run_bias_experiment(cfg)
        header, records = table.columns, list(table.records())
        summary = {"rows": [dict(zip(header, r)) for r in records]}
    elif args.experiment == "variance":
        table = run_variance_experiment(cfg)
        header, records = table.columns, list(table.records())
        summary = {"rows": [dict(zip(header, r)) for r in records]}
    else:
        cov = run_spectral_coverage(cfg, args.half_width)
        params["half_width"] = cov.half_width
        header, records = cov.columns, list(cov.records())
        summary = cov.summary()
    write_csv(args.out, header, records)
    write_manifest(args.out, f"mc {args.experiment}", params, cfg.master_seed)
    if args.out not in (None, "-"):
        if "rows" in summary:
            cell = lambda v: f"{v:.6g}" if isinstance(v, float) else str(v)
            text = "\n".join([" ".join(f"{h:>16}" for h in header)] +
                             [" ".join(f"{cell(v):>16}" for v in r) for r in records])
        else:
            text = "\n".join(f"{k} = {v!r}" for k, v in summary.items())
        emit(args, dict(params, **summary), text)
    return EXIT_OK


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catchall", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable report on stdout")
        return sp

    sp = add("simulate", "simulate a noisy latent AR(1) path to CSV")
    _dgp_flags(sp)
    sp.add_argument("--length", "-T", type=int, required=True)
    sp.add_argument("--burn-in", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    sp.add_argument("--emit-latent", action="store_true", help="add the latent x column")
    sp.set_defaults(func=cmd_simulate)

    sp = add("reduce", "ARMA(1,1) reduction, bias constant and probability limits")
    _dgp_flags(sp)
    sp.add_argument("--horizons", default="1,2,5,10")
    sp.set_defaults(func=cmd_reduce)

    sp = add("estimate", "catch-all estimate from a CSV column")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--column", default="y")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--weights", help="k1:w1,k2:w2,...")
    sp.add_argument("--method", choices=("closed", "minimize"))
    sp.add_argument("--demean", action="store_true")
    sp.add_argument("--profile", help="write the (theta, Q) grid to this CSV")
    sp.add_argument("--profile-points", type=int, default=512)
    sp.set_defaults(func=cmd_estimate)

    sp = add("spectrum", "smoothed periodogram or theoretical spectra with bounds")
    sp.add_argument("--in", dest="input")
    sp.add_argument("--column", default="y")
    sp.add_argument("--half-width", type=int)
    sp.add_argument("--theory", action="store_true")
    sp.add_argument("--theta", type=float)
    sp.add_argument("--sigma2-eps", type=float)
    sp.add_argument("--sigma2-eta", type=float)
    sp.add_argument("--grid-size", type=int, default=4096)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_spectrum)

    sp = add("mc", "Monte Carlo experiments")
    sp.add_argument("experiment", choices=("bias", "variance", "spectral"))
    _dgp_flags(sp, defaults=True)
    sp.add_argument("--length", "-T", type=int, default=5000)
    sp.add_argument("--replications", "-R", type=int, default=500)
    sp.add_argument("--horizons", default="1,2,5,10")
    sp.add_argument("--weights")
    sp.add_argument("--half-width", type=int)
    sp.add_argument("--seed", type=int, default=20240101)
    sp.add_argument("--parallel", action="store_true")
    sp.add_argument("--workers", type=int)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_mc)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "spectrum" and args.theory:
        missing = [f for f in ("theta", "sigma2_eps", "sigma2_eta") if getattr(args, f) is None]
        if missing:
            parser.error("--theory needs " + ", ".join("--" + m.replace("_", "-") for m in missing))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"catchall: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonPositiveRatioError as exc:
        print(f"catchall: estimator domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (DataFormatError, SeriesTooShortError) as exc:
        print(f"catchall: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CatchallError as exc:
        print(f"catchall: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
