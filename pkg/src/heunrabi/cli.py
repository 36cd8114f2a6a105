"""Command-line front end.

Exit codes: 0 success, 1 identity check failed, 2 invalid arguments,
3 series did not converge.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import limits, oracle
from .evolution import ConvergenceError, trace
from .floquet import SeriesBreakdown, analyze
from .heun import OMEGA_MIN, DimensionalParams, PhysicalParams, SeriesControl
from .sweep import (
    SWEEP_COLUMNS,
    SimplexGrid,
    branch_rows,
    gap_scan,
    quasienergy_curve,
    run_sweep,
    sweep_rows,
    sweep_summary,
    write_csv,
)

EXIT_OK, EXIT_IDENTITY, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3

TRACE_COLUMNS = ("tau", "u1", "v1", "u2", "v2", "norm_error")
BRANCH_COLUMNS = ("omega", "n", "sign", "energy")


class UsageError(Exception):
    pass


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _add_point_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--f", type=float, help="dimensionless drive amplitude F/omega")
    p.add_argument("--nu", type=float, help="dimensionless Larmor frequency omega0/omega")
    p.add_argument("--omega0", type=float, help="Larmor frequency (with --omega and --F)")
    p.add_argument("--omega", type=float, help="drive frequency")
    p.add_argument("--F", dest="F_amp", type=float, help="drive amplitude")
    p.add_argument("--force", action="store_true", help="run below the omega > 3/128 accuracy guard")


def _point(args) -> tuple[PhysicalParams, DimensionalParams | None]:
    dims = (args.omega0, args.omega, args.F_amp)
    if args.f is not None or args.nu is not None:
        if any(x is not None for x in dims):
            raise UsageError("give either --f/--nu or --omega0/--omega/--F, not both")
        f = 0.0 if args.f is None else args.f
        nu = 0.0 if args.nu is None else args.nu
        d = None
    elif all(x is not None for x in dims):
        if args.omega <= 0:
            raise UsageError("--omega must be positive")
        if args.omega0 < 0 or args.F_amp < 0:
            raise UsageError("--omega0 and --F must be non-negative")
        d = DimensionalParams(args.omega0, args.omega, args.F_amp)
        f, nu = d.f, d.nu
    else:
        raise UsageError("missing parameters: use --f/--nu or --omega0/--omega/--F")
    if not (math.isfinite(f) and math.isfinite(nu)):
        raise UsageError("parameters must be finite")
    if f < 0 or nu < 0:
        raise UsageError("--f and --nu must be non-negative")
    scaled_omega = 1.0 / (1.0 + f + nu)
    if scaled_omega <= OMEGA_MIN:
        if not args.force:
            raise UsageError(
                f"scaled drive frequency {scaled_omega:.4g} <= 3/128; series are unreliable (use --force)"
            )
        _warn(f"scaled drive frequency {scaled_omega:.4g} <= 3/128; results may be inaccurate")
    return PhysicalParams(f, nu), d


def _control(args, default_terms: int) -> SeriesControl:
    terms = default_terms if args.terms is None else args.terms
    if terms < 1:
        raise UsageError("--terms must be >= 1")
    prec = args.precision
    if prec not in ("auto", "double"):
        try:
            prec = int(prec)
        except ValueError:
            raise UsageError("--precision must be auto, double or a digit count") from None
    try:
        return SeriesControl(max_terms=terms, precision=prec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _c(z: complex) -> list[float]:
    return [z.real, z.imag]


def cmd_quasi(args) -> int:
    p, d = _point(args)
    ctrl = _control(args, 100)
    try:
        res = analyze(p, ctrl)
    except SeriesBreakdown as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    q, m = res.quarter, res.monodromy
    report = {
        "f": p.f,
        "nu": p.nu,
        "epsilon": res.quasi.epsilon,
        "r": m.r,
        "alpha": m.alpha,
        "alpha_degenerate": m.degenerate,
        "eta_pp": _c(q.eta_pp.value),
        "eta_mp": _c(q.eta_mp.value),
        "eta_pp_converged": q.eta_pp.converged,
        "eta_mp_converged": q.eta_mp.converged,
        "terms_used": q.terms_used,
        "terms": ctrl.max_terms,
        "converged": res.converged,
    }
    if d is not None:
        report["energy"] = res.quasi.physical(d.omega)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for key, val in report.items():
            print(f"{key} = {val}")
    if not res.converged:
        _warn("series did not converge within the term budget")
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_trace(args) -> int:
    p, _ = _point(args)
    ctrl = _control(args, 1000)
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    status = EXIT_OK
    try:
        res = analyze(p, ctrl)
        rows = trace(p, res.monodromy, args.samples, ctrl)
    except ConvergenceError as exc:
        _warn(str(exc))
        status = EXIT_CONVERGENCE
        res = analyze(p, ctrl)
        rows = trace(p, res.monodromy, args.samples, ctrl, strict=False)
    except SeriesBreakdown as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    if not res.converged:
        status = EXIT_CONVERGENCE
    stream, close = _open_out(args.out)
    try:
        write_csv(stream, TRACE_COLUMNS, ((t, *s.components, s.norm_error) for t, s in rows))
    finally:
        if close:
            stream.close()
    return status


def cmd_sweep(args) -> int:
    if args.depth < 1:
        raise UsageError("--depth must be >= 1")
    ctrl = _control(args, 100)
    grid = SimplexGrid(args.depth, args.omega_min)
    records = run_sweep(
        grid,
        ctrl,
        with_oracle=not args.no_oracle,
        cfg=oracle.IntegratorConfig(args.steps),
        workers=args.workers,
    )
    stream, close = _open_out(args.out)
    try:
        write_csv(stream, SWEEP_COLUMNS, sweep_rows(records))
    finally:
        if close:
            stream.close()
    summary = sweep_summary(records, grid, ctrl)
    text = json.dumps(summary, indent=2)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.out not in (None, "-") or args.summary is None:
        print(text, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    if summary["points_unconverged"]:
        _warn(f"{summary['points_unconverged']} points did not converge within {ctrl.max_terms} terms")
    return EXIT_OK


def cmd_branches(args) -> int:
    if not 0 < args.omega_lo < args.omega_hi:
        raise UsageError("need 0 < --omega-lo < --omega-hi")
    if args.samples < 3:
        raise UsageError("--samples must be >= 3")
    if args.n_min > args.n_max:
        raise UsageError("--n-min must not exceed --n-max")
    if args.omega0 < 0 or args.F_amp < 0:
        raise UsageError("--omega0 and --F must be non-negative")
    scaled = args.omega_lo / (args.omega_lo + args.omega0 + args.F_amp)
    if scaled <= OMEGA_MIN:
        if not args.force:
            raise UsageError(f"scaled frequency {scaled:.4g} at --omega-lo is <= 3/128 (use --force)")
        _warn("frequency range extends below the accuracy guard")
    ctrl = _control(args, 100)
    omegas = np.linspace(args.omega_lo, args.omega_hi, args.samples)
    energies, flags = quasienergy_curve(args.F_amp, args.omega0, omegas, ctrl)
    stream, close = _open_out(args.out)
    try:
        write_csv(stream, BRANCH_COLUMNS, branch_rows(omegas, energies, range(args.n_min, args.n_max + 1)))
    finally:
        if close:
            stream.close()
    minima = gap_scan(args.F_amp, args.omega0, omegas, energies, ctrl, kinds=tuple(args.gap_kinds))
    gaps = {
        "F": args.F_amp,
        "omega0": args.omega0,
        "minima": [{"kind": m.kind, "omega": float(m.omega), "gap": float(m.gap)} for m in minima],
        "points_unconverged": int(np.sum(~flags)),
    }
    text = json.dumps(gaps, indent=2)
    if args.gaps:
        with open(args.gaps, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_CONVERGENCE if not flags.all() else EXIT_OK


INTEGRAL_TOL, CLOSED_FORM_TOL, SLOPE_TOL = 1e-9, 1e-8, 1e-4
SLOPE_NU = 1e-4


def limit_suites(f_max: float, samples: int) -> dict:
    """Max errors of the closed-form identities on ``f`` in ``[0, f_max]``."""
    fs = [0.0] if f_max == 0 else np.linspace(0.0, f_max, samples).tolist()
    ctrl = SeriesControl(max_terms=1000)
    integral = closed = slope = 0.0
    table = []
    for f in fs:
        rep = limits.limit_check(f, ctrl)
        series_i = limits.i_integral(f, "series")
        integral = max(integral, abs(rep.integral_quadrature - rep.integral_closed), abs(series_i - rep.integral_closed))
        res0 = analyze(PhysicalParams(f, 0.0), ctrl)
        e_pp = res0.quarter.eta_pp.value
        closed = max(closed, abs(rep.eta_mp_series - rep.eta_mp_closed), abs(e_pp - limits.eta_pp_nu0(f)))
        eps = analyze(PhysicalParams(f, SLOPE_NU), ctrl).quasi.epsilon
        half_j0 = 0.5 * limits.bessel_j0(f)
        rel = abs(eps / SLOPE_NU - half_j0) / max(abs(half_j0), 1e-12)
        slope = max(slope, rel)
        table.append({"f": f, "eta_mp_series": _c(rep.eta_mp_series), "eta_mp_closed": _c(rep.eta_mp_closed)})
    return {
        "integral_max_error": integral,
        "closed_form_max_error": closed,
        "slope_max_rel_error": slope,
        "pass": integral < INTEGRAL_TOL and closed < CLOSED_FORM_TOL and slope < SLOPE_TOL,
        "table": table,
    }


def cmd_limits(args) -> int:
    if not 0 <= args.f_max <= limits.ARG_MAX:
        raise UsageError(f"--f-max must lie in [0, {limits.ARG_MAX}]")
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    res = limit_suites(args.f_max, args.samples)
    if args.json:
        print(json.dumps(res, indent=2))
    else:
        print(f"integral identity       max error = {res['integral_max_error']:.3e} (tol {INTEGRAL_TOL:g})")
        print(f"eta closed forms        max error = {res['closed_form_max_error']:.3e} (tol {CLOSED_FORM_TOL:g})")
        print(f"small-nu slope J0(f)/2  max rel   = {res['slope_max_rel_error']:.3e} (tol {SLOPE_TOL:g})")
        for row in res["table"]:
            s, c = row["eta_mp_series"], row["eta_mp_closed"]
            print(f"  f={row['f']:.4f}  series={s[0]:+.12f}{s[1]:+.12f}i  closed={c[0]:+.12f}{c[1]:+.12f}i")
    return EXIT_OK if res["pass"] else EXIT_IDENTITY


def cmd_oracle(args) -> int:
    p, _ = _point(args)
    cfg = oracle.IntegratorConfig(args.steps)
    u = oracle.propagator(p, 0.0, 2.0 * math.pi, cfg)
    m = oracle.numeric_r_alpha(p, cfg)
    eps = oracle.numeric_quasienergy(p, cfg).epsilon
    report = {
        "f": p.f,
        "nu": p.nu,
        "monodromy": [[_c(complex(x)) for x in row] for row in u],
        "unitarity_error": float(np.max(np.abs(u.conj().T @ u - np.eye(2)))),
        "r": m.r,
        "alpha": m.alpha,
        "epsilon": eps,
        "steps_per_period": cfg.steps_per_period,
    }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for key, val in report.items():
            print(f"{key} = {val}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heunrabi", description="Quasienergies and time evolution of the linearly driven two-level system"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def series_opts(p, default):
        p.add_argument("--terms", type=int, default=None, help=f"series term budget (default {default})")
        p.add_argument(
            "--precision", default="auto", help="auto (default), double, or mpmath digit count for the series"
        )

    q = sub.add_parser("quasi", help="quasienergy and auxiliary quantities at one point")
    _add_point_args(q)
    series_opts(q, 100)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_quasi)

    t = sub.add_parser("trace", help="state over one period as CSV")
    _add_point_args(t)
    series_opts(t, 1000)
    t.add_argument("--samples", type=int, default=512)
    t.add_argument("--out", default=None, help="CSV path (default stdout)")
    t.set_defaults(func=cmd_trace)

    s = sub.add_parser("sweep", help="simplex sweep with series vs RK4 comparison")
    s.add_argument("--depth", type=int, default=64)
    s.add_argument("--omega-min", type=float, default=OMEGA_MIN)
    series_opts(s, 100)
    s.add_argument("--no-oracle", action="store_true", help="skip the RK4 reference")
    s.add_argument("--steps", type=int, default=oracle.DEFAULT_CONFIG.steps_per_period)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default=None, help="CSV path (default stdout)")
    s.add_argument("--summary", default=None, help="write the JSON summary here")
    s.set_defaults(func=cmd_sweep)

    b = sub.add_parser("branches", help="quasienergy branches E(omega) + n omega and gap minima")
    b.add_argument("--F", dest="F_amp", type=float, default=0.5)
    b.add_argument("--omega0", type=float, default=1.0)
    b.add_argument("--omega-lo", type=float, default=0.1)
    b.add_argument("--omega-hi", type=float, default=1.5)
    b.add_argument("--samples", type=int, default=1401)
    b.add_argument("--n-min", type=int, default=-2)
    b.add_argument("--n-max", type=int, default=2)
    b.add_argument("--gap-kinds", nargs="+", choices=("resonance", "zero"), default=["resonance"])
    b.add_argument("--gaps", default=None, help="write the gap-minimum JSON here")
    b.add_argument("--force", action="store_true")
    series_opts(b, 100)
    b.add_argument("--out", default=None, help="CSV path (default stdout)")
    b.set_defaults(func=cmd_branches)

    lim = sub.add_parser("limits", help="weak static field identities")
    lim.add_argument("--f-max", type=float, default=5.0)
    lim.add_argument("--samples", type=int, default=20)
    lim.add_argument("--json", action="store_true")
    lim.set_defaults(func=cmd_limits)

    o = sub.add_parser("oracle", help="monodromy from direct RK4 integration")
    _add_point_args(o)
    o.add_argument("--steps", type=int, default=oracle.DEFAULT_CONFIG.steps_per_period)
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
