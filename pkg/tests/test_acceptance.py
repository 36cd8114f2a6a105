"""Acceptance criteria, one test each.

Every test prints a single ``PASS`` or ``FAIL`` line with the measured
quantity, so ``pytest -v -s tests/test_acceptance.py`` doubles as a report.
"""

import math
import time

import numpy as np
import pytest

from conftest import REF_ALPHA, REF_R, random_simplex_points
from heunrabi.cli import limit_suites
from heunrabi.evolution import state_any, trace
from heunrabi.floquet import analyze, half_monodromy, quasienergy_of
from heunrabi.heun import (
    MU_MP,
    MU_PP,
    QUASI_CONTROL,
    DimensionalParams,
    PhysicalParams,
    SeriesControl,
    TRACE_CONTROL,
    eta0,
    recurrence_step,
)
from heunrabi.limits import limit_check
from heunrabi.oracle import IntegratorConfig, propagator, propagator_batch, trace_states
from heunrabi.states import T_SWAP
from heunrabi.sweep import SimplexGrid, gap_scan, run_sweep, sweep_summary

PI = math.pi
REF = PhysicalParams(0.5, 1.0)


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def test_criterion_1_reference_point(capsys):
    t0 = time.perf_counter()
    m = analyze(REF, QUASI_CONTROL).monodromy
    dt = time.perf_counter() - t0
    dr, da = abs(m.r - REF_R), abs(m.alpha - REF_ALPHA)
    ok = dr < 1e-5 and da < 1e-5 and dt < 1.0
    report(capsys, 1, ok, f"r={m.r:.7f} alpha={m.alpha:.6f} |dr|={dr:.1e} |dalpha|={da:.1e} t={dt:.3f}s")


def test_criterion_2_sweep_deviation(capsys):
    grid = SimplexGrid(64)
    t0 = time.perf_counter()
    records = run_sweep(grid, SeriesControl(max_terms=100), workers=1)
    dt = time.perf_counter() - t0
    s = sweep_summary(records, grid, SeriesControl(max_terms=100))
    ok = s["points_kept"] >= 500 and s["max_deviation"] < 1.3e-4 and dt < 120
    report(
        capsys, 2, ok,
        f"{s['points_kept']} points, max deviation {s['max_deviation']:.2e}, t={dt:.1f}s",
    )


def test_criterion_3_trace_agreement(capsys):
    m = analyze(REF, TRACE_CONTROL).monodromy
    rows = trace(REF, m, 512, TRACE_CONTROL)
    taus = [t for t, _ in rows]
    ref = trace_states(REF, taus, IntegratorConfig(40_000))
    err = max(
        max(abs(s.psi1 - o.psi1), abs(s.psi2 - o.psi2)) for (_, s), o in zip(rows, ref)
    )
    v1 = abs(rows[-1][1].psi1.imag)
    u2 = abs(state_any(PI, REF, m, TRACE_CONTROL).psi2.real)
    ok = err < 1e-6 and v1 < 1e-6 and u2 < 1e-6
    report(capsys, 3, ok, f"max |series - oracle| = {err:.1e}, |v1(2pi)| = {v1:.1e}, |u2(pi)| = {u2:.1e}")


def test_criterion_4_avoided_crossing(capsys):
    t0 = time.perf_counter()
    minima = gap_scan(0.5, 1.0, np.linspace(0.1, 1.5, 1401))
    dt = time.perf_counter() - t0
    near = [g for g in minima if abs(g.omega - 0.355776) < 0.05]
    ok = len(near) == 1 and abs(near[0].omega - 0.355776) < 1e-3 and dt < 30
    where = f"{near[0].omega:.6f}" if near else "none"
    report(capsys, 4, ok, f"gap minimum at omega={where}, t={dt:.1f}s")


def test_criterion_5_limit_identities(capsys):
    res = limit_suites(5.0, 20)
    quad = max(
        abs(limit_check(f).integral_quadrature - limit_check(f).integral_closed)
        for f in (0.0, 0.5, 1.0, 2.0, 5.0)
    )
    integral = max(quad, res["integral_max_error"])
    ok = integral < 1e-9 and res["closed_form_max_error"] < 1e-8 and res["slope_max_rel_error"] < 1e-4
    report(
        capsys, 5, ok,
        f"integral identity {integral:.1e}, eta closed forms {res['closed_form_max_error']:.1e}, "
        f"slope rel {res['slope_max_rel_error']:.1e}",
    )


def _dag(u):
    return np.conj(np.swapaxes(u, -1, -2))


def test_criterion_6_symmetry_suite(capsys):
    pts = random_simplex_points(50, seed=2024)
    f = np.array([p.f for p in pts])
    nu = np.array([p.nu for p in pts])
    cfg = IntegratorConfig(80_000)
    s = 0.37 * PI / 2
    u_q = propagator_batch(f, nu, 0.0, PI / 2, cfg)
    u_h = propagator_batch(f, nu, 0.0, PI, cfg)
    u_full = propagator_batch(f, nu, 0.0, 2 * PI, cfg)
    u_s = propagator_batch(f, nu, 0.0, s, cfg)
    u_shift = propagator_batch(f, nu, PI, PI + s, cfg)
    u_q2 = propagator_batch(f, nu, PI / 2, PI, cfg)
    u_mirror = propagator_batch(f, nu, 0.0, PI / 2 - s, cfg)
    u_after = propagator_batch(f, nu, 0.0, PI / 2 + s, cfg)
    T = T_SWAP
    errs = {
        "shift": np.max(np.abs(u_shift - T @ u_s @ T)),
        "full": np.max(np.abs(u_full - (T @ u_h) @ (T @ u_h))),
        "imag": max(np.max(np.abs(u_h[:, 0, 1].real)), np.max(np.abs(u_h[:, 1, 0].real))),
        "transpose": np.max(np.abs(u_q - np.swapaxes(u_q2, -1, -2))),
        "quarter": np.max(np.abs(u_after - np.conj(u_mirror) @ u_h)),
        "unitary": np.max(np.abs(_dag(u_full) @ u_full - np.eye(2))),
    }
    analytic = 0.0
    ctrl = SeriesControl(max_terms=1000, precision="auto")
    for p, uh in zip(pts, u_h):
        m = analyze(p, ctrl).monodromy
        analytic = max(analytic, np.max(np.abs(half_monodromy(m).matrix - uh)))
    errs["analytic"] = analytic
    ok = all(v < 1e-8 for v in errs.values())
    report(capsys, 6, ok, ", ".join(f"{k} {v:.1e}" for k, v in errs.items()))


def test_criterion_7_properties(capsys):
    # norm preservation along a full series trace and at many periods
    worst_norm = 0.0
    for p in random_simplex_points(6, seed=7, omega_min=0.05):
        m = analyze(p, TRACE_CONTROL).monodromy
        for _, st_ in trace(p, m, 65, TRACE_CONTROL):
            worst_norm = max(worst_norm, st_.norm_error)
        worst_norm = max(worst_norm, state_any(17.3 * PI, p, m, TRACE_CONTROL).norm_error)

    # eta0(0) = 1 with no rounding at all
    exact_origin = all(
        eta0(0.0, mu, p).value == 1 for mu in (MU_PP, MU_MP) for p in random_simplex_points(10, seed=3)
    )

    # first coefficient against its closed form
    tau1_exact = all(
        recurrence_step(MU_PP, 0, 1.0, 0.0, p) == -(p.nu**2) / 2 - 2j * p.f
        for p in random_simplex_points(50, seed=11)
    )

    # fourth order step halving
    ref = propagator(REF, 0.0, 2 * PI, IntegratorConfig(20_000))
    e1 = np.max(np.abs(propagator(REF, 0.0, 2 * PI, IntegratorConfig(100)) - ref))
    e2 = np.max(np.abs(propagator(REF, 0.0, 2 * PI, IntegratorConfig(200)) - ref))
    factor = e1 / e2

    # homogeneity under power-of-two scaling is exact in floating point
    homog = 0.0
    rng = np.random.default_rng(5)
    for _ in range(20):
        d = DimensionalParams(*rng.uniform(0.1, 1.0, 3))
        lam = 2.0 ** int(rng.integers(-6, 7))
        e = quasienergy_of(d.physical()).physical(d.omega)
        el = quasienergy_of(d.scaled(lam).physical()).physical(lam * d.omega)
        homog = max(homog, abs(el - lam * e))

    ok = worst_norm < 1e-8 and exact_origin and tau1_exact and factor >= 12 and homog == 0.0
    report(
        capsys, 7, ok,
        f"norm {worst_norm:.1e}, eta0(0)=1 {exact_origin}, tau1 exact {tau1_exact}, "
        f"RK factor {factor:.1f}, homogeneity {homog:.1e}",
    )
