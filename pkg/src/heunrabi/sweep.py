"""Parameter sweeps over the simplex ``omega0 + omega + F = 1`` and branch scans."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .floquet import SeriesBreakdown, analyze
from .heun import OMEGA_MIN, QUASI_CONTROL, DimensionalParams, SeriesControl
from .oracle import DEFAULT_CONFIG, IntegratorConfig, numeric_quasienergy_batch

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SimplexGrid:
    """Interior points of the barycentric lattice ``(i, j, k) / depth``.

    Coordinates are ``(omega0, omega, F_amp)``; points with
    ``omega <= omega_min`` are dropped.  A depth-``d`` lattice has
    ``(d-1)(d-2)/2`` interior points before filtering.
    """

    depth: int
    omega_min: float = OMEGA_MIN

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")

    def interior(self) -> list[tuple[float, float, float]]:
        d = self.depth
        return [(i / d, j / d, (d - i - j) / d) for i in range(1, d - 1) for j in range(1, d - i)]

    @property
    def points(self) -> list[tuple[float, float, float]]:
        return [pt for pt in self.interior() if pt[1] > self.omega_min]

    @property
    def points_total(self) -> int:
        return (self.depth - 1) * (self.depth - 2) // 2 if self.depth >= 3 else 0


@dataclass(frozen=True)
class SweepRecord:
    point: DimensionalParams
    eps_series: float
    eps_oracle: float
    deviation: float
    terms_used: int
    converged: bool
    r: float = math.nan
    alpha: float = math.nan

    @property
    def energy(self) -> float:
        return self.point.omega * self.eps_series


SWEEP_COLUMNS = (
    "omega0", "omega", "F", "f", "nu", "r", "alpha",
    "eps_series", "eps_oracle", "deviation", "energy", "terms_used", "converged",
)


def _series_point(args):
    (w0, w, F), ctrl = args
    d = DimensionalParams(w0, w, F)
    try:
        res = analyze(d.physical(), ctrl)
    except SeriesBreakdown:
        return (math.nan, math.nan, math.nan, 0, False)
    return (res.quasi.epsilon, res.monodromy.r, res.monodromy.alpha, res.quarter.terms_used, res.converged)


def run_sweep(
    grid: SimplexGrid,
    ctrl: SeriesControl = QUASI_CONTROL,
    with_oracle: bool = True,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    workers: int = 1,
) -> list[SweepRecord]:
    """Series quasienergy for every grid point, optionally against the RK4 reference.

    Records come back in grid order regardless of ``workers``.
    """
    pts = grid.points
    jobs = [(pt, ctrl) for pt in pts]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            series = list(pool.map(_series_point, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        series = [_series_point(j) for j in jobs]
    if with_oracle and pts:
        arr = np.array(pts)
        oracle = numeric_quasienergy_batch(arr[:, 2] / arr[:, 1], arr[:, 0] / arr[:, 1], cfg)
    else:
        oracle = np.full(len(pts), math.nan)
    out = []
    for (w0, w, F), (eps, r, alpha, terms, ok), eo in zip(pts, series, oracle):
        eo = float(eo)
        out.append(
            SweepRecord(DimensionalParams(w0, w, F), eps, eo, abs(eps - eo), terms, ok, r, alpha)
        )
    return out


def sweep_summary(records: list[SweepRecord], grid: SimplexGrid, ctrl: SeriesControl) -> dict:
    devs = [rec.deviation for rec in records if not math.isnan(rec.deviation)]
    return {
        "max_deviation": max(devs) if devs else None,
        "points_total": grid.points_total,
        "points_kept": len(records),
        "terms": ctrl.max_terms,
        "depth": grid.depth,
        "omega_min": grid.omega_min,
        "points_unconverged": sum(not rec.converged for rec in records),
    }


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def write_csv(stream, header, rows) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])


def sweep_rows(records: list[SweepRecord]):
    for rec in records:
        d = rec.point
        yield (
            d.omega0, d.omega, d.F_amp, d.f, d.nu, rec.r, rec.alpha,
            rec.eps_series, rec.eps_oracle, rec.deviation, rec.energy, rec.terms_used, rec.converged,
        )


def sweep_csv(records: list[SweepRecord]) -> str:
    buf = io.StringIO()
    write_csv(buf, SWEEP_COLUMNS, sweep_rows(records))
    return buf.getvalue()


# --- quasienergy branches as functions of the drive frequency ---------------


def quasienergy_curve(F_amp: float, omega0: float, omegas, ctrl: SeriesControl = QUASI_CONTROL):
    """Physical quasienergy ``E(omega)`` and convergence flags along a frequency grid."""
    energies, flags = [], []
    for w in omegas:
        d = DimensionalParams(omega0, float(w), F_amp)
        res = analyze(d.physical().canonical(), ctrl)
        energies.append(res.quasi.physical(d.omega))
        flags.append(res.converged)
    return np.array(energies), np.array(flags)


def branch_rows(omegas, energies, n_range: range):
    """Rows ``(omega, n, sign, energy)`` for the branches ``sign * E + n * omega``."""
    for w, e in zip(omegas, energies):
        for n in n_range:
            for sign in (1, -1):
                yield (float(w), n, sign, sign * float(e) + n * float(w))


def resonance_gap(F_amp: float, omega0: float, omega: float, ctrl: SeriesControl = QUASI_CONTROL) -> float:
    """Gap ``omega - 2|E|`` between ``|E|`` and its partner branch ``omega - |E|``."""
    e, _ = quasienergy_curve(F_amp, omega0, [omega], ctrl)
    return omega - 2.0 * abs(float(e[0]))


def zero_gap(F_amp: float, omega0: float, omega: float, ctrl: SeriesControl = QUASI_CONTROL) -> float:
    """Gap ``2|E|`` between the branches ``+E`` and ``-E``."""
    e, _ = quasienergy_curve(F_amp, omega0, [omega], ctrl)
    return 2.0 * abs(float(e[0]))


def golden_section(fun, lo: float, hi: float, xtol: float = 1e-9, max_iter: int = 200) -> tuple[float, float]:
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)


@dataclass(frozen=True)
class GapMinimum:
    kind: str
    omega: float
    gap: float


def gap_scan(
    F_amp: float,
    omega0: float,
    omegas,
    energies=None,
    ctrl: SeriesControl = QUASI_CONTROL,
    kinds: tuple[str, ...] = ("resonance",),
    xtol: float = 1e-9,
) -> list[GapMinimum]:
    """Local minima of inter-branch gaps, refined by golden section.

    The coarse grid ``omegas`` brackets each interior local minimum; the
    bracket is then narrowed to ``xtol``.  ``"resonance"`` tracks the pair
    ``|E|`` / ``omega - |E|`` where avoided crossings occur, ``"zero"`` the
    pair ``+E`` / ``-E``.
    """
    omegas = np.asarray(omegas, dtype=float)
    if energies is None:
        energies, _ = quasienergy_curve(F_amp, omega0, omegas, ctrl)
    gap_funcs = {"resonance": resonance_gap, "zero": zero_gap}
    coarse = {"resonance": omegas - 2.0 * np.abs(energies), "zero": 2.0 * np.abs(energies)}
    found = []
    for kind in kinds:
        g = coarse[kind]
        fun = gap_funcs[kind]
        for i in range(1, len(g) - 1):
            if g[i] <= g[i - 1] and g[i] < g[i + 1]:
                w, gmin = golden_section(
                    lambda x, fun=fun: fun(F_amp, omega0, x, ctrl), omegas[i - 1], omegas[i + 1], xtol
                )
                found.append(GapMinimum(kind, w, gmin))
    found.sort(key=lambda m: m.omega)
    return found
