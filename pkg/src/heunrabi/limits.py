"""Weak static field limit (``nu -> 0``): Bessel/Struve closed forms and checks.

For ``nu = 0`` the two series values at ``z = 1/2`` are known in closed form,
``eta_pp = exp(-i f)`` and ``eta_mp = pi/(2 sqrt 2) (J0(f) - i H0(f))``; the
quasienergy then reduces to ``(1/pi) arcsin(pi nu J0(f) / 2)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .heun import PhysicalParams, SeriesControl, eta_at_half

ARG_MAX = 30.0
_SERIES_MAX_TERMS = 400


def _check_arg(f: float) -> None:
    if not abs(f) <= ARG_MAX:
        raise ValueError(f"|f| must not exceed {ARG_MAX} for the ascending series, got {f}")


def bessel_j0(f: float) -> float:
    """``J0(f)`` from its ascending series."""
    _check_arg(f)
    q = -0.25 * f * f
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        total += term
        if abs(term) <= 1e-17 * abs(total) and k > 0.5 * abs(f):
            return total
        if k > _SERIES_MAX_TERMS:  # pragma: no cover - guarded by ARG_MAX
            raise ArithmeticError("J0 series failed to converge")


def struve_h0(f: float) -> float:
    """``H0(f)`` from its ascending series ``sum (-1)^k (f/2)^(2k+1) / Gamma(k+3/2)^2``."""
    _check_arg(f)
    if f == 0.0:
        return 0.0
    q = -0.25 * f * f
    # Gamma(3/2)^2 = pi/4
    term = 0.5 * f / (0.25 * math.pi)
    total = term
    k = 0
    while True:
        k += 1
        term *= q / ((k + 0.5) * (k + 0.5))
        total += term
        if abs(term) <= 1e-17 * abs(total) and k > 0.5 * abs(f):
            return total
        if k > _SERIES_MAX_TERMS:  # pragma: no cover
            raise ArithmeticError("H0 series failed to converge")


def _half_beta_table(n: int) -> list[float]:
    # B_{1/2}(k + 1/2, 1/2) = 2 * int_0^{pi/4} sin^{2k}(phi) dphi, by the reduction formula
    out = [0.5 * math.pi]
    s = 0.25 * math.pi
    for k in range(1, n):
        s = (2 * k - 1) / (2 * k) * s - 0.5**k / (2 * k)
        out.append(2.0 * s)
    return out


def _integral_series(f: float) -> complex:
    n_max = _SERIES_MAX_TERMS
    betas = _half_beta_table(n_max)
    x = 2j * f
    coef = 1.0 + 0j
    total = betas[0] + 0j
    for n in range(1, n_max):
        coef *= x / n
        term = coef * betas[n]
        total += term
        if abs(term) <= 1e-17 * abs(total) and n > 2 * abs(f):
            return total
    raise ArithmeticError(f"incomplete-Beta series for I({f}) did not converge")


def _integral_quadrature(f: float, panels: int = 16, order: int = 20) -> complex:
    # z = sin^2(theta/2) turns the integrand into exp(i f (1 - cos theta)) on [0, pi/2]
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 0.5 * math.pi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    theta = mid + half * x[None, :]
    vals = np.exp(1j * f * (1.0 - np.cos(theta)))
    return complex(np.sum(half * w[None, :] * vals))


def i_integral(f: float, method: str = "series") -> complex:
    """``I(f) = int_0^{1/2} exp(2 i f z) / sqrt(z (1 - z)) dz``.

    ``method="series"`` sums the incomplete-Beta expansion term by term;
    ``method="quadrature"`` uses composite Gauss-Legendre after removing
    both endpoint singularities.
    """
    _check_arg(f)
    if method == "series":
        return _integral_series(f)
    if method == "quadrature":
        return _integral_quadrature(f)
    raise ValueError(f"unknown method {method!r}")


def i_integral_closed(f: float) -> complex:
    return 0.5 * math.pi * cmath.exp(1j * f) * complex(bessel_j0(f), -struve_h0(f))


def eta_mp_nu0(f: float) -> complex:
    _check_arg(f)
    return math.pi / (2.0 * math.sqrt(2.0)) * complex(bessel_j0(f), -struve_h0(f))


def eta_pp_nu0(f: float) -> complex:
    return cmath.exp(-1j * f)


def quasienergy_leading(f: float, nu: float) -> float:
    """Leading small-``nu`` form ``(nu/2) J0(f)``."""
    return 0.5 * nu * bessel_j0(f)


def quasienergy_small_nu(f: float, nu: float) -> float:
    arg = 0.5 * math.pi * nu * bessel_j0(f)
    if abs(arg) > 1.0:
        raise ValueError(f"nu={nu} is too large for the small-nu formula (arcsin argument {arg:.3g})")
    return math.asin(arg) / math.pi


@dataclass(frozen=True)
class LimitCheckReport:
    f: float
    eta_mp_series: complex
    eta_mp_closed: complex
    integral_quadrature: complex
    integral_closed: complex
    max_abs_error: float


def limit_check(f: float, ctrl: SeriesControl | None = None) -> LimitCheckReport:
    """Compare the closed forms with the Heun series at ``nu = 0`` and with quadrature."""
    ctrl = ctrl or SeriesControl(max_terms=1000)
    _, e_mp = eta_at_half(PhysicalParams(f, 0.0), ctrl)
    closed = eta_mp_nu0(f)
    quad = i_integral(f, "quadrature")
    ic = i_integral_closed(f)
    err = max(abs(e_mp.value - closed), abs(quad - ic))
    return LimitCheckReport(f, e_mp.value, closed, quad, ic, err)
