"""Local power-series solutions of the confluent Heun equation about z = 0.

The Schrodinger equation of the linearly driven two-level system maps onto a
confluent Heun equation under ``z = sin(tau/2)**2``.  Only the two exponent
pairs ``(1/2, 1/2)`` and ``(-1/2, 1/2)`` are needed; their series coefficients
obey three-term recurrences that are generated here on the fly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

__all__ = [
    "PhysicalParams",
    "DimensionalParams",
    "MuPair",
    "MU_PP",
    "MU_MP",
    "HeunParams",
    "SeriesControl",
    "SeriesEval",
    "che_params",
    "recurrence_step",
    "eta0",
    "eta_at_half",
    "OMEGA_MIN",
]

# Below this scaled drive frequency the z=1/2 series lose accuracy.
OMEGA_MIN = 3.0 / 128.0


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensionless drive amplitude ``f = F/omega`` and Larmor frequency ``nu = omega0/omega``."""

    f: float
    nu: float

    def __post_init__(self):
        if not (math.isfinite(self.f) and math.isfinite(self.nu)):
            raise ValueError(f"parameters must be finite, got f={self.f}, nu={self.nu}")

    def canonical(self) -> PhysicalParams:
        # the spectrum only depends on |f| and |nu|
        return PhysicalParams(abs(self.f), abs(self.nu))


@dataclass(frozen=True)
class DimensionalParams:
    """Physical parameters in units with hbar = 1."""

    omega0: float
    omega: float
    F_amp: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    @property
    def f(self) -> float:
        return self.F_amp / self.omega

    @property
    def nu(self) -> float:
        return self.omega0 / self.omega

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def physical(self) -> PhysicalParams:
        return PhysicalParams(self.f, self.nu)

    def scaled(self, lam: float) -> DimensionalParams:
        return DimensionalParams(lam * self.omega0, lam * self.omega, lam * self.F_amp)


@dataclass(frozen=True)
class MuPair:
    mu0: float
    mu1: float

    def __post_init__(self):
        if (self.mu0, self.mu1) not in ((0.5, 0.5), (-0.5, 0.5)):
            raise ValueError(f"unsupported exponent pair ({self.mu0}, {self.mu1})")


MU_PP = MuPair(0.5, 0.5)
MU_MP = MuPair(-0.5, 0.5)


@dataclass(frozen=True)
class HeunParams:
    mu0: float
    mu1: float
    a: complex
    b0: complex
    b1: complex


@dataclass(frozen=True)
class SeriesControl:
    """Truncation and precision control for the series.

    ``precision`` is ``"double"`` (binary64 throughout), an integer number of
    decimal digits for mpmath summation, or ``"auto"``: sum in binary64 and
    redo the sum in mpmath when the largest term exceeds the result by more
    than ``cancel_limit``, with enough digits to absorb the cancellation.
    """

    max_terms: int = 100
    tol: float = 1e-14
    consecutive: int = 5
    precision: str | int = "auto"
    cancel_limit: float = 1e4

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if self.consecutive < 1:
            raise ValueError("consecutive must be >= 1")
        if self.precision not in ("auto", "double") and not (
            isinstance(self.precision, int) and self.precision >= 15
        ):
            raise ValueError(f"precision must be 'auto', 'double' or an int >= 15, got {self.precision!r}")


QUASI_CONTROL = SeriesControl(max_terms=100)
TRACE_CONTROL = SeriesControl(max_terms=1000)


@dataclass(frozen=True)
class SeriesEval:
    value: complex
    terms_used: int
    last_term_magnitude: float
    converged: bool
    # largest |tau_k z^k| seen; in binary64, peak * 2**-52 bounds the cancellation error
    peak_term: float = 1.0


def che_params(p: PhysicalParams) -> HeunParams:
    f, nu = p.f, p.nu
    return HeunParams(
        mu0=0.5,
        mu1=0.5,
        a=2j * f,
        b0=-(4j * f + 2 * nu**2 + 1) / 8,
        b1=1j * f,
    )


def recurrence_step(mu: MuPair, k: int, tau_k: complex, tau_km1: complex, p: PhysicalParams) -> complex:
    """Return the coefficient ``tau_{k+1}`` from ``tau_k`` and ``tau_{k-1}``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    f, nu2 = p.f, p.nu * p.nu
    if mu.mu0 > 0:
        den = 2 * (k + 1) * (2 * k + 1)
        return ((4 * k * k - nu2 - 4j * f * (2 * k + 1)) * tau_k + 8j * f * k * tau_km1) / den
    den = 2 * (k + 1) * (2 * k + 3)
    return ((4 * (k + 1) * (k - 2j * f) - nu2 + 1) * tau_k + 4j * f * (2 * k + 1) * tau_km1) / den


def _sum_series(z, mu, f, nu2, ctrl, one, zero, absval):
    # Works for python complex and mpmath mpc alike; only the rolling pair is kept.
    t_prev, t = zero, one
    total = one
    zk = one
    n_small = 0
    last = 1.0
    peak = 1.0
    terms = 1
    plus = mu.mu0 > 0
    for k in range(ctrl.max_terms - 1):
        if plus:
            den = 2 * (k + 1) * (2 * k + 1)
            t_next = ((4 * k * k - nu2 - 4j * f * (2 * k + 1)) * t + 8j * f * k * t_prev) / den
        else:
            den = 2 * (k + 1) * (2 * k + 3)
            t_next = ((4 * (k + 1) * (k - 2j * f) - nu2 + 1) * t + 4j * f * (2 * k + 1) * t_prev) / den
        t_prev, t = t, t_next
        zk = zk * z
        term = t * zk
        total = total + term
        terms += 1
        last = float(absval(term))
        peak = max(peak, last)
        if last <= ctrl.tol * float(absval(total)):
            n_small += 1
            if n_small >= ctrl.consecutive:
                return total, terms, last, True, peak
        else:
            n_small = 0
    return total, terms, last, False, peak


def eta0(z: float, mu: MuPair, p: PhysicalParams, ctrl: SeriesControl = QUASI_CONTROL) -> SeriesEval:
    """Partial sum of the series ``eta_0(z, mu) = sum_k tau_k z**k`` with ``tau_0 = 1``.

    Summation stops once ``ctrl.consecutive`` successive terms are all below
    ``ctrl.tol`` relative to the running sum, or after ``ctrl.max_terms``
    terms; in the latter case the result is flagged ``converged=False``.
    """
    if not 0.0 <= z < 1.0:
        raise ValueError(f"z must lie in [0, 1), got {z}")
    if z == 0.0:
        return SeriesEval(1.0 + 0j, 1, 0.0, True)
    if ctrl.precision in ("auto", "double"):
        total, terms, last, ok, peak = _sum_series(
            float(z), mu, float(p.f), float(p.nu) ** 2, ctrl, 1.0 + 0j, 0j, abs
        )
        res = SeriesEval(complex(total), terms, last, ok, peak)
        size = abs(res.value)
        if ctrl.precision == "double" or peak <= ctrl.cancel_limit * size:
            return res
        lost = math.log10(peak / max(size, peak * 1e-30))
        dps = 20 + math.ceil(lost)
    else:
        dps = ctrl.precision
    return _eta0_mp(z, mu, p, ctrl, dps)


def _eta0_mp(z, mu, p, ctrl, dps) -> SeriesEval:
    with mpmath.workdps(dps):
        f = mpmath.mpf(p.f)
        nu = mpmath.mpf(p.nu)
        total, terms, last, ok, peak = _sum_series(
            mpmath.mpf(z), mu, f, nu * nu, ctrl, mpmath.mpc(1), mpmath.mpc(0), mpmath.fabs
        )
        return SeriesEval(complex(total), terms, last, ok, peak)


def eta_at_half(p: PhysicalParams, ctrl: SeriesControl = QUASI_CONTROL) -> tuple[SeriesEval, SeriesEval]:
    """Return ``(eta_pp, eta_mp)``: the two series evaluated at ``z = 1/2``."""
    return eta0(0.5, MU_PP, p, ctrl), eta0(0.5, MU_MP, p, ctrl)
