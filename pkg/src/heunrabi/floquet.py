"""Quarter-period reduction: auxiliary quantities, monodromy and quasienergy.

The half-period propagator has the symmetric form
``[[sqrt(1-r^2) e^{i alpha}, i r], [i r, sqrt(1-r^2) e^{-i alpha}]]`` and is
fixed by the state at ``tau = pi/2``.  The full-period monodromy and the
quasienergy follow from ``r`` and ``alpha`` alone.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .heun import (
    QUASI_CONTROL,
    DimensionalParams,
    PhysicalParams,
    SeriesControl,
    SeriesEval,
    eta_at_half,
)
from .states import EvolutionMatrix

R_CLAMP_TOL = 1e-8
DEGENERATE_TOL = 1e-12


class SeriesBreakdown(ArithmeticError):
    """Series values are inconsistent with a unitary propagator."""


@dataclass(frozen=True)
class QuarterData:
    """``a = psi1(pi/2)`` and ``b = psi2(pi/2)`` plus the series that produced them."""

    a: complex
    b: complex
    eta_pp: SeriesEval | None = None
    eta_mp: SeriesEval | None = None

    @property
    def converged(self) -> bool:
        return all(e is None or e.converged for e in (self.eta_pp, self.eta_mp))

    @property
    def terms_used(self) -> int:
        return max((e.terms_used for e in (self.eta_pp, self.eta_mp) if e is not None), default=0)

    @property
    def norm_error(self) -> float:
        return abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1.0)


@dataclass(frozen=True)
class MonodromyData:
    r: float
    alpha: float
    degenerate: bool = False

    def __post_init__(self):
        if not -1.0 <= self.r <= 1.0:
            raise ValueError(f"r outside [-1, 1]: {self.r}")

    @property
    def root(self) -> float:
        """``sqrt(1 - r^2)``."""
        return math.sqrt(max(0.0, 1.0 - self.r * self.r))


@dataclass(frozen=True)
class Quasienergy:
    """Principal dimensionless quasienergy; the Floquet pair is ``(+epsilon, -epsilon)``."""

    epsilon: float

    @property
    def pair(self) -> tuple[float, float]:
        return (self.epsilon, -self.epsilon)

    def physical(self, omega: float, hbar: float = 1.0) -> float:
        return hbar * omega * self.epsilon


def quarter_data(p: PhysicalParams, ctrl: SeriesControl = QUASI_CONTROL) -> QuarterData:
    eta_pp, eta_mp = eta_at_half(p, ctrl)
    half_f = 0.5 * p.f
    a = cmath.exp(1j * half_f) * eta_pp.value
    b = -1j * p.nu * cmath.exp(-1j * half_f) * math.sqrt(0.5) * eta_mp.value.conjugate()
    return QuarterData(a, b, eta_pp, eta_mp)


def _principal_arg(w: complex) -> float:
    phi = cmath.phase(w)
    return math.pi if phi <= -math.pi else phi


def r_alpha(q: QuarterData) -> MonodromyData:
    """Auxiliary quantities ``r = 2 Im(conj(a) b)`` and ``alpha = arg(a^2 + b^2)``.

    ``|r|`` up to ``1 + 1e-8`` is clamped to 1; anything beyond raises
    :class:`SeriesBreakdown`.  When ``a^2 + b^2`` vanishes the phase is
    meaningless and ``alpha = 0`` is reported with ``degenerate=True``.
    """
    a, b = q.a, q.b
    r = 2.0 * (a.conjugate() * b).imag
    if abs(r) > 1.0 + R_CLAMP_TOL:
        raise SeriesBreakdown(f"|r| = {abs(r):.3g} exceeds 1; series values are unreliable")
    r = max(-1.0, min(1.0, r))
    w = a * a + b * b
    if abs(w) < DEGENERATE_TOL:
        return MonodromyData(r, 0.0, degenerate=True)
    return MonodromyData(r, _principal_arg(w))


def r_from_etas(eta_pp: complex, eta_mp: complex, p: PhysicalParams) -> float:
    return -math.sqrt(2.0) * p.nu * (cmath.exp(1j * p.f) * eta_pp * eta_mp).real


def alpha_from_etas(eta_pp: complex, eta_mp: complex, p: PhysicalParams) -> float:
    w = cmath.exp(1j * p.f) * eta_pp**2 - 0.5 * p.nu**2 * cmath.exp(-1j * p.f) * eta_mp.conjugate() ** 2
    return _principal_arg(w)


def quasienergy(m: MonodromyData) -> Quasienergy:
    # sign chosen so that epsilon -> nu/2 for weak drive
    return Quasienergy(-math.asin(m.r) / math.pi)


def eigenvalues(m: MonodromyData) -> tuple[complex, complex]:
    """Eigenvalues ``i r +- sqrt(1 - r^2)`` of the row-swapped half-period propagator."""
    return (complex(m.root, m.r), complex(-m.root, m.r))


def half_monodromy(m: MonodromyData) -> EvolutionMatrix:
    return EvolutionMatrix(m.root * cmath.exp(1j * m.alpha), 1j * m.r)


def full_monodromy(m: MonodromyData) -> EvolutionMatrix:
    r, c = m.r, m.root
    return EvolutionMatrix(1.0 - 2.0 * r * r, 2j * r * c * cmath.exp(1j * m.alpha))


def monodromy_power(m: MonodromyData, k: int) -> EvolutionMatrix:
    """``U(2 pi, 0)**k`` in closed form.

    With ``r = sin(theta)`` the full monodromy is ``cos(2 theta) + i sin(2 theta) N``
    where ``N`` is the involution ``[[0, e^{-i alpha}], [e^{i alpha}, 0]]``.
    """
    theta = math.asin(m.r)
    phase = 2.0 * k * theta
    return EvolutionMatrix(math.cos(phase), 1j * math.sin(phase) * cmath.exp(1j * m.alpha))


@dataclass(frozen=True)
class FloquetResult:
    params: PhysicalParams
    quarter: QuarterData
    monodromy: MonodromyData
    quasi: Quasienergy

    @property
    def converged(self) -> bool:
        return self.quarter.converged


def analyze(p: PhysicalParams, ctrl: SeriesControl = QUASI_CONTROL) -> FloquetResult:
    """Run the whole pipeline for one parameter point."""
    q = quarter_data(p, ctrl)
    m = r_alpha(q)
    return FloquetResult(p, q, m, quasienergy(m))


def quasienergy_of(p: PhysicalParams, ctrl: SeriesControl = QUASI_CONTROL) -> Quasienergy:
    return analyze(p.canonical(), ctrl).quasi


def branch_energies(
    d: DimensionalParams,
    n_range: range,
    ctrl: SeriesControl = QUASI_CONTROL,
    hbar: float = 1.0,
) -> list[tuple[int, int, float]]:
    """Derived branches ``sign * E + n hbar omega`` as ``(n, sign, energy)`` triples."""
    energy = quasienergy_of(d.physical(), ctrl).physical(d.omega, hbar)
    out = []
    for n in n_range:
        for sign in (1, -1):
            out.append((n, sign, sign * energy + n * hbar * d.omega))
    return out
