"""Brute-force reference: fixed-step RK4 integration of the driven two-level system.

Nothing here touches the Heun series.  The integrator works on Python complex
scalars for single points and on numpy arrays for batches of parameters;
the same stepping code serves both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .floquet import R_CLAMP_TOL, MonodromyData, Quasienergy, SeriesBreakdown, _principal_arg
from .heun import PhysicalParams
from .states import EvolutionMatrix, SpinorState

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class IntegratorConfig:
    steps_per_period: int = 20_000

    def __post_init__(self):
        if self.steps_per_period < 100:
            raise ValueError("steps_per_period must be >= 100")

    def steps_for(self, span: float) -> int:
        return max(1, math.ceil(round(span / TWO_PI * self.steps_per_period, 9)))


DEFAULT_CONFIG = IntegratorConfig()


def _rk4(f, nu, p1, p2, tau0: float, tau1: float, n: int):
    """Advance ``i dpsi/dtau = H(tau) psi`` from tau0 to tau1 in n equal steps."""
    h = (tau1 - tau0) / n
    hh = -0.25j * h  # -i/2 from H, times h/2 for the half steps
    for j in range(n):
        t = tau0 + j * h
        s0 = f * math.sin(t)
        sm = f * math.sin(t + 0.5 * h)
        s1 = f * math.sin(t + h)
        # each k is h * (-i H psi); H = (1/2) [[s, nu], [nu, -s]]
        k11 = 2 * hh * (s0 * p1 + nu * p2)
        k12 = 2 * hh * (nu * p1 - s0 * p2)
        q1 = p1 + 0.5 * k11
        q2 = p2 + 0.5 * k12
        k21 = 2 * hh * (sm * q1 + nu * q2)
        k22 = 2 * hh * (nu * q1 - sm * q2)
        q1 = p1 + 0.5 * k21
        q2 = p2 + 0.5 * k22
        k31 = 2 * hh * (sm * q1 + nu * q2)
        k32 = 2 * hh * (nu * q1 - sm * q2)
        q1 = p1 + k31
        q2 = p2 + k32
        k41 = 2 * hh * (s1 * q1 + nu * q2)
        k42 = 2 * hh * (nu * q1 - s1 * q2)
        p1 = p1 + (k11 + 2 * k21 + 2 * k31 + k41) / 6
        p2 = p2 + (k12 + 2 * k22 + 2 * k32 + k42) / 6
    return p1, p2


def integrate(
    p: PhysicalParams,
    tau0: float,
    tau1: float,
    psi0: SpinorState,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> SpinorState:
    if tau1 < tau0:
        raise ValueError("tau1 must not precede tau0")
    if tau1 == tau0:
        return psi0
    n = cfg.steps_for(tau1 - tau0)
    p1, p2 = _rk4(float(p.f), float(p.nu), complex(psi0.psi1), complex(psi0.psi2), tau0, tau1, n)
    return SpinorState(complex(p1), complex(p2))


def propagator(
    p: PhysicalParams, tau0: float, tau1: float, cfg: IntegratorConfig = DEFAULT_CONFIG
) -> np.ndarray:
    """Full 2x2 matrix ``U(tau1, tau0)``; both columns are integrated independently."""
    c1 = integrate(p, tau0, tau1, SpinorState(1.0, 0.0), cfg)
    c2 = integrate(p, tau0, tau1, SpinorState(0.0, 1.0), cfg)
    return np.array([[c1.psi1, c2.psi1], [c1.psi2, c2.psi2]], dtype=complex)


def propagator_batch(f, nu, tau0: float, tau1: float, cfg: IntegratorConfig = DEFAULT_CONFIG) -> np.ndarray:
    """``U(tau1, tau0)`` for arrays of parameters, shape ``(..., 2, 2)``."""
    f = np.asarray(f, dtype=float)
    nu = np.asarray(nu, dtype=float)
    shape = np.broadcast(f, nu).shape
    out = np.empty(shape + (2, 2), dtype=complex)
    if tau1 == tau0:
        out[...] = np.eye(2)
        return out
    if tau1 < tau0:
        raise ValueError("tau1 must not precede tau0")
    # both columns at once: trailing axis enumerates the initial states
    p1 = np.broadcast_to(np.array([1.0, 0.0], dtype=complex), shape + (2,)).copy()
    p2 = np.broadcast_to(np.array([0.0, 1.0], dtype=complex), shape + (2,)).copy()
    p1, p2 = _rk4(f[..., None], nu[..., None], p1, p2, tau0, tau1, cfg.steps_for(tau1 - tau0))
    out[..., 0, :] = p1
    out[..., 1, :] = p2
    return out


def trace_states(p: PhysicalParams, taus, cfg: IntegratorConfig = DEFAULT_CONFIG) -> list[SpinorState]:
    """States on an increasing grid starting from ``psi(0) = (1, 0)``."""
    taus = [float(t) for t in taus]
    state = SpinorState(1.0, 0.0)
    t_prev = 0.0
    out = []
    for t in taus:
        state = integrate(p, t_prev, t, state, cfg)
        t_prev = t
        out.append(state)
    return out


def numeric_monodromy(p: PhysicalParams, cfg: IntegratorConfig = DEFAULT_CONFIG) -> EvolutionMatrix:
    return EvolutionMatrix.from_matrix(propagator(p, 0.0, TWO_PI, cfg))


def numeric_r_alpha(p: PhysicalParams, cfg: IntegratorConfig = DEFAULT_CONFIG) -> MonodromyData:
    q = integrate(p, 0.0, 0.5 * math.pi, SpinorState(1.0, 0.0), cfg)
    a, b = q.psi1, q.psi2
    r = 2.0 * (a.conjugate() * b).imag
    if abs(r) > 1.0 + R_CLAMP_TOL:
        raise SeriesBreakdown(f"|r| = {abs(r):.3g} exceeds 1")
    r = max(-1.0, min(1.0, r))
    w = a * a + b * b
    if abs(w) < 1e-12:
        return MonodromyData(r, 0.0, degenerate=True)
    return MonodromyData(r, _principal_arg(w))


def _eps_from_columns(p1_pi, p2_pi, p1_2pi, p2_2pi):
    # eigenvalues of an SU(2) matrix are Re(U11) +- i sqrt(Im(U11)^2 + |U21|^2)
    mag = np.arctan2(np.sqrt(np.imag(p1_2pi) ** 2 + np.abs(p2_2pi) ** 2), np.real(p1_2pi)) / TWO_PI
    # the pair is +-mag; pick the member with sign opposite to r = Im U(pi, 0)_21
    return np.where(np.imag(p2_pi) > 0, -mag, mag)


def numeric_quasienergy(p: PhysicalParams, cfg: IntegratorConfig = DEFAULT_CONFIG) -> Quasienergy:
    p = p.canonical()
    half = integrate(p, 0.0, math.pi, SpinorState(1.0, 0.0), cfg)
    full = integrate(p, math.pi, TWO_PI, half, cfg)
    return Quasienergy(float(_eps_from_columns(half.psi1, half.psi2, full.psi1, full.psi2)))


def numeric_quasienergy_batch(f, nu, cfg: IntegratorConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Principal quasienergies for arrays of ``(f, nu)``; integrates all points in lockstep."""
    f = np.abs(np.asarray(f, dtype=float))
    nu = np.abs(np.asarray(nu, dtype=float))
    p1 = np.ones(f.shape, dtype=complex)
    p2 = np.zeros(f.shape, dtype=complex)
    n = cfg.steps_for(math.pi)
    h1, h2 = _rk4(f, nu, p1, p2, 0.0, math.pi, n)
    g1, g2 = _rk4(f, nu, h1, h2, math.pi, TWO_PI, n)
    return _eps_from_columns(h1, h2, g1, g2)
