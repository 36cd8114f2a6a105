"""Full-period time evolution assembled from the first quarter-period.

On ``[0, pi/2]`` the state comes straight from the two Heun series.  The
second quarter is the complex-conjugated, time-mirrored first quarter times
the half-period propagator; the second half is the row-swapped first half
times the same propagator.  Whole periods are powers of the monodromy, which
are taken in closed form.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .floquet import MonodromyData, SeriesBreakdown, monodromy_power
from .heun import MU_MP, MU_PP, TRACE_CONTROL, PhysicalParams, SeriesControl, eta0
from .states import T_SWAP, EvolutionMatrix, SpinorState

__all__ = [
    "ConvergenceError",
    "PhaseTime",
    "SpinorState",
    "EvolutionMatrix",
    "T_SWAP",
    "state_first_quarter",
    "second_quarter_map",
    "second_half_map",
    "fourth_quarter_map",
    "state_any",
    "evolution_matrix",
    "trace",
]

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


class ConvergenceError(SeriesBreakdown):
    def __init__(self, message: str, state: SpinorState | None = None):
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class PhaseTime:
    """Dimensionless time split into whole periods and a remainder in ``[0, 2 pi)``."""

    tau: float

    @property
    def periods(self) -> int:
        return self._split[0]

    @property
    def reduced(self) -> float:
        return self._split[1]

    @property
    def _split(self) -> tuple[int, float]:
        k, rem = divmod(self.tau, TWO_PI)
        if rem >= TWO_PI:
            k, rem = k + 1, 0.0
        return int(k), rem

    @property
    def z(self) -> float:
        """``sin(tau/2)**2`` of the reduced time."""
        return math.sin(0.5 * self.reduced) ** 2


def state_first_quarter(
    tau: float, p: PhysicalParams, ctrl: SeriesControl = TRACE_CONTROL, strict: bool = True
) -> SpinorState:
    if not 0.0 <= tau <= HALF_PI + 1e-15:
        raise ValueError(f"tau must lie in [0, pi/2], got {tau}")
    if tau == 0.0:
        return SpinorState(1.0 + 0j, 0j)
    sin_half = math.sin(0.5 * tau)
    z = min(sin_half * sin_half, 0.5)
    e_pp = eta0(z, MU_PP, p, ctrl)
    e_mp = eta0(z, MU_MP, p, ctrl)
    phase = cmath.exp(1j * p.f * z)
    state = SpinorState(
        phase * e_pp.value,
        -1j * p.nu * phase.conjugate() * sin_half * e_mp.value.conjugate(),
    )
    if strict and not (e_pp.converged and e_mp.converged):
        raise ConvergenceError(f"series did not converge at z={z:.6g} within {ctrl.max_terms} terms", state)
    return state


def second_quarter_map(mirror: SpinorState, m: MonodromyData) -> SpinorState:
    """State at ``pi/2 + s`` from the state at ``pi/2 - s``."""
    u1, v1, u2, v2 = mirror.components
    c, r = m.root, m.r
    ca, sa = math.cos(m.alpha), math.sin(m.alpha)
    return SpinorState.from_components(
        c * (u1 * ca + v1 * sa) + r * v2,
        c * (u1 * sa - v1 * ca) - r * u2,
        c * (u2 * ca + v2 * sa) - r * v1,
        c * (u2 * sa - v2 * ca) + r * u1,
    )


def second_half_map(s: SpinorState, m: MonodromyData) -> SpinorState:
    """State at ``pi + s`` from the state at ``s``."""
    u1, v1, u2, v2 = s.components
    c, r = m.root, m.r
    ca, sa = math.cos(m.alpha), math.sin(m.alpha)
    return SpinorState.from_components(
        c * (u1 * ca + v1 * sa) - r * v2,
        c * (-v1 * ca + u1 * sa) + r * u2,
        c * (-u2 * ca - v2 * sa) - r * v1,
        c * (v2 * ca - u2 * sa) + r * u1,
    )


def fourth_quarter_map(mirror: SpinorState, m: MonodromyData) -> SpinorState:
    """State at ``3 pi/2 + s`` from the state at ``pi/2 - s``."""
    u1, v1, u2, v2 = mirror.components
    r = m.r
    d = 1.0 - 2.0 * r * r
    g = 2.0 * r * m.root
    ca, sa = math.cos(m.alpha), math.sin(m.alpha)
    return SpinorState.from_components(
        d * u1 + g * (v2 * ca - u2 * sa),
        d * v1 + g * (u2 * ca + v2 * sa),
        -d * u2 + g * (v1 * ca - u1 * sa),
        -d * v2 + g * (u1 * ca + v1 * sa),
    )


def _state_first_half(tau, p, m, ctrl, strict):
    if tau <= HALF_PI:
        return state_first_quarter(tau, p, ctrl, strict)
    return second_quarter_map(state_first_quarter(math.pi - tau, p, ctrl, strict), m)


def state_any(
    tau: float | PhaseTime,
    p: PhysicalParams,
    m: MonodromyData,
    ctrl: SeriesControl = TRACE_CONTROL,
    strict: bool = True,
) -> SpinorState:
    """``psi(tau)`` with ``psi(0) = (1, 0)`` for any ``tau >= 0``.

    ``m`` must hold the auxiliary quantities of the same ``p``.
    """
    pt = tau if isinstance(tau, PhaseTime) else PhaseTime(float(tau))
    if pt.tau < 0:
        raise ValueError("tau must be non-negative")
    t = pt.reduced
    if t <= math.pi:
        state = _state_first_half(t, p, m, ctrl, strict)
    else:
        state = second_half_map(_state_first_half(t - math.pi, p, m, ctrl, strict), m)
    if pt.periods:
        u = EvolutionMatrix.from_state(state) @ monodromy_power(m, pt.periods)
        state = u.first_column
    return state


def evolution_matrix(
    tau: float | PhaseTime,
    p: PhysicalParams,
    m: MonodromyData,
    ctrl: SeriesControl = TRACE_CONTROL,
    strict: bool = True,
) -> EvolutionMatrix:
    return EvolutionMatrix.from_state(state_any(tau, p, m, ctrl, strict))


def trace(
    p: PhysicalParams,
    m: MonodromyData,
    samples: int,
    ctrl: SeriesControl = TRACE_CONTROL,
    strict: bool = True,
) -> list[tuple[float, SpinorState]]:
    """Uniform grid of ``samples`` points over ``[0, 2 pi]``."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    taus = np.linspace(0.0, TWO_PI, samples)
    return [(float(t), state_any(float(t), p, m, ctrl, strict)) for t in taus]
