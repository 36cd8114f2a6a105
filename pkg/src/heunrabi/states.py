"""Two-component states and special-unitary 2x2 propagators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# row swap; conjugating U(tau, 0) with it gives U(pi + tau, pi)
T_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class SpinorState:
    psi1: complex
    psi2: complex

    @classmethod
    def from_components(cls, u1: float, v1: float, u2: float, v2: float) -> SpinorState:
        return cls(complex(u1, v1), complex(u2, v2))

    @property
    def components(self) -> tuple[float, float, float, float]:
        """The real quadruple ``(u1, v1, u2, v2)``."""
        return (self.psi1.real, self.psi1.imag, self.psi2.real, self.psi2.imag)

    @property
    def norm_error(self) -> float:
        return abs(abs(self.psi1) ** 2 + abs(self.psi2) ** 2 - 1.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.psi1, self.psi2], dtype=complex)


@dataclass(frozen=True)
class EvolutionMatrix:
    """Propagator ``[[psi1, -conj(psi2)], [psi2, conj(psi1)]]`` stored through its first column."""

    psi1: complex
    psi2: complex

    @classmethod
    def from_state(cls, s: SpinorState) -> EvolutionMatrix:
        return cls(s.psi1, s.psi2)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> EvolutionMatrix:
        """Take the first column of ``m``; the second column is implied."""
        m = np.asarray(m, dtype=complex)
        return cls(complex(m[0, 0]), complex(m[1, 0]))

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.psi1, self.psi2
        return np.array([[a, -b.conjugate()], [b, a.conjugate()]], dtype=complex)

    @property
    def first_column(self) -> SpinorState:
        return SpinorState(self.psi1, self.psi2)

    def det(self) -> float:
        return abs(self.psi1) ** 2 + abs(self.psi2) ** 2

    def __matmul__(self, other: EvolutionMatrix) -> EvolutionMatrix:
        return EvolutionMatrix.from_matrix(self.matrix @ other.matrix)
