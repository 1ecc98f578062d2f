"""Model parameters and the mapped quadratic differential."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def potential_sign(n: int) -> complex:
    """Coefficient c_n with (i x)^(2n+1) = c_n x^(2n+1), i.e. i(-1)^n."""
    return 1j if n % 2 == 0 else -1j


@dataclass(frozen=True)
class ModelParams:
    """Parameters of H = p^2 - g (i x)^(2n+1) on [-L, L] with Dirichlet walls.

    ``g = 0`` is accepted so that the empty box can be solved by the same
    code paths; quantities that divide by the coupling raise in that case.
    """

    n: int
    g: float
    L: float
    hbar: float = 1.0

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool) or self.n < 0:
            raise ValueError(f"n must be a non-negative integer, got {self.n!r}")
        for name in ("L", "hbar"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and positive, got {v!r}")
        if not (math.isfinite(self.g) and self.g >= 0):
            raise ValueError(f"g must be finite and non-negative, got {self.g!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def power(self) -> int:
        return 2 * self.n + 1

    @property
    def energy_unit(self) -> float:
        """g L^(2n+1): maps E to the dimensionless energy E / (g L^(2n+1))."""
        return self.g * self.L ** self.power

    @property
    def scale(self) -> float:
        """Prefactor hbar^-1 g^(1/2) L^((2n+3)/2) multiplying mapped actions."""
        return math.sqrt(self.g) * self.L ** ((2 * self.n + 3) / 2) / self.hbar

    @property
    def box_ground(self) -> float:
        """Lowest Dirichlet level of the empty box, a lower bound on Re E."""
        return (math.pi * self.hbar / (2 * self.L)) ** 2

    def to_mapped(self, E):
        if self.g == 0:
            raise ZeroDivisionError("mapped energy is undefined for g = 0")
        return np.asarray(E) / self.energy_unit if np.ndim(E) else complex(E) / self.energy_unit

    def from_mapped(self, emapped):
        return np.asarray(emapped) * self.energy_unit if np.ndim(emapped) else complex(emapped) * self.energy_unit


class QFunction:
    """Mapped quadratic differential Q(y) = E + coupling * i(-1)^n y^(2n+1).

    With ``coupling = 1`` this is the dimensionless form of E + g (i x)^(2n+1).
    ``coupling = 0`` gives a constant Q, which is handy for testing path code.
    """

    def __init__(self, emapped: complex, n: int, coupling: float = 1.0):
        self.e = complex(emapped)
        self.n = int(n)
        self.c = potential_sign(self.n) * coupling
        self.power = 2 * self.n + 1

    def __call__(self, y):
        return self.e + self.c * np.power(y, self.power) if np.ndim(y) else self.e + self.c * complex(y) ** self.power

    def derivative(self, y):
        return self.power * self.c * complex(y) ** (self.power - 1)

    def coefficients(self) -> list[complex]:
        """Polynomial coefficients, highest degree first."""
        coeffs = [0j] * (self.power + 1)
        coeffs[0] = self.c
        coeffs[-1] = self.e
        return coeffs

    def roots(self) -> np.ndarray:
        """Turning points: the 2n+1 roots of Q, empty if Q is constant."""
        if self.c == 0:
            return np.empty(0, dtype=complex)
        # y^(2n+1) = -E / c exactly; closed form beats a generic solver here.
        w = -self.e / self.c
        if w == 0:
            return np.zeros(self.power, dtype=complex)
        r = abs(w) ** (1.0 / self.power)
        phi = np.angle(w)
        k = np.arange(self.power)
        return r * np.exp(1j * (phi + 2 * np.pi * k) / self.power)
