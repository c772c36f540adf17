"""Shared types for the cascade three-level atom.

Levels are ordered (upper, middle, lower), matching the I_z eigenvalues
+1, 0, -1.  Units: hbar = 1, every energy is an angular frequency.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-9


class DomainError(ValueError):
    """Raised when parameters fall outside the model's domain."""


class AtomicLevel(enum.IntEnum):
    # value is the I_z eigenvalue
    UPPER = 1
    MIDDLE = 0
    LOWER = -1

    @property
    def index(self) -> int:
        """Position in an (upper, middle, lower) vector."""
        return 1 - int(self)

    @classmethod
    def parse(cls, name: str) -> "AtomicLevel":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown level {name!r}; expected upper, middle or lower") from None


@dataclass(frozen=True)
class SpinOneOps:
    i_plus: np.ndarray
    i_minus: np.ndarray
    i_z: np.ndarray


def spin_one_ops() -> SpinOneOps:
    """Ladder and z matrices of the cascade atom (unit off-diagonal entries)."""
    i_plus = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=np.int64)
    return SpinOneOps(i_plus=i_plus, i_minus=i_plus.T.copy(), i_z=np.diag([1, 0, -1]).astype(np.int64))


@dataclass(frozen=True)
class ThreeLevelAmplitudes:
    c_upper: complex
    c_middle: complex
    c_lower: complex

    @classmethod
    def from_vector(cls, vec) -> "ThreeLevelAmplitudes":
        u, m, l = (complex(v) for v in vec)
        return cls(u, m, l)

    def as_vector(self) -> np.ndarray:
        return np.array([self.c_upper, self.c_middle, self.c_lower], dtype=complex)

    def populations(self) -> tuple[float, float, float]:
        return (abs(self.c_upper) ** 2, abs(self.c_middle) ** 2, abs(self.c_lower) ** 2)

    def is_physical(self, tol: float = NORM_TOL) -> bool:
        return abs(norm_squared(self) - 1.0) <= tol


def bare_state(level: AtomicLevel) -> ThreeLevelAmplitudes:
    vec = np.zeros(3, dtype=complex)
    vec[AtomicLevel(level).index] = 1.0
    return ThreeLevelAmplitudes.from_vector(vec)


def norm_squared(state: ThreeLevelAmplitudes) -> float:
    return sum(abs(c) ** 2 for c in (state.c_upper, state.c_middle, state.c_lower))


def require_normalized(state: ThreeLevelAmplitudes, tol: float = NORM_TOL) -> None:
    if not state.is_physical(tol):
        raise DomainError(f"initial state is not normalized (|c|^2 = {norm_squared(state)!r})")


@dataclass(frozen=True)
class SemiclassicalParams:
    """Atomic gap ``omega0``, drive frequency ``omega`` and coupling ``omega1``."""

    omega0: float
    omega: float
    omega1: float

    def __post_init__(self):
        for name in ("omega0", "omega", "omega1"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)!r}")

    @property
    def detuning(self) -> float:
        """omega - omega0, the sign convention of the population formulas."""
        return self.omega - self.omega0


@dataclass(frozen=True)
class JcmParams:
    """Coupling ``g``, detuning ``delta = omega0 - omega`` and photon index ``n``.

    ``n`` is the photon number of the middle bare state |n, 0> of the manifold.
    """

    g: float
    delta: float = 0.0
    n: int = 0

    def __post_init__(self):
        if not self.g > 0:
            raise DomainError(f"g must be positive, got {self.g!r}")
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"photon number must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def rabi(self) -> float:
        """Resonant manifold Rabi frequency g*sqrt(2n+1)."""
        return self.g * np.sqrt(2 * self.n + 1)


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    steps: int

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps!r}")
        if self.steps > 1 and not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")

    def times(self) -> np.ndarray:
        """Uniform grid; ``steps`` points including both ends (one point if steps == 1)."""
        if self.steps == 1:
            return np.array([float(self.t_start)])
        return np.linspace(self.t_start, self.t_end, int(self.steps))


@dataclass(frozen=True)
class PopulationSeries:
    times: np.ndarray
    p_upper: np.ndarray
    p_middle: np.ndarray
    p_lower: np.ndarray

    def __post_init__(self):
        n = len(self.times)
        for name in ("p_upper", "p_middle", "p_lower"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length differs from times")

    def __len__(self) -> int:
        return len(self.times)

    def column(self, level: AtomicLevel) -> np.ndarray:
        return (self.p_upper, self.p_middle, self.p_lower)[AtomicLevel(level).index]

    def as_array(self) -> np.ndarray:
        """(len, 3) array of (upper, middle, lower) populations."""
        return np.column_stack([self.p_upper, self.p_middle, self.p_lower])

    def row_sums(self) -> np.ndarray:
        return self.p_upper + self.p_middle + self.p_lower
