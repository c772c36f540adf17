"""Closed-form level populations for the classically driven cascade atom.

The three canonical initial conditions start the atom in the lower
(case I), middle (case II) or upper (case III) level.  All formulas are
evaluated exactly as printed in the source derivation; no trigonometric
re-derivation is attempted, so any disagreement with the numerical
propagator in :mod:`cascade_jcm.oracle` points straight at a formula.
"""

from __future__ import annotations

import enum

import numpy as np

from .core import AtomicLevel, PopulationSeries, SemiclassicalParams, TimeGrid


class SemiclassicalCase(enum.Enum):
    CASE_I = AtomicLevel.LOWER
    CASE_II = AtomicLevel.MIDDLE
    CASE_III = AtomicLevel.UPPER

    @property
    def initial_level(self) -> AtomicLevel:
        return self.value

    @classmethod
    def from_level(cls, level: AtomicLevel) -> "SemiclassicalCase":
        return cls(AtomicLevel(level))


def generalized_rabi(params: SemiclassicalParams) -> float:
    """Omega = sqrt((omega - omega0)^2 + omega1^2)."""
    return float(np.hypot(params.detuning, params.omega1))


def _middle_from_edge(params, t):
    # population of the middle level when starting from upper or lower
    w1, d = params.omega1, params.detuning
    big = generalized_rabi(params)
    s = np.sin(big * t / 2)
    return w1**2 / (2 * big**4) * (4 * d**2 * s**4 + big**2 * np.sin(big * t) ** 2)


def _far_edge(params, t):
    w1 = params.omega1
    big = generalized_rabi(params)
    return w1**4 / big**4 * np.sin(big * t / 2) ** 4


def _same_edge(params, t):
    w1, d = params.omega1, params.detuning
    big = generalized_rabi(params)
    s = np.sin(big * t / 2)
    return ((w1**2 * s**2 + big**2 * np.cos(big * t)) ** 2 + d**2 * big**2 * np.sin(big * t) ** 2) / big**4


def _middle_stays(params, t):
    d = params.detuning
    big = generalized_rabi(params)
    s = np.sin(big * t / 2)
    return (
        4 * d**4 / big**4 * s**4
        + 4 * d**2 / big**2 * s**2 * np.cos(big * t)
        + np.cos(big * t) ** 2
    )


def populations(params: SemiclassicalParams, case: SemiclassicalCase, t):
    """Return ``(p_upper, p_middle, p_lower)`` at time(s) ``t``.

    ``t`` may be a scalar or an array; the outputs follow numpy broadcasting.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    case = SemiclassicalCase(case)
    if case is SemiclassicalCase.CASE_I:
        out = _far_edge(params, t), _middle_from_edge(params, t), _same_edge(params, t)
    elif case is SemiclassicalCase.CASE_III:
        out = _same_edge(params, t), _middle_from_edge(params, t), _far_edge(params, t)
    else:
        side = _middle_from_edge(params, t)
        out = side, _middle_stays(params, t), side.copy()
    if t.ndim == 0:
        return tuple(float(p) for p in out)
    return out


def population_series(params: SemiclassicalParams, case: SemiclassicalCase, grid: TimeGrid) -> PopulationSeries:
    times = grid.times()
    up, mid, low = populations(params, case, times)
    return PopulationSeries(times, up, mid, low)
