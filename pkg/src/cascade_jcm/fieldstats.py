"""Coherent-state averaging of the number-state populations.

The weight P_n of a Poisson distribution multiplies the manifold whose
middle bare state is |n, 0>, for every level and every initial case.  This
is incoherent averaging: probabilities are weighted, amplitudes never are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AtomicLevel, DomainError, JcmParams, PopulationSeries, TimeGrid
from .jcm import JcmCase, evolve_closed_form

TAIL_TOL = 1e-12


class RevivalNotFound(ValueError):
    """The series does not show the oscillate / collapse / revive pattern."""


@dataclass(frozen=True)
class CoherentField:
    nbar: float
    truncation: int
    weights: np.ndarray
    tail_mass: float

    @property
    def photon_numbers(self) -> np.ndarray:
        return np.arange(self.truncation + 1)


@dataclass(frozen=True)
class RevivalReport:
    collapse_time_estimate: float
    first_revival_time: float
    revival_peak_height: float


def _log_pmf(n, nbar: float):
    n = np.asarray(n, dtype=float)
    lg = np.vectorize(math.lgamma, otypes=[float])(n + 1)
    return n * math.log(nbar) - nbar - lg


def _upper_tail(n_max: int, nbar: float) -> float:
    # sum of P_n for n > n_max; terms fall off geometrically once n > nbar
    total = 0.0
    n = n_max + 1
    logp = float(_log_pmf(n, nbar))
    while True:
        term = math.exp(logp)
        total += term
        if n > nbar and term <= total * 1e-17:
            return total
        n += 1
        logp += math.log(nbar) - math.log(n)


def default_truncation(nbar: float) -> int:
    return math.ceil(nbar + 10 * math.sqrt(nbar)) + 10


def poisson_weights(nbar: float, tail_tol: float = TAIL_TOL, n_max: int | None = None) -> CoherentField:
    """Poisson photon-number weights, truncated so the dropped tail is below ``tail_tol``.

    Weights are evaluated as exp(log P_n), so large ``nbar`` cannot overflow.
    An explicit ``n_max`` is honoured (and extended if its tail is too heavy).
    """
    if nbar < 0 or not math.isfinite(nbar):
        raise DomainError(f"mean photon number must be finite and >= 0, got {nbar!r}")
    if not 0 < tail_tol < 1:
        raise ValueError("tail_tol must lie in (0, 1)")
    if nbar == 0:
        return CoherentField(0.0, 0, np.ones(1), 0.0)

    n_max = max(default_truncation(nbar), 0 if n_max is None else int(n_max))
    tail = _upper_tail(n_max, nbar)
    while tail >= tail_tol:
        n_max += max(10, math.ceil(math.sqrt(nbar)))
        tail = _upper_tail(n_max, nbar)
    weights = np.exp(_log_pmf(np.arange(n_max + 1), nbar))
    return CoherentField(float(nbar), n_max, weights, tail)


class _Compensated:
    """Neumaier summation over arrays, element-wise."""

    def __init__(self, shape):
        self.total = np.zeros(shape)
        self.carry = np.zeros(shape)

    def add(self, x):
        t = self.total + x
        big = np.abs(self.total) >= np.abs(x)
        self.carry += np.where(big, (self.total - t) + x, (x - t) + self.total)
        self.total = t

    def value(self):
        return self.total + self.carry


def averaged_populations(field: CoherentField, g: float, case: JcmCase, grid: TimeGrid, delta: float = 0.0) -> PopulationSeries:
    """Poisson-weighted level populations over ``grid`` (resonant closed forms)."""
    if delta != 0.0:
        raise DomainError("coherent averaging uses the resonant closed forms; delta must be 0")
    case = JcmCase(case)
    times = grid.times()
    sums = [_Compensated(times.shape) for _ in range(3)]
    for n, weight in zip(field.photon_numbers, field.weights):
        if case is JcmCase.CASE_VI and n == 0:
            # no |-1,+> manifold: the atom stays in the upper level
            pops = (np.ones_like(times), np.zeros_like(times), np.zeros_like(times))
        else:
            pops = evolve_closed_form(JcmParams(g, 0.0, int(n)), case, times)
        for acc, p in zip(sums, pops):
            acc.add(weight * p)
    up, mid, low = (acc.value() for acc in sums)
    return PopulationSeries(times, up, mid, low)


def nominal_rabi_period(g: float, nbar: float) -> float:
    """2 pi / (g sqrt(2 nbar + 1))."""
    return 2 * math.pi / (g * math.sqrt(2 * nbar + 1))


def revival_time_estimate(g: float, nbar: float) -> float:
    """Rephasing time of the g sqrt(2n+1) components around n = nbar."""
    return 2 * math.pi * math.sqrt(2 * nbar + 1) / g


def asymmetry_bound(field: CoherentField) -> float:
    """sum_n P_n / (2n + 1): the largest possible |<P+> - <P->| for a middle start."""
    n = field.photon_numbers
    return math.fsum(field.weights / (2 * n + 1))


def _dominant_period(times: np.ndarray, values: np.ndarray) -> float:
    dt = times[1] - times[0]
    spec = np.abs(np.fft.rfft(values - values.mean()))
    freqs = np.fft.rfftfreq(len(values), dt)
    k = int(np.argmax(spec[1:])) + 1
    return 1.0 / freqs[k]


def envelope(times: np.ndarray, values: np.ndarray, period: float) -> tuple[np.ndarray, np.ndarray]:
    """Centered rolling (max - min) over one ``period``; returns (centers, envelope)."""
    dt = times[1] - times[0]
    width = max(2, int(round(period / dt)) + 1)
    if width > len(values):
        raise RevivalNotFound("series shorter than one oscillation period")
    win = np.lib.stride_tricks.sliding_window_view(values, width)
    env = win.max(axis=1) - win.min(axis=1)
    centers = times[width // 2 : width // 2 + len(env)]
    return centers, env


def revival_report(
    series: PopulationSeries,
    period: float | None = None,
    level: AtomicLevel | None = None,
    collapse_fraction: float = 0.1,
) -> RevivalReport:
    """Locate the collapse and the strongest subsequent revival of one population curve.

    The curve defaults to the level with the largest initial swing; ``period``
    defaults to the dominant Fourier period of that curve.  Collapse is the
    first window whose envelope falls below ``collapse_fraction`` of the
    initial envelope; the revival is the envelope maximum after that.
    """
    times = np.asarray(series.times, dtype=float)
    if len(times) < 4:
        raise RevivalNotFound("series too short")
    if level is None:
        swings = []
        for lev in AtomicLevel:
            col = series.column(lev)
            w = max(2, len(col) // 20)
            swings.append((np.ptp(col[:w]), lev))
        level = max(swings, key=lambda s: s[0])[1]
    values = np.asarray(series.column(level), dtype=float)
    if np.ptp(values) < 1e-12:
        raise RevivalNotFound("no oscillation detected")
    if period is None:
        period = _dominant_period(times, values)

    centers, env = envelope(times, values, period)
    initial = env[0]
    if initial < 1e-12:
        raise RevivalNotFound("no oscillation detected")
    below = np.nonzero(env < collapse_fraction * initial)[0]
    if below.size == 0:
        raise RevivalNotFound("no collapse detected")
    i_collapse = below[0]
    after = env[i_collapse:]
    i_peak = i_collapse + int(np.argmax(after))
    if env[i_peak] < collapse_fraction * initial or i_peak == i_collapse:
        raise RevivalNotFound("no revival found in the window")

    dt = times[1] - times[0]
    half = int(round(period / dt)) // 2
    lo, hi = max(0, np.searchsorted(times, centers[i_peak]) - half), np.searchsorted(times, centers[i_peak]) + half + 1
    return RevivalReport(float(centers[i_collapse]), float(centers[i_peak]), float(values[lo:hi].max()))
