"""Cascade Jaynes-Cummings model restricted to one excitation manifold.

The manifold basis is ``(|n+1,->, |n,0>, |n-1,+>)`` -- lower, middle, upper
atomic level -- which is the *reverse* of the (upper, middle, lower) order
used by :class:`~cascade_jcm.core.ThreeLevelAmplitudes`.  Conversions happen
at the public boundary only.

Dressed states are the rows of an Euler rotation ``T``; at resonance ``T``
has a closed form, away from resonance it comes from a Jacobi sweep.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    AtomicLevel,
    DomainError,
    JcmParams,
    PopulationSeries,
    ThreeLevelAmplitudes,
    TimeGrid,
    bare_state,
    require_normalized,
)


class JcmCase(enum.Enum):
    CASE_IV = AtomicLevel.LOWER  # |n+1, ->
    CASE_V = AtomicLevel.MIDDLE  # |n, 0>
    CASE_VI = AtomicLevel.UPPER  # |n-1, +>

    @property
    def initial_level(self) -> AtomicLevel:
        return self.value

    @classmethod
    def from_level(cls, level: AtomicLevel) -> "JcmCase":
        return cls(AtomicLevel(level))


@dataclass(frozen=True)
class ManifoldHamiltonian:
    matrix: np.ndarray
    n: int


@dataclass(frozen=True)
class EulerMatrix:
    entries: np.ndarray
    angles: tuple[float, float, float]  # (psi, theta, phi)

    @property
    def inverse(self) -> np.ndarray:
        return self.entries.T


@dataclass(frozen=True)
class DressedSpectrum:
    lambda_plus: float
    lambda_zero: float
    lambda_minus: float
    t_matrix: EulerMatrix

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([self.lambda_plus, self.lambda_zero, self.lambda_minus])


def to_manifold(state: ThreeLevelAmplitudes) -> np.ndarray:
    return state.as_vector()[::-1].copy()


def from_manifold(vec) -> ThreeLevelAmplitudes:
    return ThreeLevelAmplitudes.from_vector(np.asarray(vec)[::-1])


def manifold_hamiltonian(params: JcmParams) -> ManifoldHamiltonian:
    n, g, d = params.n, params.g, params.delta
    if n < 0:
        raise DomainError("photon number must be non-negative")
    up = g * math.sqrt(n + 1)
    lo = g * math.sqrt(n)
    mat = np.array(
        [
            [-d, up, 0.0],
            [up, 0.0, lo],
            [0.0, lo, d],
        ]
    )
    return ManifoldHamiltonian(mat, n)


def euler_from_angles(psi: float, theta: float, phi: float) -> np.ndarray:
    """Rotation matrix in the (psi, theta, phi) parameterization."""
    cps, sps = math.cos(psi), math.sin(psi)
    cth, sth = math.cos(theta), math.sin(theta)
    cph, sph = math.cos(phi), math.sin(phi)
    return np.array(
        [
            [cps * cph - cth * sph * sps, cps * sph + cth * cph * sps, sps * sth],
            [-sps * cph - cth * sph * cps, -sps * sph + cth * cph * cps, cps * sth],
            [sth * sph, -sth * cph, cth],
        ]
    )


def angles_from_euler(entries: np.ndarray) -> tuple[float, float, float]:
    """Inverse of :func:`euler_from_angles` for a proper rotation."""
    a = np.asarray(entries, dtype=float)
    theta = math.acos(min(1.0, max(-1.0, a[2, 2])))
    if math.hypot(a[0, 2], a[1, 2]) < 1e-14:
        # gimbal lock: only psi + phi (or phi - psi) is defined
        return 0.0, theta, math.atan2(a[0, 1], a[0, 0])
    psi = math.atan2(a[0, 2], a[1, 2])
    phi = math.atan2(a[2, 0], -a[2, 1])
    return psi, theta, phi


def euler_matrix(n: int) -> EulerMatrix:
    """Resonant dressing rotation for manifold ``n`` in closed form."""
    if n < 0:
        raise DomainError("photon number must be non-negative")
    edge_hi = math.sqrt((n + 1) / (4 * n + 2))
    edge_lo = math.sqrt(n / (4 * n + 2))
    half = 1 / math.sqrt(2)
    entries = np.array(
        [
            [edge_hi, half, edge_lo],
            [-math.sqrt(n / (2 * n + 1)), 0.0, math.sqrt((n + 1) / (2 * n + 1))],
            [edge_hi, -half, edge_lo],
        ]
    )
    theta = math.asin(math.sqrt((3 * n + 2) / (4 * n + 2)))
    phi = math.asin(math.sqrt((n + 1) / (3 * n + 2)))
    psi = math.asin(math.sqrt(n / (3 * n + 2)))
    return EulerMatrix(entries, (psi, theta, phi))


def jacobi_eigh(mat: np.ndarray, max_sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a small real symmetric matrix.

    Returns ``(eigenvalues, vectors)`` with eigenvectors as columns, unsorted.
    """
    a = np.array(mat, dtype=float)
    size = a.shape[0]
    v = np.eye(size)
    scale = max(np.abs(a).max(), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sum(np.triu(a, 1) ** 2)
        if off <= (np.finfo(float).eps * scale) ** 2 * 1e-4:
            break
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(tau * tau + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                rot = np.eye(size)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                a[p, q] = a[q, p] = 0.0
                v = v @ rot
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.diag(a).copy(), v


def _anchor_sign(row: np.ndarray, idx: int) -> float:
    # sign that makes row[idx] positive; fall back to the largest entry
    if abs(row[idx]) > 1e-12:
        return math.copysign(1.0, row[idx])
    big = int(np.argmax(np.abs(row)))
    return math.copysign(1.0, row[big])


def dressed_spectrum(params: JcmParams) -> DressedSpectrum:
    """Dressed energies (descending) and the rotation whose rows are the dressed states."""
    if params.delta == 0.0:
        lam = params.rabi
        return DressedSpectrum(lam, 0.0, -lam, euler_matrix(params.n))

    ham = manifold_hamiltonian(params).matrix
    vals, vecs = jacobi_eigh(ham)
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    rows = vecs[:, order].T.copy()
    # same sign pattern as the resonant matrix: rows 1, 3 lead positive, row 2 ends positive
    rows[0] *= _anchor_sign(rows[0], 0)
    rows[1] *= -_anchor_sign(rows[1], 0) if abs(rows[1, 0]) > 1e-12 else _anchor_sign(rows[1], 2)
    rows[2] *= _anchor_sign(rows[2], 0)
    if np.linalg.det(rows) < 0:
        rows[1] *= -1
    euler = EulerMatrix(rows, angles_from_euler(rows))
    return DressedSpectrum(float(vals[0]), float(vals[1]), float(vals[2]), euler)


def propagator(params: JcmParams, t) -> np.ndarray:
    """exp(-i H t) in the manifold basis; shape (3, 3) or (len(t), 3, 3)."""
    spec = dressed_spectrum(params)
    tm = spec.t_matrix.entries
    phases = np.exp(-1j * np.multiply.outer(np.asarray(t, dtype=float), spec.eigenvalues))
    # T^-1 diag(phases) T
    return np.einsum("ji,...j,jk->...ik", tm, phases, tm)


def evolve_general(params: JcmParams, initial: ThreeLevelAmplitudes, t: float) -> ThreeLevelAmplitudes:
    require_normalized(initial)
    if t == 0:
        return initial
    vec = propagator(params, float(t)) @ to_manifold(initial)
    return from_manifold(vec)


def evolve_closed_form(params: JcmParams, case: JcmCase, t):
    """Resonant number-state populations ``(p_upper, p_middle, p_lower)`` at time(s) ``t``."""
    if params.delta != 0.0:
        raise DomainError("closed forms hold at resonance only; use evolve_general for delta != 0")
    case = JcmCase(case)
    n = params.n
    if case is JcmCase.CASE_VI and n == 0:
        raise DomainError("case VI needs n >= 1: the bare state |n-1,+> does not exist for n = 0")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")

    wt = params.rabi * t
    s2 = np.sin(wt / 2) ** 2
    c2 = np.cos(wt / 2) ** 2
    osc = np.sin(wt) ** 2
    norm = (2 * n + 1) ** 2
    if case is JcmCase.CASE_IV:
        up = 4 * n * (n + 1) / norm * s2**2
        mid = (n + 1) / (2 * n + 1) * osc
        low = 1 - 4 * (n * (n + 1) / norm + (n + 1) ** 2 / norm * c2) * s2
    elif case is JcmCase.CASE_V:
        up = n / (2 * n + 1) * osc
        mid = np.cos(wt) ** 2
        low = (n + 1) / (2 * n + 1) * osc
    else:
        up = 1 - 4 * (n * (n + 1) / norm + n**2 / norm * c2) * s2
        mid = n / (2 * n + 1) * osc
        low = 4 * n * (n + 1) / norm * s2**2
    if t.ndim == 0:
        return float(up), float(mid), float(low)
    return up, mid, low


def population_series(params: JcmParams, case: JcmCase, grid: TimeGrid) -> PopulationSeries:
    """Number-state populations; closed forms at resonance, dressed propagator otherwise."""
    case = JcmCase(case)
    times = grid.times()
    if params.delta == 0.0:
        up, mid, low = evolve_closed_form(params, case, times)
        return PopulationSeries(times, up, mid, low)
    if case is JcmCase.CASE_VI and params.n == 0:
        raise DomainError("case VI needs n >= 1: the bare state |n-1,+> does not exist for n = 0")
    amps = propagator(params, times) @ to_manifold(bare_state(case.initial_level))
    pops = np.abs(amps) ** 2
    return PopulationSeries(times, pops[:, 2], pops[:, 1], pops[:, 0])
