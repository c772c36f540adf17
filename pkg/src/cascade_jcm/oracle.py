"""Brute-force propagators used to check the closed forms.

Two independent routes:

* fixed-step RK4 on the lab-frame amplitude equations of the classically
  driven atom, with the explicit ``exp(+-i omega t)`` coefficients left in
  place (no exponential ansatz), plus a step-doubling accuracy check;
* spectral exponentials of time-independent Hamiltonians via LAPACK
  ``eigh``: the rotating-frame semiclassical matrix, and the JCM manifold
  block assembled from ladder operators on a truncated Fock space.

Nothing here imports :mod:`cascade_jcm.semiclassical` or :mod:`cascade_jcm.jcm`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import JcmParams, SemiclassicalParams, ThreeLevelAmplitudes, require_normalized, spin_one_ops


class StepControlError(RuntimeError):
    """RK4 could not reach the requested step-halving tolerance."""


class Method(enum.Enum):
    RK4 = "rk4"
    SPECTRAL_EXPONENTIAL = "spectral"


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 2e-3
    method: Method = Method.RK4
    # max change of any amplitude when dt is halved
    tol: float = 1e-10
    max_halvings: int = 6

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")


def lab_generator(params: SemiclassicalParams, t) -> np.ndarray:
    """-i H(t) of the lab-frame equations, (upper, middle, lower) order, shape (..., 3, 3)."""
    t = np.asarray(t, dtype=float)
    k = params.omega1 / math.sqrt(2)
    fwd = k * np.exp(-1j * params.omega * t)
    back = np.conj(fwd)
    ham = np.zeros(t.shape + (3, 3), dtype=complex)
    ham[..., 0, 0] = params.omega0
    ham[..., 0, 1] = fwd
    ham[..., 1, 0] = back
    ham[..., 1, 2] = fwd
    ham[..., 2, 1] = back
    ham[..., 2, 2] = -params.omega0
    return -1j * ham


def rk4_step_matrices(generator, t0: np.ndarray, h: float) -> np.ndarray:
    """One RK4 step of y' = A(t) y written as y_next = M y, for every start time in ``t0``."""
    a0 = generator(t0)
    am = generator(t0 + h / 2)
    a1 = generator(t0 + h)
    eye = np.eye(a0.shape[-1])
    k1 = a0
    k2 = am @ (eye + (h / 2) * k1)
    k3 = am @ (eye + (h / 2) * k2)
    k4 = a1 @ (eye + h * k3)
    return eye + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """M[..., S-1, :, :] @ ... @ M[..., 0, :, :] by pairwise reduction along axis -3."""
    while mats.shape[-3] > 1:
        if mats.shape[-3] % 2:
            pad = np.broadcast_to(np.eye(mats.shape[-1], dtype=mats.dtype), mats.shape[:-3] + (1,) + mats.shape[-2:])
            mats = np.concatenate([mats, pad], axis=-3)
        mats = mats[..., 1::2, :, :] @ mats[..., 0::2, :, :]
    return mats[..., 0, :, :]


def rk4_trajectory(generator, y0: np.ndarray, t_end: float, records: int, substeps: int) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-step RK4 from 0 to ``t_end``; state recorded at ``records + 1`` uniform points.

    ``substeps`` RK4 steps are taken between consecutive records.
    """
    h = t_end / (records * substeps)
    times = np.linspace(0.0, t_end, records + 1)
    states = np.empty((records + 1, len(y0)), dtype=complex)
    states[0] = y0
    y = np.asarray(y0, dtype=complex)
    # bound memory: build step matrices a block of records at a time
    block = max(1, 200_000 // substeps)
    for start in range(0, records, block):
        stop = min(records, start + block)
        idx = np.arange(start * substeps, stop * substeps)
        mats = rk4_step_matrices(generator, idx * h, h).reshape(stop - start, substeps, 3, 3)
        for r, prod in enumerate(_ordered_product(mats), start=start + 1):
            y = prod @ y
            states[r] = y
    return times, states


def semiclassical_trajectory(
    params: SemiclassicalParams,
    initial: ThreeLevelAmplitudes,
    t_end: float,
    records: int = 1,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> tuple[np.ndarray, np.ndarray]:
    """RK4 amplitudes ``(records + 1, 3)`` on a uniform grid over [0, t_end], step-doubling checked."""
    require_normalized(initial)
    y0 = initial.as_vector()
    if t_end == 0:
        return np.zeros(1), y0[None, :]

    def gen(t):
        return lab_generator(params, t)

    substeps = max(1, math.ceil(t_end / (records * cfg.dt)))
    _, coarse = rk4_trajectory(gen, y0, t_end, records, substeps)
    for _ in range(cfg.max_halvings + 1):
        substeps *= 2
        times, fine = rk4_trajectory(gen, y0, t_end, records, substeps)
        change = np.abs(fine - coarse).max()
        if change < cfg.tol:
            return times, fine
        coarse = fine
    raise StepControlError(f"step halving still changes amplitudes by {change:.3g} (> {cfg.tol:g})")


def integrate_semiclassical(
    params: SemiclassicalParams,
    initial: ThreeLevelAmplitudes,
    t_end: float,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> ThreeLevelAmplitudes:
    if cfg.method is Method.SPECTRAL_EXPONENTIAL:
        return rotating_frame_evolve(params, initial, t_end)
    _, states = semiclassical_trajectory(params, initial, t_end, 1, cfg)
    return ThreeLevelAmplitudes.from_vector(states[-1])


def spectral_expm(ham: np.ndarray, t) -> np.ndarray:
    """exp(-i H t) for Hermitian ``ham``; vectorized over ``t``."""
    vals, vecs = np.linalg.eigh(ham)
    phases = np.exp(-1j * np.multiply.outer(np.asarray(t, dtype=float), vals))
    return np.einsum("ij,...j,kj->...ik", vecs, phases, vecs.conj())


def rotating_frame_evolve(params: SemiclassicalParams, initial: ThreeLevelAmplitudes, t) -> ThreeLevelAmplitudes | np.ndarray:
    """Exact lab-frame amplitudes via the constant rotating-frame Hamiltonian.

    With C+ = b+ e^{-i w t}, C- = b- e^{+i w t}, C0 = b0 the amplitudes ``b``
    obey a time-independent Schrodinger equation.
    """
    require_normalized(initial)
    ops = spin_one_ops()
    ham = (params.omega0 - params.omega) * ops.i_z + params.omega1 / math.sqrt(2) * (ops.i_plus + ops.i_minus)
    t_arr = np.asarray(t, dtype=float)
    b = spectral_expm(ham.astype(complex), t_arr) @ initial.as_vector()
    frame = np.exp(-1j * params.omega * np.multiply.outer(t_arr, [1.0, 0.0, -1.0]))
    out = frame * b
    if t_arr.ndim == 0:
        return ThreeLevelAmplitudes.from_vector(out)
    return out


def manifold_block(params: JcmParams) -> np.ndarray:
    """Interaction Hamiltonian on (|n+1,->, |n,0>, |n-1,+>) built from ladder operators.

    The free part omega*(a^dag a + I_z) equals omega*n on the whole manifold and
    is dropped.  For n = 0 the state |-1,+> does not exist; it is kept as a
    decoupled placeholder with energy +delta so the block stays 3x3.
    """
    n = params.n
    # Fock window n-1 .. n+1 is all the manifold touches; a is exact on it
    lo = max(n - 1, 0)
    photons = np.arange(lo, n + 2)
    dim = len(photons)
    a = np.diag(np.sqrt(photons[1:].astype(float)), k=1)
    ops = spin_one_ops()
    atom_z = ops.i_z.astype(float)
    h_int = params.delta * np.kron(np.eye(dim), atom_z) + params.g * (
        np.kron(a, ops.i_plus) + np.kron(a.T, ops.i_minus)
    )

    def index(count: int, level: int) -> int:
        # atom basis order (+, 0, -)
        return (count - lo) * 3 + {1: 0, 0: 1, -1: 2}[level]

    states = [(n + 1, -1), (n, 0), (n - 1, 1)]
    block = np.zeros((3, 3))
    for i, si in enumerate(states):
        for j, sj in enumerate(states):
            if si[0] < 0 or sj[0] < 0:
                continue
            block[i, j] = h_int[index(*si), index(*sj)]
    if n == 0:
        block[2, 2] = params.delta
    return block


def jcm_trajectory(params: JcmParams, initial: ThreeLevelAmplitudes, times) -> np.ndarray:
    """Amplitudes (upper, middle, lower) at each time, shape (len(times), 3)."""
    require_normalized(initial)
    vec = initial.as_vector()[::-1]
    out = spectral_expm(manifold_block(params).astype(complex), np.asarray(times, dtype=float)) @ vec
    return out[..., ::-1]


def jcm_rk4_trajectory(
    params: JcmParams,
    initial: ThreeLevelAmplitudes,
    t_end: float,
    records: int = 1,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> tuple[np.ndarray, np.ndarray]:
    """RK4 on the manifold block; same step-doubling check as the semiclassical route.

    The generator is constant, so one step matrix raised to a power gives the
    exact fixed-step RK4 result between records.
    """
    require_normalized(initial)
    y0 = initial.as_vector()[::-1].astype(complex)
    if t_end == 0:
        return np.zeros(1), y0[None, ::-1]
    gen_mat = -1j * manifold_block(params)

    def run(substeps):
        h = t_end / (records * substeps)
        step = rk4_step_matrices(lambda t: np.broadcast_to(gen_mat, np.shape(t) + (3, 3)), np.zeros(()), h)
        hop = np.linalg.matrix_power(step, substeps)
        states = np.empty((records + 1, 3), dtype=complex)
        states[0] = y0
        for r in range(records):
            states[r + 1] = hop @ states[r]
        return states

    substeps = max(1, math.ceil(t_end / (records * cfg.dt)))
    coarse = run(substeps)
    for _ in range(cfg.max_halvings + 1):
        substeps *= 2
        fine = run(substeps)
        change = np.abs(fine - coarse).max()
        if change < cfg.tol:
            return np.linspace(0.0, t_end, records + 1), fine[:, ::-1]
        coarse = fine
    raise StepControlError(f"step halving still changes amplitudes by {change:.3g} (> {cfg.tol:g})")


def integrate_jcm(params: JcmParams, initial: ThreeLevelAmplitudes, t_end: float) -> ThreeLevelAmplitudes:
    if t_end == 0:
        require_normalized(initial)
        return initial
    return ThreeLevelAmplitudes.from_vector(jcm_trajectory(params, initial, float(t_end)))
