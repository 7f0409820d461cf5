"""Time propagation of ``i d/dt psi = H(t) psi`` on a uniform grid.

Because H(t) is affine in the sweep field, the one-step propagators of a
whole block of grid intervals are built with batched numpy algebra; only
the final chain of matrix-vector products is sequential.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConventionError, InputError, NumericalError
from .model import LevelSystem, hamiltonian_stack
from .numerics import TimeGrid, cumulative_samples, eigh_batch, unitary_steps
from .sweep import gamma

DRIFT_LIMIT = 1e-6
DRIFT_FLOOR = 1e-10
NORM_TOL = 1e-12
SPAN_GUARD = 10.0
AMBIGUITY_TOL = 1e-6
_CHUNK = 8192


class Method(str, Enum):
    RK4 = "rk4"
    MIDPOINT = "midpoint"


def as_state(psi, n=None):
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if n is not None and psi.size != n:
        raise InputError(f"initial state has {psi.size} amplitudes, system has {n} levels")
    norm = float(np.sum(np.abs(psi) ** 2))
    if abs(norm - 1.0) > NORM_TOL:
        raise InputError(f"initial state must be normalized, got norm {norm:.15g}")
    return psi


def basis_state(n, level):
    """Unit amplitude on `level` (0-based)."""
    if not 0 <= level < n:
        raise InputError(f"level {level} out of range for n={n}")
    psi = np.zeros(n, dtype=complex)
    psi[level] = 1.0
    return psi


@dataclass
class StateTrajectory:
    grid: TimeGrid
    states: np.ndarray

    @property
    def times(self):
        return self.grid.points()

    @property
    def norms(self):
        return np.sum(np.abs(self.states) ** 2, axis=1)

    @property
    def populations(self):
        return np.abs(self.states) ** 2

    @property
    def max_drift(self):
        return float(np.max(np.abs(self.norms - 1.0)))

    @property
    def final(self):
        return self.states[-1]


def _rk4_steps(a0, am, a1, dt):
    """Exact RK4 update matrices for ``psi' = A(t) psi`` given A at the left
    end, midpoint and right end of each interval."""
    eye = np.eye(a0.shape[-1])
    k1 = a0
    k2 = am @ (eye + 0.5 * dt * k1)
    k3 = am @ (eye + 0.5 * dt * k2)
    k4 = a1 @ (eye + dt * k3)
    return eye + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _step_matrices(system, profile, grid, method, lo, hi):
    dt = grid.dt
    ts = grid.t0 + np.arange(lo, hi + 1) * dt
    mids = grid.t0 + (np.arange(lo, hi) + 0.5) * dt
    hm = hamiltonian_stack(system, profile, mids)
    if method is Method.MIDPOINT:
        return unitary_steps(hm, dt)
    h = hamiltonian_stack(system, profile, ts)
    return _rk4_steps(-1j * h[:-1], -1j * hm, -1j * h[1:], dt)


def evolve(system, profile, psi0, grid, method=Method.RK4, drift_tol=DRIFT_LIMIT):
    """Integrate the Schroedinger equation from ``grid.t0`` to ``grid.t1``.

    ``method`` is ``"rk4"`` (classical fixed step) or ``"midpoint"``
    (``exp(-i H(t + dt/2) dt)`` per step, exactly unitary; Hermitian systems
    only). For Hermitian systems a norm drift above `drift_tol` raises
    NumericalError, since the grid is then too coarse.
    """
    method = Method(method)
    psi = as_state(psi0, system.n)
    if method is Method.MIDPOINT and not system.is_hermitian:
        raise ConventionError("midpoint exponential propagation needs a Hermitian system")
    if drift_tol < DRIFT_FLOOR:
        raise InputError(f"drift tolerance must be >= {DRIFT_FLOOR}, got {drift_tol}")

    states = np.empty((grid.steps + 1, system.n), dtype=complex)
    states[0] = psi
    # an unstable run may overflow; the drift check below reports it
    with np.errstate(over="ignore", invalid="ignore"):
        for lo in range(0, grid.steps, _CHUNK):
            hi = min(lo + _CHUNK, grid.steps)
            steps = _step_matrices(system, profile, grid, method, lo, hi)
            for k in range(hi - lo):
                psi = steps[k] @ psi
                states[lo + k + 1] = psi
        traj = StateTrajectory(grid, states)
        drift = traj.max_drift
    if system.is_hermitian:
        if not drift <= drift_tol:
            raise NumericalError(
                f"norm drift {drift:.3e} exceeds {drift_tol:.1e}; increase grid steps")
    return traj


@dataclass
class AdiabaticResult:
    """Adiabatic-basis view of a trajectory. Column ``j`` follows one
    eigenbranch, labelled by its energy rank at the first grid point."""

    amplitudes: np.ndarray
    energies: np.ndarray
    phases: np.ndarray

    @property
    def populations(self):
        return np.abs(self.amplitudes) ** 2


def _fix_gauge(vecs):
    # largest-magnitude component of every eigenvector made real positive
    idx = np.argmax(np.abs(vecs), axis=1)
    lead = np.take_along_axis(vecs, idx[:, None, :], axis=1)[:, 0, :]
    return vecs * (np.conj(lead) / np.abs(lead))[:, None, :]


def instantaneous_basis(system, profile, times):
    """Energy-sorted eigenpairs of H(t) at each time, gauge fixed."""
    if not system.is_hermitian:
        raise ConventionError("adiabatic basis needs a Hermitian system")
    w, v = eigh_batch(hamiltonian_stack(system, profile, times))
    return w, _fix_gauge(v)


def adiabatic_state(system, profile, t, branch=0):
    """Instantaneous eigenstate number `branch` (0 = ground) at time `t`."""
    _, v = instantaneous_basis(system, profile, np.array([float(t)]))
    if not 0 <= branch < system.n:
        raise InputError(f"branch {branch} out of range for n={system.n}")
    return v[0, :, branch]


def adiabatic_populations(system, profile, traj):
    """Project a trajectory onto continuously tracked eigenbranches.

    Eigenvectors at consecutive grid points are matched by maximal overlap;
    the amplitude of branch j is ``<chi_j|psi> * exp(i * Phi_j)`` with
    ``Phi_j`` the trapezoid-integrated branch energy.
    """
    grid = traj.grid
    n = system.n
    times = grid.points()
    w, v = instantaneous_basis(system, profile, times)

    overlap = np.abs(np.conj(np.swapaxes(v[:-1], 1, 2)) @ v[1:])
    best = np.argmax(overlap, axis=2)
    if n > 1:
        top2 = np.sort(overlap, axis=2)[:, :, -2:]
        bad = np.abs(top2[:, :, 1] - top2[:, :, 0]) < AMBIGUITY_TOL
        if bad.any():
            k = int(np.argwhere(bad)[0, 0])
            raise NumericalError(
                f"eigenbranch ambiguity between t={times[k]:.6g} and t={times[k + 1]:.6g}; "
                "refine the grid near the avoided crossing")
    ident = np.arange(n)
    moves = np.flatnonzero(np.any(best != ident, axis=1))
    for k in moves:
        if np.unique(best[k]).size != n:
            raise NumericalError(f"eigenbranch matching is not one-to-one at t={times[k + 1]:.6g}")

    # pos[k, b] = energy rank of branch b at grid point k
    pos = np.empty((grid.steps + 1, n), dtype=int)
    cur = ident.copy()
    last = 0
    for k in moves:
        pos[last:k + 1] = cur
        cur = best[k][cur]
        last = k + 1
    pos[last:] = cur

    energies = np.take_along_axis(w, pos, axis=1)
    vecs = np.take_along_axis(v, pos[:, None, :], axis=2)
    proj = np.einsum("kib,ki->kb", np.conj(vecs), traj.states)
    phases = cumulative_samples(grid, energies)
    return AdiabaticResult(proj * np.exp(1j * phases), energies, phases)


def _level_eigenstate(system, profile, t, level):
    """Instantaneous eigenstate with the largest weight on diabatic `level`."""
    _, v = instantaneous_basis(system, profile, np.array([float(t)]))
    return v[0, :, int(np.argmax(np.abs(v[0, level, :])))]


def lz_survival(eps, profile, span, method=Method.RK4, readout="diabatic"):
    """Population left in level 1 after sweeping two calibrated levels
    (signs +1, -1, coupling `eps`) across `span`.

    With ``readout="diabatic"`` the run starts in basis state 1 and returns
    its final population. ``readout="asymptotic"`` instead starts in, and
    projects onto, the instantaneous eigenstates that continue level 1 at the
    two ends of the span, which removes the finite-span interference terms
    of order ``eps / |gamma(t_end)|``.
    """
    if eps < 0:
        raise InputError(f"eps must be non-negative, got {eps}")
    if readout not in ("diabatic", "asymptotic"):
        raise InputError(f"readout must be diabatic or asymptotic, got {readout!r}")
    g0, g1 = gamma(profile, span.t0), gamma(profile, span.t1)
    if min(abs(g0), abs(g1)) < SPAN_GUARD * eps:
        raise InputError(
            f"span too short: |gamma| at the ends ({abs(g0):.3g}, {abs(g1):.3g}) "
            f"must be >= {SPAN_GUARD:g} * eps = {SPAN_GUARD * eps:.3g}")
    if eps == 0:
        # decoupled levels never exchange population
        return 1.0
    system = LevelSystem.two_level(eps)
    if readout == "diabatic":
        traj = evolve(system, profile, basis_state(2, 0), span, method)
        return float(traj.populations[-1, 0])
    start = _level_eigenstate(system, profile, span.t0, 0)
    end = _level_eigenstate(system, profile, span.t1, 0)
    traj = evolve(system, profile, start, span, method)
    return float(abs(np.vdot(end, traj.final)) ** 2)
