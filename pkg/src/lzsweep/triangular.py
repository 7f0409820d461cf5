"""Reduction of a tridiagonal Hamiltonian to lower-bidiagonal form and the
level-by-level (cascade) solution of the resulting equations.

A tridiagonal ``T`` factors as ``T = G @ M`` where ``G`` is lower
bidiagonal (diagonal ``h``, subdiagonal equal to the subdiagonal of ``T``)
and ``M`` is unit upper bidiagonal with superdiagonal ``sup_k / h_k``. The
pivots follow ``h_1 = d_1`` and ``h_{k+1} = d_{k+1} + p_k`` with
``p_k = -sub_k * sup_k / h_k``; for the ``+eps`` / ``-eps`` pattern this is
``p_k = eps_k**2 / h_k``.

Replacing ``T`` by ``G`` in the Schroedinger equation gives equations that
can be solved one level at a time. That substitution is not a similarity
transform, so the cascade generally differs from the exact evolution;
:func:`cascade_discrepancy` measures by how much.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dynamics import Method, StateTrajectory, as_state, evolve
from .errors import SingularPivotError
from .model import TridiagonalMatrix, hamiltonian_at
from .numerics import cumulative_samples
from .sweep import gamma

PIVOT_TOL = 1e-12


class Recursion(str, Enum):
    CORRECTED = "corrected"
    PAPER_LITERAL = "paper_literal"


@dataclass
class TriangularFactorization:
    h: np.ndarray
    p: np.ndarray
    gamma_sub: np.ndarray
    m_sup: np.ndarray

    def gamma_matrix(self):
        return np.diag(self.h) + np.diag(self.gamma_sub, -1)

    def m_matrix(self):
        return np.eye(self.h.size) + np.diag(self.m_sup, 1)

    def reconstruct(self):
        return self.gamma_matrix() @ self.m_matrix()


def _pivot_floor(diag):
    return PIVOT_TOL * np.max(np.abs(diag), axis=-1)


def triangularize(m, recursion=Recursion.CORRECTED):
    """Pivots and factors of a tridiagonal matrix.

    ``corrected`` produces factors with ``G @ M == T``. ``paper_literal``
    evaluates ``h_{k+1} = d_k + sup_k**2 / h_k`` as printed (diagonal index
    k, not k+1); its factors do not reconstruct ``T``.

    A pivot is only checked where it is used as a divisor, i.e. where the
    coupling that follows it is nonzero.
    """
    recursion = Recursion(recursion)
    d, sup, sub = m.diag, m.sup, m.sub
    n = d.size
    floor = _pivot_floor(d)
    h = np.empty(n)
    p = np.zeros(n - 1)
    msup = np.zeros(n - 1)
    h[0] = d[0]
    for k in range(n - 1):
        coupled = sup[k] != 0.0 or sub[k] != 0.0
        if coupled:
            if abs(h[k]) <= floor:
                raise SingularPivotError(k + 1, value=h[k])
            msup[k] = sup[k] / h[k]
        if recursion is Recursion.CORRECTED:
            if coupled:
                p[k] = -sub[k] * sup[k] / h[k]
            h[k + 1] = d[k + 1] + p[k]
        else:
            if coupled:
                p[k] = sup[k] ** 2 / h[k]
            h[k + 1] = d[k] + p[k]
    return TriangularFactorization(h, p, sub.copy(), msup)


def _pivot_history(system, profile, times):
    """Corrected pivots h_k(t) for every time, shape (len(times), n)."""
    snap = hamiltonian_at(system, profile, 0.0)
    sup, sub = snap.sup, snap.sub
    g = np.asarray(gamma(profile, times))
    s = system.scale
    diag = system.offsets[None, :] + g[:, None] * (system.signs * s)[None, :]
    floor = _pivot_floor(diag)
    h = np.empty_like(diag)
    h[:, 0] = diag[:, 0]
    for k in range(system.n - 1):
        if sup[k] != 0.0 or sub[k] != 0.0:
            bad = np.abs(h[:, k]) <= floor
            if bad.any():
                i = int(np.argmax(bad))
                raise SingularPivotError(k + 1, time=float(times[i]), value=float(h[i, k]))
            h[:, k + 1] = diag[:, k + 1] - sub[k] * sup[k] / h[:, k]
        else:
            h[:, k + 1] = diag[:, k + 1]
    return h, sub


def cascade_evolve(system, profile, psi0, grid):
    """Solve ``i psi' = G(t) psi`` level by level on `grid`.

    Level 1 is a pure phase; level k is driven by level k-1 and solved by
    variation of parameters with trapezoid integrals on the same grid.
    Norm is not conserved in general and is not checked.
    """
    psi0 = as_state(psi0, system.n)
    times = grid.points()
    h, sub = _pivot_history(system, profile, times)
    phases = cumulative_samples(grid, h)
    states = np.empty((times.size, system.n), dtype=complex)
    states[:, 0] = psi0[0] * np.exp(-1j * phases[:, 0])
    for k in range(1, system.n):
        rot = np.exp(1j * phases[:, k])
        drive = cumulative_samples(grid, rot * sub[k - 1] * states[:, k - 1])
        states[:, k] = np.conj(rot) * (psi0[k] - 1j * drive)
    return StateTrajectory(grid, states)


def cascade_discrepancy(system, profile, psi0, grid, method=Method.RK4):
    """Largest Euclidean distance over the grid between the cascade solution
    and the full propagation."""
    exact = evolve(system, profile, psi0, grid, method)
    approx = cascade_evolve(system, profile, psi0, grid)
    return float(np.max(np.linalg.norm(exact.states - approx.states, axis=1)))
