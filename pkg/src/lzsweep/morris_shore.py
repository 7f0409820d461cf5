"""Morris-Shore transformation of a two-manifold Hamiltonian.

The Hamiltonian ``[[0, V], [V^dag, diag(D)]]`` couples an ``n_a``-level
manifold (zero energy) to an ``n_b``-level manifold. With unitary ``A``
diagonalizing ``V V^dag`` and ``B`` diagonalizing ``V^dag V``, the block
transform ``S = diag(A, B)`` turns the coupling block into
``V_bar = A V B^dag``, which is rectangular-diagonal with the singular
values of V on its diagonal, so the system splits into independent
two-level pairs plus uncoupled spectator states.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .numerics import eigh

RANK_TOL = 1e-10


@dataclass
class BlockHamiltonian:
    coupling: np.ndarray
    detunings: np.ndarray

    def __post_init__(self):
        self.coupling = np.atleast_2d(np.asarray(self.coupling, dtype=complex))
        if self.coupling.ndim != 2:
            raise InputError(f"coupling block must be 2-D, got shape {self.coupling.shape}")
        n_b = self.coupling.shape[1]
        d = np.zeros(n_b) if self.detunings is None else self.detunings
        self.detunings = np.atleast_1d(np.asarray(d, dtype=float))
        if self.detunings.shape != (n_b,):
            raise InputError(f"expected {n_b} detunings, got {self.detunings.size}")

    @property
    def n_a(self):
        return self.coupling.shape[0]

    @property
    def n_b(self):
        return self.coupling.shape[1]

    def dense(self):
        n_a = self.n_a
        h = np.zeros((n_a + self.n_b,) * 2, dtype=complex)
        h[:n_a, n_a:] = self.coupling
        h[n_a:, :n_a] = np.conj(self.coupling.T)
        h[n_a:, n_a:] = np.diag(self.detunings)
        return h


@dataclass
class MsResult:
    a: np.ndarray
    b: np.ndarray
    v_bar: np.ndarray
    h_transformed: np.ndarray

    @property
    def s(self):
        n_a, n_b = self.a.shape[0], self.b.shape[0]
        s = np.zeros((n_a + n_b,) * 2, dtype=complex)
        s[:n_a, :n_a] = self.a
        s[n_a:, n_a:] = self.b
        return s

    @property
    def singular_values(self):
        k = min(self.v_bar.shape)
        return self.v_bar[np.arange(k), np.arange(k)].real


def _complete_basis(rows, candidates):
    """Extend orthonormal `rows` with `candidates` by two-pass Gram-Schmidt."""
    basis = list(rows)
    for c in candidates:
        for _ in range(2):
            for b in basis:
                c = c - np.vdot(b, c) * b
        norm = np.linalg.norm(c)
        if norm > 1e-8:
            basis.append(c / norm)
    return np.array(basis)


def ms_transform(h):
    """Build ``S = diag(A, B)`` and the transformed Hamiltonian.

    Rows of A are eigenvectors of ``V V^dag`` in descending eigenvalue
    order. For nonzero singular values the matching rows of B are fixed as
    ``(V^dag a_i / sigma_i)^dag`` so that ``V_bar`` is real non-negative
    even inside degenerate clusters; the remaining rows of B span the null
    space of V, taken from the eigenvectors of ``V^dag V``.
    """
    if not isinstance(h, BlockHamiltonian):
        raise InputError("ms_transform expects a BlockHamiltonian")
    v = h.coupling
    n_a, n_b = v.shape

    wa, ua = eigh(v @ np.conj(v.T))
    ua = ua[:, ::-1]
    sig_a = np.sqrt(np.clip(wa[::-1], 0.0, None))
    wb, ub = eigh(np.conj(v.T) @ v)
    ub = ub[:, ::-1]

    smax = sig_a[0] if n_a else 0.0
    rank = int(np.sum(sig_a[:min(n_a, n_b)] > RANK_TOL * max(1.0, smax)))
    right = [np.conj(v.T) @ ua[:, i] / sig_a[i] for i in range(rank)]
    right = _complete_basis([], right)
    vb = _complete_basis(list(right), list(ub.T[rank:]) + list(np.eye(n_b)))
    if vb.shape[0] != n_b:
        raise InputError("could not complete the right singular basis")

    a = np.conj(ua.T)
    b = np.conj(vb)
    v_bar = a @ v @ np.conj(b.T)
    res = MsResult(a, b, v_bar, None)
    s = res.s
    res.h_transformed = s @ h.dense() @ np.conj(s.T)
    return res
