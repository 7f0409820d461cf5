"""Small dense numerical kernel: time grids, trapezoid quadrature and a
batched cyclic Jacobi eigensolver for Hermitian matrices.

Units are dimensionless with hbar = 1 everywhere in the package.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalError

MAX_SWEEPS = 100
MAX_DIM = 64
HERMITIAN_TOL = 1e-12
# relative off-diagonal Frobenius norm at which a Jacobi run counts as converged
_JACOBI_TOL = 1e-15


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t0 + k*(t1 - t0)/steps`` for ``k = 0..steps``."""

    t0: float
    t1: float
    steps: int

    def __post_init__(self):
        if not (np.isfinite(self.t0) and np.isfinite(self.t1)):
            raise InputError("grid bounds must be finite")
        if not self.t1 > self.t0:
            raise InputError(f"grid needs t1 > t0, got [{self.t0}, {self.t1}]")
        if int(self.steps) != self.steps or self.steps < 1:
            raise InputError(f"grid steps must be a positive integer, got {self.steps}")
        object.__setattr__(self, "steps", int(self.steps))

    @property
    def dt(self):
        return (self.t1 - self.t0) / self.steps

    def points(self):
        return self.t0 + np.arange(self.steps + 1) * self.dt

    def midpoints(self):
        return self.t0 + (np.arange(self.steps) + 0.5) * self.dt

    def __len__(self):
        return self.steps + 1


def check_hermitian(a, tol=HERMITIAN_TOL):
    """Return `a` as a complex square array, raising InputError unless it is
    Hermitian to within ``tol * max(1, max|a|)``."""
    a = np.asarray(a, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise InputError(f"expected square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    err = np.max(np.abs(a - np.conj(np.swapaxes(a, -1, -2)))) if a.size else 0.0
    if err > tol * scale:
        raise InputError(f"matrix is not Hermitian (asymmetry {err:.3e})")
    return a


def _jacobi(a):
    """Cyclic complex Jacobi on a stack ``a`` of shape (batch, n, n).

    Works in place on `a`; returns (eigenvalues, eigenvectors) unsorted.
    Every matrix in the batch sees the same (p, q) rotation order, each with
    its own angle, so a stack of small matrices costs about as much as one.
    """
    b, n, _ = a.shape
    v = np.zeros_like(a)
    v[:, np.arange(n), np.arange(n)] = 1.0
    if n == 1:
        return a[:, :, 0].real.copy(), v

    offmask = ~np.eye(n, dtype=bool)
    scale = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    for _ in range(MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
        if np.all(off <= _JACOBI_TOL * scale):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                r = np.abs(apq)
                live = r > 0.0
                if not live.any():
                    continue
                rs = np.where(live, r, 1.0)
                e = np.where(live, apq / rs, 1.0)
                app = a[:, p, p].real.copy()
                aqq = a[:, q, q].real.copy()
                theta = (aqq - app) / (2.0 * rs)
                sgn = np.where(theta >= 0.0, 1.0, -1.0)
                with np.errstate(over="ignore"):
                    t = sgn / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                t = np.where(live, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # W = diag(1, conj(e)) @ [[c, s], [-s, c]] acting on (p, q)
                se = (s * e)[:, None]
                ce = (c * e)[:, None]
                cc = c[:, None]
                ss = s[:, None]
                rp = a[:, p, :].copy()
                rq = a[:, q, :]
                a[:, p, :] = cc * rp - se * rq
                a[:, q, :] = ss * rp + ce * rq
                cp = a[:, :, p].copy()
                cq = a[:, :, q]
                a[:, :, p] = cc * cp - np.conj(se) * cq
                a[:, :, q] = ss * cp + np.conj(ce) * cq
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0
                a[:, p, p] = app - t * r
                a[:, q, q] = aqq + t * r
                vp = v[:, :, p].copy()
                vq = v[:, :, q]
                v[:, :, p] = cc * vp - np.conj(se) * vq
                v[:, :, q] = ss * vp + np.conj(ce) * vq
    else:
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
        if not np.all(off <= _JACOBI_TOL * scale):
            raise NumericalError(f"Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps")
    return np.diagonal(a, axis1=1, axis2=2).real.copy(), v


def eigh_batch(stack, check=True):
    """Eigen-decompose a stack of Hermitian matrices, shape (batch, n, n).

    Returns eigenvalues (batch, n), ascending per matrix, and eigenvectors
    (batch, n, n) with column ``k`` paired to eigenvalue ``k``.
    """
    stack = check_hermitian(stack) if check else np.asarray(stack, dtype=complex)
    if stack.ndim != 3:
        raise InputError(f"expected a (batch, n, n) stack, got shape {stack.shape}")
    if stack.shape[-1] > MAX_DIM:
        raise InputError(f"dimension {stack.shape[-1]} exceeds desk-scale limit {MAX_DIM}")
    # symmetrize so rounding-level asymmetry does not leak into the rotations
    a = 0.5 * (stack + np.conj(np.swapaxes(stack, 1, 2)))
    w, v = _jacobi(a)
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v


def eigh(m):
    """Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian `m`."""
    m = check_hermitian(m)
    if m.ndim != 2:
        raise InputError(f"expected a single matrix, got shape {m.shape}")
    w, v = eigh_batch(m[None], check=False)
    return w[0], v[0]


def unitary_steps(stack, dt):
    """``exp(-1j * h * dt)`` for every matrix of a Hermitian stack."""
    if not np.isfinite(dt):
        raise InputError("dt must be finite")
    w, v = eigh_batch(stack)
    phase = np.exp(-1j * w * dt)
    return (v * phase[:, None, :]) @ np.conj(np.swapaxes(v, 1, 2))


def unitary_step(h, dt):
    """``exp(-1j * h * dt)`` built from the eigendecomposition of `h`."""
    h = check_hermitian(h)
    return unitary_steps(h[None], dt)[0]


def _samples(grid, values):
    values = np.asarray(values)
    if values.shape[0] != grid.steps + 1:
        raise InputError(f"expected {grid.steps + 1} samples, got {values.shape[0]}")
    return values


def integrate_samples(grid, values):
    """Composite trapezoid rule over `grid`. Integrates along axis 0."""
    values = _samples(grid, values)
    return grid.dt * (values.sum(axis=0) - 0.5 * (values[0] + values[-1]))


def cumulative_samples(grid, values):
    """Running trapezoid integral; element ``k`` is the integral up to ``t_k``."""
    values = _samples(grid, values)
    out = np.zeros(values.shape, dtype=np.result_type(values, float))
    np.cumsum(0.5 * grid.dt * (values[1:] + values[:-1]), axis=0, out=out[1:])
    return out
