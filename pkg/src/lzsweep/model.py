"""Tridiagonal n-level Hamiltonian driven by a sweep field.

Level ``m`` carries the energy ``offsets[m] + signs[m] * gamma(t)`` and
couples to its neighbour through a constant ``couplings[k]``. Two knobs
select the convention:

* ``hermiticity`` -- ``hermitian`` puts ``+eps`` on both off-diagonals;
  ``paper_literal`` keeps the ``+eps`` above / ``-eps`` below pattern,
  which is not Hermitian.
* ``scaling`` -- ``calibrated`` halves both the field and the coupling so
  a two-level crossing at rate alpha has survival ``exp(-pi eps^2 / 2 alpha)``;
  ``literal`` uses the raw entries.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConventionError, InputError
from .numerics import check_hermitian
from .sweep import gamma


class Hermiticity(str, Enum):
    HERMITIAN = "hermitian"
    PAPER_LITERAL = "paper_literal"


class Scaling(str, Enum):
    CALIBRATED = "calibrated"
    LITERAL = "literal"


def alternating_signs(n):
    return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)


@dataclass
class LevelSystem:
    offsets: np.ndarray
    signs: np.ndarray
    couplings: np.ndarray
    hermiticity: Hermiticity = Hermiticity.HERMITIAN
    scaling: Scaling = Scaling.CALIBRATED

    def __post_init__(self):
        self.offsets = np.atleast_1d(np.asarray(self.offsets, dtype=float))
        self.signs = np.atleast_1d(np.asarray(self.signs, dtype=float))
        self.couplings = np.asarray(self.couplings, dtype=float).reshape(-1)
        try:
            self.hermiticity = Hermiticity(self.hermiticity)
            self.scaling = Scaling(self.scaling)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        n = self.offsets.size
        if n < 1:
            raise InputError("a level system needs at least one level")
        if self.signs.size != n:
            raise InputError(f"expected {n} signs, got {self.signs.size}")
        if self.couplings.size != n - 1:
            raise InputError(f"expected {n - 1} couplings, got {self.couplings.size}")
        if not np.all(np.isin(self.signs, (-1.0, 1.0))):
            raise InputError(f"signs must be +1 or -1, got {self.signs.tolist()}")
        if not (np.all(np.isfinite(self.offsets)) and np.all(np.isfinite(self.couplings))):
            raise InputError("offsets and couplings must be finite")
        if np.any(self.couplings < 0):
            raise InputError("couplings must be positive (or exactly zero)")

    @classmethod
    def chain(cls, n, couplings=0.0, signs=None, offsets=None, **kw):
        """n levels with alternating signs and zero offsets unless given.
        A scalar coupling is shared by every neighbouring pair."""
        if n < 1:
            raise InputError(f"n must be >= 1, got {n}")
        couplings = np.broadcast_to(np.asarray(couplings, dtype=float), (n - 1,))
        signs = alternating_signs(n) if signs is None else signs
        offsets = np.zeros(n) if offsets is None else offsets
        return cls(offsets, signs, couplings, **kw)

    @classmethod
    def two_level(cls, eps, **kw):
        return cls.chain(2, eps, **kw)

    @property
    def n(self):
        return self.offsets.size

    @property
    def scale(self):
        return 0.5 if self.scaling is Scaling.CALIBRATED else 1.0

    @property
    def is_hermitian(self):
        return self.hermiticity is Hermiticity.HERMITIAN


@dataclass
class TridiagonalMatrix:
    diag: np.ndarray
    sup: np.ndarray
    sub: np.ndarray
    hermiticity: Hermiticity = field(default=Hermiticity.HERMITIAN)

    def __post_init__(self):
        self.diag = np.atleast_1d(np.asarray(self.diag, dtype=float))
        self.sup = np.asarray(self.sup, dtype=float).reshape(-1)
        self.sub = np.asarray(self.sub, dtype=float).reshape(-1)
        self.hermiticity = Hermiticity(self.hermiticity)
        n = self.diag.size
        if self.sup.size != n - 1 or self.sub.size != n - 1:
            raise InputError("off-diagonals must have length n - 1")

    @property
    def n(self):
        return self.diag.size

    def dense(self):
        return np.diag(self.diag) + np.diag(self.sup, 1) + np.diag(self.sub, -1)


def _sub_sign(system):
    return 1.0 if system.is_hermitian else -1.0


def hamiltonian_at(system, profile, t):
    """Tridiagonal snapshot H(t)."""
    s = system.scale
    g = gamma(profile, t)
    sup = system.couplings * s
    return TridiagonalMatrix(
        diag=system.offsets + system.signs * g * s,
        sup=sup,
        sub=_sub_sign(system) * sup,
        hermiticity=system.hermiticity,
    )


def static_and_drive(system):
    """Dense real matrices with ``H(t) = static + gamma(t) * drive``."""
    s = system.scale
    sup = system.couplings * s
    static = np.diag(system.offsets) + np.diag(sup, 1) + np.diag(_sub_sign(system) * sup, -1)
    drive = np.diag(system.signs * s)
    return static, drive


def hamiltonian_stack(system, profile, times):
    """Dense H(t) for every entry of `times`, shape (len(times), n, n)."""
    static, drive = static_and_drive(system)
    g = np.asarray(gamma(profile, np.asarray(times, dtype=float)))
    return static[None] + g[:, None, None] * drive[None]


def to_hermitian(m):
    """Promote a Hermitian-mode tridiagonal snapshot to a dense complex matrix."""
    if m.hermiticity is not Hermiticity.HERMITIAN:
        raise ConventionError("a paper_literal (non-Hermitian) matrix cannot be promoted")
    return check_hermitian(m.dense())
