"""External sweep fields gamma(t) and their rates.

Three profiles are supported: a linear ramp ``alpha * t``, a sinusoid
``A * sin(omega * t)`` and a tabulated field interpolated linearly between
samples on a uniform grid. All evaluators accept scalars or numpy arrays.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateProfileError, InputError
from .numerics import TimeGrid

ZERO_TOL = 1e-12
TANGENT_TOL = 1e-10
MIN_GAP = 1e-9


@dataclass(frozen=True)
class Linear:
    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise InputError("linear sweep rate must be finite")


@dataclass(frozen=True)
class Sinusoidal:
    amplitude: float
    omega: float

    def __post_init__(self):
        if not (self.amplitude > 0 and math.isfinite(self.amplitude)):
            raise InputError(f"sinusoidal amplitude must be positive, got {self.amplitude}")
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise InputError(f"sinusoidal omega must be positive, got {self.omega}")


@dataclass(frozen=True, eq=False)
class Tabulated:
    grid: TimeGrid
    samples: np.ndarray

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size != self.grid.steps + 1:
            raise InputError(
                f"tabulated sweep needs {self.grid.steps + 1} samples, got {samples.size}")
        if not np.all(np.isfinite(samples)):
            raise InputError("tabulated samples must be finite")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def _check_range(self, t):
        t = np.asarray(t, dtype=float)
        # allow rounding slack at the ends
        slack = 1e-12 * max(1.0, abs(self.grid.t0), abs(self.grid.t1))
        if np.any(t < self.grid.t0 - slack) or np.any(t > self.grid.t1 + slack):
            raise InputError(
                f"time outside tabulated range [{self.grid.t0}, {self.grid.t1}]")
        return np.clip(t, self.grid.t0, self.grid.t1)

    def node_rates(self):
        # central differences inside, one-sided at the two ends
        return np.gradient(self.samples, self.grid.dt, edge_order=1)


SweepProfile = Linear | Sinusoidal | Tabulated


def _out(t, value):
    return float(value) if np.ndim(t) == 0 else value


def gamma(p, t):
    """Field value gamma(t)."""
    if isinstance(p, Linear):
        return _out(t, p.alpha * np.asarray(t, dtype=float))
    if isinstance(p, Sinusoidal):
        return _out(t, p.amplitude * np.sin(p.omega * np.asarray(t, dtype=float)))
    if isinstance(p, Tabulated):
        tc = p._check_range(t)
        return _out(t, np.interp(tc, p.grid.points(), p.samples))
    raise InputError(f"unknown sweep profile {p!r}")


def gamma_rate(p, t):
    """Sweep rate d gamma / dt."""
    if isinstance(p, Linear):
        return _out(t, np.full(np.shape(t), p.alpha, dtype=float))
    if isinstance(p, Sinusoidal):
        tt = np.asarray(t, dtype=float)
        return _out(t, p.amplitude * p.omega * np.cos(p.omega * tt))
    if isinstance(p, Tabulated):
        tc = p._check_range(t)
        return _out(t, np.interp(tc, p.grid.points(), p.node_rates()))
    raise InputError(f"unknown sweep profile {p!r}")


class Crossing(NamedTuple):
    time: float
    tangential: bool = False


def _bisect(p, a, b, fa):
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = gamma(p, m)
        if abs(fm) <= ZERO_TOL or m == a or m == b:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _scan_points(p, t0, t1):
    if isinstance(p, Sinusoidal):
        w_char = p.omega
    elif isinstance(p, Tabulated):
        w_char = math.pi / p.grid.dt
    else:
        w_char = 1.0 / (t1 - t0)
    count = 10 * max(1, math.ceil((t1 - t0) * w_char / math.pi))
    ts = np.linspace(t0, t1, count)
    if isinstance(p, Tabulated):
        nodes = p.grid.points()
        ts = np.union1d(ts, nodes[(nodes > t0) & (nodes < t1)])
    return ts


def find_crossings(p, t0, t1):
    """Zeros of gamma on ``[t0, t1]`` in ascending order.

    Sign changes found on a scan grid are refined by bisection. A zero with
    vanishing rate is returned with ``tangential=True``. Raises
    DegenerateProfileError if gamma vanishes on a whole subinterval.
    """
    if not t0 < t1:
        raise InputError(f"need t0 < t1, got [{t0}, {t1}]")
    if isinstance(p, Linear):
        if p.alpha == 0.0:
            raise DegenerateProfileError("linear sweep with alpha = 0 vanishes identically")
        return [Crossing(0.0)] if t0 <= 0.0 <= t1 else []

    ts = _scan_points(p, t0, t1)
    gs = np.asarray(gamma(p, ts))
    found = []
    for i in range(len(ts)):
        if gs[i] == 0.0:
            if i + 1 < len(ts) and gs[i + 1] == 0.0:
                raise DegenerateProfileError(
                    f"sweep vanishes identically on [{ts[i]:.6g}, {ts[i + 1]:.6g}]")
            found.append(float(ts[i]))
        elif i + 1 < len(ts) and gs[i + 1] != 0.0 and (gs[i] > 0) != (gs[i + 1] > 0):
            found.append(_bisect(p, float(ts[i]), float(ts[i + 1]), gs[i]))

    out = []
    for t in sorted(found):
        if out and t - out[-1].time <= MIN_GAP:
            continue
        out.append(Crossing(t, abs(gamma_rate(p, t)) < TANGENT_TOL))
    return out
