"""Closed-form Landau-Zener probabilities and the figure data built on them."""
import math
from enum import Enum

import numpy as np

from .errors import CrossingSingularityError, InputError
from .numerics import TimeGrid

RATE_TOL = 1e-9


class SineMode(str, Enum):
    ABS_RATE = "abs_rate"
    LITERAL_COS = "literal_cos"


def lz_classic(eps, alpha):
    """Survival ``exp(-pi eps^2 / (2 alpha))`` for a linear sweep at rate alpha."""
    if eps < 0:
        raise InputError(f"eps must be non-negative, got {eps}")
    if not alpha > 0:
        raise InputError(f"linear sweep rate must be positive, got {alpha}")
    return math.exp(-math.pi * eps * eps / (2.0 * alpha))


def _check_sine(eps, amplitude, omega):
    if eps < 0:
        raise InputError(f"eps must be non-negative, got {eps}")
    if not amplitude > 0:
        raise InputError(f"amplitude must be positive, got {amplitude}")
    if not omega > 0:
        raise InputError(f"omega must be positive, got {omega}")


def sine_probability(eps, amplitude, omega, t, mode=SineMode.ABS_RATE):
    """Vectorized sinusoidal-sweep probability; NaN where the formula is
    undefined (vanishing rate, or negative cosine in ``literal_cos`` mode)."""
    mode = SineMode(mode)
    _check_sine(eps, amplitude, omega)
    c = np.cos(omega * np.asarray(t, dtype=float))
    if mode is SineMode.ABS_RATE:
        c = np.abs(c)
    ok = c > RATE_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.exp(-math.pi * eps * eps / (2.0 * amplitude * omega * np.where(ok, c, 1.0)))
    return np.where(ok, p, np.nan)


def lz_sine(eps, amplitude, omega, t, mode=SineMode.ABS_RATE):
    """``exp(-pi eps^2 / (2 A omega cos(omega t)))``.

    ``abs_rate`` uses ``|cos|`` (the magnitude of the instantaneous sweep
    rate); ``literal_cos`` uses the signed cosine and is only defined where
    it is positive.
    """
    mode = SineMode(mode)
    _check_sine(eps, amplitude, omega)
    c = math.cos(omega * t)
    if abs(c) <= RATE_TOL:
        raise CrossingSingularityError(
            f"sweep rate vanishes at t={t:.12g} (cos(omega t) = {c:.3e})")
    if mode is SineMode.LITERAL_COS and c <= 0:
        raise InputError(f"literal formula undefined for cos(omega t) = {c:.6g} <= 0")
    return math.exp(-math.pi * eps * eps / (2.0 * amplitude * omega * abs(c)))


def figure1a_data(eps, alpha_min, alpha_max, points):
    """Log-spaced rates and their classical survival probabilities."""
    if not 0 < alpha_min < alpha_max:
        raise InputError(f"need 0 < alpha_min < alpha_max, got {alpha_min}, {alpha_max}")
    if int(points) != points or points < 2:
        raise InputError(f"need at least 2 points, got {points}")
    if eps < 0:
        raise InputError(f"eps must be non-negative, got {eps}")
    alphas = np.geomspace(alpha_min, alpha_max, int(points))
    return alphas, np.exp(-math.pi * eps * eps / (2.0 * alphas))


def figure1b_data(eps, amplitude, omegas, times, mode=SineMode.ABS_RATE):
    """Probability columns, one per omega, over `times` (an array or a
    TimeGrid); NaN marks cells where the formula is singular or undefined."""
    omegas = [float(w) for w in omegas]
    if not omegas:
        raise InputError("need at least one omega")
    if isinstance(times, TimeGrid):
        times = times.points()
    times = np.asarray(times, dtype=float)
    cols = [sine_probability(eps, amplitude, w, times, mode) for w in omegas]
    return times, np.column_stack(cols)


def crossing_sine_probability(eps, amplitude, omega):
    """Value at the level crossings ``t = k pi / omega``, where ``|cos| = 1``.

    This is the largest value of the ``abs_rate`` curve; it drops towards
    zero near the turning points of the sweep.
    """
    _check_sine(eps, amplitude, omega)
    return math.exp(-math.pi * eps * eps / (2.0 * amplitude * omega))
