"""Seeded property suite behind ``lzsweep validate``.

Each check returns a dict with ``name``, ``passed`` and the measured
values. The seed changes the random instances only; grids and physical
parameters are fixed, so the report is byte-identical for a given seed.
"""
import math

import numpy as np

from .analytic import figure1a_data, figure1b_data, lz_classic, crossing_sine_probability
from .dynamics import (adiabatic_populations, adiabatic_state, basis_state, evolve,
                       lz_survival)
from .model import LevelSystem, TridiagonalMatrix
from .morris_shore import BlockHamiltonian, ms_transform
from .numerics import TimeGrid, eigh
from .sweep import Linear, Sinusoidal
from .triangular import cascade_discrepancy, triangularize

LZ_EPS = (0.1, 0.2)
LZ_ALPHA = (0.02, 0.05, 0.1)
LZ_SPAN = TimeGrid(-400.0, 400.0, 80_000)
LZ_TOL = 1e-2
UNITARITY_TOL = 1e-8
# cascade comparison: grid offset by half a step so h_1 = gamma/2 is never exactly zero
CASCADE_GRID = TimeGrid(0.0005, 10.0005, 10_000)
CASCADE_FINE = TimeGrid(0.0, 10.0, 400_000)
CASCADE_PSI0 = np.array([1.0, 1.0]) / math.sqrt(2.0)


def elimination_pivots(t):
    """Pivots from eliminating the superdiagonal of a dense matrix with
    column operations (col_{k+1} -= t[k, k+1] / t[k, k] * col_k)."""
    a = np.array(t, dtype=float)
    n = a.shape[0]
    for k in range(n - 1):
        f = a[k, k + 1] / a[k, k]
        for i in range(n):
            a[i, k + 1] -= f * a[i, k]
    return np.diag(a).copy()


def random_tridiagonal(rng, n):
    diag = rng.uniform(1.0, 5.0, n)
    sup = rng.uniform(-0.5, 0.5, n - 1)
    sub = rng.uniform(-0.5, 0.5, n - 1)
    return TridiagonalMatrix(diag, sup, sub)


def random_hermitian(rng, n):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (x + np.conj(x.T))


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(v)


def _result(name, passed, **values):
    return {"name": name, "passed": bool(passed),
            "values": {k: _plain(v) for k, v in values.items()}}


def check_eigh(rng, count=20):
    worst_rec = worst_orth = 0.0
    for _ in range(count):
        m = random_hermitian(rng, int(rng.integers(1, 17)))
        w, v = eigh(m)
        scale = max(1.0, np.max(np.abs(m)))
        worst_rec = max(worst_rec, np.max(np.abs(v @ np.diag(w) @ np.conj(v.T) - m)) / scale)
        worst_orth = max(worst_orth, np.max(np.abs(np.conj(v.T) @ v - np.eye(len(w)))))
    return _result("eigh_reconstruction", worst_rec <= 1e-10 and worst_orth <= 1e-10,
                   max_reconstruction_error=worst_rec, max_orthogonality_error=worst_orth)


def check_factorization(rng, count=100):
    worst_rec = worst_piv = 0.0
    for _ in range(count):
        t = random_tridiagonal(rng, int(rng.integers(1, 11)))
        f = triangularize(t)
        worst_rec = max(worst_rec, np.max(np.abs(f.reconstruct() - t.dense())))
        worst_piv = max(worst_piv, np.max(np.abs(f.h - elimination_pivots(t.dense()))))
    return _result("factorization_reconstruction", worst_rec <= 1e-12 and worst_piv <= 1e-13,
                   max_reconstruction_error=worst_rec, max_pivot_mismatch=worst_piv)


def check_lz():
    errs, asym = [], []
    for eps in LZ_EPS:
        for alpha in LZ_ALPHA:
            exact = lz_classic(eps, alpha)
            p = lz_survival(eps, Linear(alpha), LZ_SPAN, "midpoint")
            q = lz_survival(eps, Linear(alpha), LZ_SPAN, "midpoint", readout="asymptotic")
            errs.append(abs(p - exact))
            asym.append(abs(q - exact))
    return [
        _result("lz_formula_agreement", max(errs) <= LZ_TOL, max_error=max(errs), errors=errs),
        _result("lz_formula_agreement_asymptotic", max(asym) <= LZ_TOL,
                max_error=max(asym), errors=asym),
    ]


def check_unitarity(rng):
    drifts = []
    eps_cases = [(eps, alpha) for eps in LZ_EPS for alpha in LZ_ALPHA]
    for eps, alpha in eps_cases:
        traj = evolve(LevelSystem.two_level(eps), Linear(alpha), basis_state(2, 0), LZ_SPAN, "midpoint")
        drifts.append(traj.max_drift)
    psi = rng.normal(size=3) + 1j * rng.normal(size=3)
    psi /= np.linalg.norm(psi)
    system = LevelSystem.chain(3, [0.3, 0.2])
    for method, steps in (("midpoint", 20_000), ("rk4", 20_000)):
        traj = evolve(system, Sinusoidal(1.0, 1.0), psi, TimeGrid(0.0, 20.0, steps), method)
        drifts.append(traj.max_drift)
    return _result("unitarity", max(drifts) <= UNITARITY_TOL, max_norm_drift=max(drifts),
                   runs=len(drifts))


def check_morris_shore(rng, count=50):
    w_unit = w_off = w_sv = w_spec = 0.0
    for _ in range(count):
        na, nb = int(rng.integers(1, 6)), int(rng.integers(1, 5))
        v = rng.normal(size=(na, nb)) + 1j * rng.normal(size=(na, nb))
        h = BlockHamiltonian(v, rng.normal(size=nb))
        r = ms_transform(h)
        s = r.s
        k = min(na, nb)
        off = r.v_bar.copy()
        off[np.arange(k), np.arange(k)] = 0.0
        gram = np.linalg.eigvalsh(np.conj(v.T) @ v)[::-1][:k]
        sv = np.sqrt(np.clip(gram, 0.0, None))
        smax = max(1.0, float(sv[0]))
        w_unit = max(w_unit, np.max(np.abs(np.conj(s.T) @ s - np.eye(na + nb))))
        w_off = max(w_off, np.max(np.abs(off)) / smax)
        w_sv = max(w_sv, np.max(np.abs(np.diag(r.v_bar)[:k] - sv)))
        w_spec = max(w_spec, np.max(np.abs(np.linalg.eigvalsh(r.h_transformed)
                                           - np.linalg.eigvalsh(h.dense()))))
    ok = w_unit <= 1e-10 and w_off <= 1e-10 and w_sv <= 1e-10 and w_spec <= 1e-9
    return _result("morris_shore", ok, max_unitarity_error=w_unit, max_offdiagonal=w_off,
                   max_singular_value_error=w_sv, max_spectrum_error=w_spec)


def check_cascade():
    p = Sinusoidal(1.0, 1.0)
    zero = cascade_discrepancy(LevelSystem.two_level(0.0), p, CASCADE_PSI0, CASCADE_FINE)
    d1 = cascade_discrepancy(LevelSystem.two_level(1e-3), p, CASCADE_PSI0, CASCADE_GRID)
    d2 = cascade_discrepancy(LevelSystem.two_level(2e-3), p, CASCADE_PSI0, CASCADE_GRID)
    ratio = d2 / d1 if d1 > 0 else math.inf
    ok = zero <= 1e-10 and 0 < d1 <= 5e-2 and 1.4 <= ratio <= 2.6
    return _result("cascade_scaling", ok, discrepancy_eps0=zero, discrepancy_eps1e3=d1,
                   discrepancy_eps2e3=d2, doubling_ratio=ratio)


FIG1B_GRID = TimeGrid(0.0, 2 * math.pi, 628)
FIG1B_OMEGAS = (1.0, 2.0)


def figure1b_crossing_values(times, cols, omegas):
    """Column values at the table rows closest to the crossings t = k*pi/omega."""
    out = []
    for j, w in enumerate(omegas):
        ks = np.arange(0, int(times[-1] * w / math.pi) + 1)
        rows = np.unique([int(np.argmin(np.abs(times - k * math.pi / w))) for k in ks])
        out.append((times[rows], cols[rows, j]))
    return out


def check_figures():
    alphas, p = figure1a_data(0.1, 0.001, 10.0, 50)
    fig_a = bool(np.all(np.diff(p) > 0)) and p[0] <= math.exp(-5 * math.pi) and p[-1] >= 0.995
    times, cols = figure1b_data(0.1, 1.0, FIG1B_OMEGAS, FIG1B_GRID)
    closed = [crossing_sine_probability(0.1, 1.0, w) for w in FIG1B_OMEGAS]

    # as stated: the column minimum should equal the closed form
    mins = np.nanmin(cols, axis=0)
    min_err = max(abs(m - c) for m, c in zip(mins, closed))
    literal = mins[1] > mins[0] and min_err <= 1e-9

    # what holds: the closed form is reached at crossings, where P peaks
    at_cross = figure1b_crossing_values(times, cols, FIG1B_OMEGAS)
    cross_err = max(float(np.max(np.abs(v - c))) for (_, v), c in zip(at_cross, closed))
    maxes = np.nanmax(cols, axis=0)
    peak_err = max(abs(m - c) for m, c in zip(maxes, closed))
    corrected = cross_err <= 1e-9 and peak_err <= 1e-9 and closed[1] > closed[0]
    return [
        _result("figure1a_shape", fig_a, p_first=p[0], p_last=p[-1]),
        _result("figure1b_min_ordering", literal, min_p_omega1=mins[0],
                min_p_omega2=mins[1], max_closed_form_error=min_err),
        _result("figure1b_crossing_values", corrected, closed_form_omega1=closed[0],
                closed_form_omega2=closed[1], max_crossing_error=cross_err,
                max_peak_error=peak_err),
    ]


def check_adiabatic():
    system = LevelSystem.two_level(0.5)
    profile = Linear(0.005)
    grid = TimeGrid(-200.0, 200.0, 40_000)
    psi0 = adiabatic_state(system, profile, grid.t0, 0)
    traj = evolve(system, profile, psi0, grid, "midpoint")
    ad = adiabatic_populations(system, profile, traj)
    ground = float(ad.populations[-1, 0])
    completeness = float(np.max(np.abs(ad.populations.sum(axis=1) - 1.0)))
    return _result("adiabatic_following", ground >= 0.999 and completeness <= 1e-8,
                   final_ground_population=ground, max_completeness_error=completeness)


def run_validation(seed=42):
    rng = np.random.default_rng(seed)
    checks = [
        check_eigh(rng),
        check_factorization(rng),
        check_unitarity(rng),
        *check_lz(),
        check_morris_shore(rng),
        check_cascade(),
        *check_figures(),
        check_adiabatic(),
    ]
    return {
        "seed": int(seed),
        "all_passed": all(c["passed"] for c in checks),
        "properties": checks,
    }
