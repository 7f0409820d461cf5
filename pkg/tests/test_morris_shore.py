import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lzsweep.errors import InputError
from lzsweep.morris_shore import BlockHamiltonian, ms_transform


def check_invariants(v, det=None):
    h = BlockHamiltonian(v, det)
    r = ms_transform(h)
    na, nb = h.n_a, h.n_b
    s = r.s
    assert np.max(np.abs(s.conj().T @ s - np.eye(na + nb))) <= 1e-10
    k = min(na, nb)
    off = r.v_bar.copy()
    off[np.arange(k), np.arange(k)] = 0
    sv = np.linalg.svd(v, compute_uv=False)
    smax = max(1.0, sv[0]) if sv.size else 1.0
    assert np.max(np.abs(off)) <= 1e-10 * smax
    assert np.max(np.abs(np.linalg.eigvalsh(r.h_transformed) - np.linalg.eigvalsh(h.dense()))) <= 1e-9
    assert np.max(np.abs(r.h_transformed[:na, :na])) <= 1e-10
    return r


def test_diagonal_fixed_point():
    r = check_invariants(np.diag([2.0, 1.0]), [0.0, 0.0])
    np.testing.assert_allclose(r.v_bar, np.diag([2.0, 1.0]), atol=1e-12)
    np.testing.assert_allclose(np.abs(r.a), np.eye(2), atol=1e-12)


def test_permutation():
    v = np.array([[0.0, 1.0], [1.0, 0.0]])
    r = check_invariants(v)
    np.testing.assert_allclose(r.v_bar, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(r.a @ v @ r.b.conj().T, np.eye(2), atol=1e-12)


def test_random_3x2_against_gram_oracle():
    rng = np.random.default_rng(32)
    v = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    r = check_invariants(v, [0.3, -0.2])
    sv = np.sqrt(np.linalg.eigvalsh(v.conj().T @ v))[::-1]
    np.testing.assert_allclose(r.singular_values, sv, atol=1e-10)
    assert np.all(np.diff(r.singular_values) <= 0)


def test_proportional_detuning_keeps_lower_block_diagonal():
    rng = np.random.default_rng(4)
    v = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    r = check_invariants(v, [0.7, 0.7, 0.7])
    low = r.h_transformed[2:, 2:]
    np.testing.assert_allclose(low, 0.7 * np.eye(3), atol=1e-12)


def test_zero_coupling_gives_identity_like_transform():
    r = check_invariants(np.zeros((2, 2)))
    np.testing.assert_allclose(r.v_bar, 0.0)
    np.testing.assert_allclose(r.s.conj().T @ r.s, np.eye(4), atol=1e-12)


def test_rank_deficient():
    rng = np.random.default_rng(8)
    u = rng.normal(size=(4, 1)) + 1j * rng.normal(size=(4, 1))
    w = rng.normal(size=(1, 3)) + 1j * rng.normal(size=(1, 3))
    r = check_invariants(u @ w)
    # Gram eigenvalues carry ~1e-14 rounding noise, so count ranks with an SVD instead
    rank = np.linalg.matrix_rank(u @ w)
    assert int(np.sum(r.singular_values > 1e-10)) == rank == 1


def test_degenerate_singular_values():
    rng = np.random.default_rng(9)
    q1, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    q2, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    v = q1 @ np.diag([2.0, 2.0, 0.5]) @ q2
    r = check_invariants(v)
    np.testing.assert_allclose(r.singular_values, [2, 2, 0.5], atol=1e-10)


def test_validation():
    with pytest.raises(InputError):
        BlockHamiltonian(np.ones((2, 3)), [0.0, 1.0])
    with pytest.raises(InputError):
        ms_transform(np.ones((2, 2)))


@settings(max_examples=50, deadline=None)
@given(na=st.integers(1, 5), nb=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
def test_random_blocks(na, nb, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(na, nb)) + 1j * rng.normal(size=(na, nb))
    r = check_invariants(v, rng.normal(size=nb))
    k = min(na, nb)
    sv = np.sqrt(np.clip(np.linalg.eigvalsh(v.conj().T @ v)[::-1][:k], 0, None))
    assert np.max(np.abs(r.singular_values - sv)) <= 1e-10
    assert np.all(r.singular_values >= 0)
