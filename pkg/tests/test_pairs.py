import numpy as np
import pytest
from hypothesis import given, strategies as st

from weylcalc import StateGrid
from weylcalc.errors import ShapeError
from weylcalc.pairs import (GaussianPairBackend, GridStandardBackend, HermiteBackend,
                            TwistedStandardBackend, default_packet_centers, dense, group_bounds,
                            lattice_samples, ou_translation_norm_oracle, skew_transform,
                            verify_ccr, verify_sigma, weyl_exponential)

GRID = GridStandardBackend(StateGrid(32))
HERMITE = HermiteBackend(16)


@given(st.integers(-12, 12), st.integers(-12, 12))
def test_grid_ccr_on_lattice(i, j):
    h = GRID.grid.h
    rep = verify_ccr(GRID, [(i * h, j * h)])
    assert rep.passed, rep.to_text()


def test_grid_ccr_two_dimensions():
    bk = GridStandardBackend(StateGrid(8, 2))
    h = bk.grid.h
    assert verify_ccr(bk, [(2 * h, -3 * h), (h, h)]).passed


def test_grid_groups_unitary_off_lattice():
    for M in (GRID.group_A(0.37), GRID.group_B(0.37)):
        assert np.allclose(M.conj().T @ M, np.eye(32), atol=1e-12)


def test_grid_shift_is_permutation_on_lattice():
    # e^{ivP} f(x) = f(x + v)
    h = GRID.grid.h
    f = np.arange(32, dtype=complex)
    assert np.array_equal(GRID.group_B(3 * h) @ f, np.roll(f, -3))


def test_grid_shift_band_limited_off_lattice():
    # a trigonometric polynomial below Nyquist is translated exactly
    g = GRID.grid
    L = g.N * g.h
    f = np.exp(2j * np.pi * 3 * g.points / L)
    v = 0.41
    assert np.allclose(GRID.group_B(v) @ f, np.exp(2j * np.pi * 3 * (g.points + v) / L), atol=1e-12)


def test_sigma_grid_random_lattice_pairs():
    rep = verify_sigma(GRID, lattice_samples(GRID, 30, seed=4))
    assert rep.values["max_residual"] < 1e-9


def test_sigma_detects_wrong_phase():
    class Broken(GridStandardBackend):
        def _group_B(self, v):
            return super()._group_B(v) * np.exp(0.3j)
    bk = Broken(StateGrid(16))
    h = bk.grid.h
    assert not verify_sigma(bk, [((h, h), (2 * h, -h))]).passed


def test_weyl_exponential_inverse():
    h = GRID.grid.h
    W = weyl_exponential(GRID, 2 * h, -h)
    Winv = weyl_exponential(GRID, -2 * h, h)
    assert np.allclose(W @ Winv, np.eye(32), atol=1e-12)


def test_hermite_position_momentum():
    Q, P = HERMITE.Q, HERMITE.P
    comm = Q @ P - P @ Q
    n = HERMITE.n_max
    assert np.allclose(comm[:n, :n], 1j * np.eye(n), atol=1e-12)
    assert np.allclose(np.diag(HERMITE.L)[:n], np.arange(n), atol=1e-10)


def test_hermite_ccr_and_sigma():
    assert verify_ccr(HERMITE, [(0.5, -0.7), (1.2, 0.3)], tol=HERMITE.tolerance).passed
    rng = np.random.default_rng(3)
    samples = [tuple(tuple(rng.uniform(-1, 1, 2)) for _ in range(2)) for _ in range(10)]
    assert verify_sigma(HERMITE, samples, tol=1e-6).passed


def test_twisted_ccr_on_double_lattice():
    bk = TwistedStandardBackend(StateGrid(16, 2))
    s = bk.ccr_lattice_step
    rep = verify_ccr(bk, [(s, -2 * s), (3 * s, s)], tol=1e-9)
    assert rep.passed, rep.to_text()


def test_twisted_groups_sparse_unitary():
    bk = TwistedStandardBackend(StateGrid(8, 2))
    A = bk.group_A(bk.grid.h)
    assert bk.sparse
    assert np.allclose(dense(A).conj().T @ dense(A), np.eye(bk.state_dim), atol=1e-12)


def test_twisted_requires_two_axes():
    with pytest.raises(ShapeError):
        TwistedStandardBackend(StateGrid(8, 1))


@given(st.integers(-3, 3))
def test_skewed_pair_satisfies_sigma(lam):
    # on a periodic grid the skew keeps exactness only when lam * hZ stays on hZ
    sk = skew_transform(GRID, lam)
    rep = verify_sigma(sk, lattice_samples(GRID, 5, seed=1))
    assert rep.passed, rep.to_text()


def test_skew_zero_is_identity_transform():
    sk = skew_transform(GRID, 0.0)
    assert np.array_equal(sk.group_B(0.3), GRID.group_B(0.3))


def test_gaussian_pair_p2_isometry():
    bk = GaussianPairBackend(StateGrid(64))
    for t in (0.5, 1.0, 2.0):
        assert abs(bk.weighted_norm_B(t, 2) - 1) < 1e-8


def test_gaussian_pair_p4_matches_oracle_and_grows():
    bk = GaussianPairBackend(StateGrid(64))
    centers = default_packet_centers(bk)
    vals = [bk.weighted_norm_B(t, 4) for t in (0.5, 1.0, 1.5)]
    oracle = [ou_translation_norm_oracle(t, 4, centers) for t in (0.5, 1.0, 1.5)]
    assert np.allclose(vals, oracle, rtol=1e-6)
    assert vals[0] < vals[1] < vals[2]
    # frozen values of the oracle
    assert np.allclose(oracle, [2.0154, 4.8996, 14.3675], rtol=1e-4)


def test_gaussian_pair_flags_nonuniform_p4():
    bk = GaussianPairBackend(StateGrid(64))
    assert group_bounds(bk, [0.5, 1.0, 1.5], p=2).uniform
    assert not group_bounds(bk, [0.5, 1.0, 1.5], p=4).uniform


def test_group_bounds_standard_are_one():
    gb = group_bounds(GRID, [0.2, 0.5, 1.0])
    assert abs(gb.M_A - 1) < 1e-10 and abs(gb.M_B - 1) < 1e-10
