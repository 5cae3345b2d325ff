import numpy as np
import pytest

from weylcalc import PhaseGrid, StateGrid
from weylcalc.calculus import mehler_symbol
from weylcalc.errors import ShapeError
from weylcalc.pairs import GridStandardBackend, HermiteBackend, skew_transform
from weylcalc.symbols import GaussianSymbolParams
from weylcalc.twisted import (guard_mask, norm_equality_check, symbol_transform,
                              transference_check, twisted_convolve, twisted_matrix,
                              twisted_norm, untwist_check)

PG8 = PhaseGrid(StateGrid(8))


def _brute_force(k, g, pgrid):
    N, h, pts = pgrid.N, pgrid.h, pgrid.points
    c = N // 2
    out = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            for p in range(N):
                for q in range(N):
                    r, s = i - p + c, j - q + c
                    if 0 <= r < N and 0 <= s < N:
                        ph = np.exp(0.5j * (pts[i] * pts[q] - pts[p] * pts[j]))
                        out[i, j] += ph * k[p, q] * g[r, s]
    return out * h ** 2 / (2 * np.pi)


def test_twisted_convolve_matches_direct_sum(rng):
    k = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    assert np.allclose(twisted_convolve(k, g, PG8), _brute_force(k, g, PG8), atol=1e-12)


def test_twisted_matrix_matches_convolve(rng):
    k = rng.standard_normal((8, 8)) + 0j
    g = rng.standard_normal((8, 8)) + 0j
    M = twisted_matrix(k, PG8)
    assert np.allclose((M @ g.reshape(-1)).reshape(8, 8), twisted_convolve(k, g, PG8), atol=1e-12)


def test_twisted_convolve_shape_check():
    with pytest.raises(ShapeError):
        twisted_convolve(np.zeros((8, 8)), np.zeros((4, 4)), PG8)


def test_twisted_convolution_is_associative_on_gaussians():
    pg = PhaseGrid(StateGrid(32))
    a = symbol_transform(GaussianSymbolParams(1.0, 0.5), pg)
    b = symbol_transform(GaussianSymbolParams(1.0, 0.8), pg)
    g = GaussianSymbolParams.translated(1.0, 1.0, 0.5, -0.5).sample(pg)
    lhs = twisted_convolve(a, twisted_convolve(b, g, pg), pg)
    rhs = twisted_convolve(twisted_convolve(a, b, pg), g, pg)
    # equality up to the truncation of the box
    assert np.abs(lhs - rhs).max() < 1e-7


def test_guard_mask_is_central_quarter():
    pg = PhaseGrid(StateGrid(32))
    m = guard_mask(pg)
    assert m[16, 16] and not m[0, 0]
    assert 0.2 < m.mean() < 0.3


@pytest.mark.parametrize("a", [mehler_symbol(1.0), GaussianSymbolParams.translated(1.0, 0.5, 1.0, 0.0)])
def test_untwisting(a):
    rep = untwist_check(a, 2, PhaseGrid(StateGrid(32)), seed=3)
    assert rep.passed, rep.to_text()


def test_norm_equality_mehler():
    nc, nw, ratio = norm_equality_check(mehler_symbol(1.0), 32)
    assert abs(ratio - 1) < 0.05
    # the Weyl operator of a_t is e^{-tL}, so both norms are 1
    assert abs(nw - 1) < 1e-8


def test_twisted_norm_scales_linearly():
    pg = PhaseGrid(StateGrid(16))
    a = mehler_symbol(1.0)
    assert np.isclose(twisted_norm(a.scaled(3.0), pg), 3 * twisted_norm(a, pg))


@pytest.mark.parametrize("make", [
    lambda: GridStandardBackend(StateGrid(32)),
    lambda: HermiteBackend(16),
    lambda: skew_transform(GridStandardBackend(StateGrid(32)), 1.0),
])
def test_transference_holds(make):
    rep = transference_check(make(), mehler_symbol(1.0), N_twisted=16)
    assert rep.passed, rep.to_text()
