import numpy as np
import pytest
from hypothesis import given, strategies as st

from weylcalc import (InvalidGrid, PhaseGrid, ShapeError, StateGrid, UnsupportedOrder,
                      dft_centered, idft_centered, operator_norm, spectral_derivative)
from weylcalc.fileio import read_field, read_matrix, write_field, write_matrix
from weylcalc.fourier import dft_matrix
from weylcalc.linalg import dense_norm
from weylcalc.report import VerificationReport, format_value
from weylcalc.symbols import GaussianSymbolParams

even_sizes = st.sampled_from([8, 16, 24, 32, 48, 64])


@pytest.mark.parametrize("N", [7, 6, 0, -8, 9])
def test_invalid_grid_sizes(N):
    with pytest.raises(InvalidGrid):
        StateGrid(N)


def test_invalid_dimension():
    with pytest.raises(InvalidGrid):
        StateGrid(16, 3)


@given(even_sizes)
def test_grid_is_self_dual(N):
    g = StateGrid(N)
    assert np.isclose(N * g.h ** 2, 2 * np.pi)
    assert g.points[N // 2] == 0.0
    assert np.allclose(np.diff(g.points), g.h)


def test_lattice_membership():
    g = StateGrid(32)
    assert g.on_lattice(3 * g.h)
    assert not g.on_lattice(0.5 * g.h)


@given(even_sizes, st.integers(0, 2 ** 31 - 1))
def test_dft_unitary_and_invertible(N, seed):
    g = StateGrid(N)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    w = dft_centered(v, g)
    assert np.isclose(np.linalg.norm(w), np.linalg.norm(v))
    assert np.allclose(idft_centered(w, g), v, atol=1e-12)


def test_dft_matrix_matches_transform(rng):
    g = StateGrid(16)
    v = rng.standard_normal(16) + 0j
    assert np.allclose(dft_matrix(16) @ v, dft_centered(v, g), atol=1e-13)


def test_dft_of_gaussian_is_gaussian():
    # e^{-x^2/2} is a fixed point of the unitary transform
    g = StateGrid(64)
    f = np.exp(-g.points ** 2 / 2)
    assert np.max(np.abs(dft_centered(f, g) - f)) < 1e-13


def test_phase_dft_of_gaussian_symbol():
    pg = PhaseGrid(StateGrid(64))
    a = GaussianSymbolParams(1.0, 0.7, b_x=0.3, b_xi=-0.2)
    U, V = pg.mesh2()
    expected = a.fourier(U, V)
    assert np.max(np.abs(dft_centered(a.sample(pg), pg) - expected)) < 1e-12


def test_flat_inputs_roundtrip(rng):
    pg = PhaseGrid(StateGrid(16))
    v = rng.standard_normal(pg.size) + 0j
    out = dft_centered(v, pg)
    assert out.shape == (pg.size,)
    with pytest.raises(ShapeError):
        dft_centered(np.zeros(17), pg)


@pytest.mark.parametrize("alpha,beta", [(0, 1), (1, 0), (2, 1), (1, 3), (3, 3)])
def test_spectral_derivative_matches_closed_form(alpha, beta):
    pg = PhaseGrid(StateGrid(128))
    a = GaussianSymbolParams(1.0, 0.5)
    X, XI = pg.mesh2()
    exact = a.derivative(X, XI, alpha, beta)
    got = spectral_derivative(a.sample(pg), pg, alpha, beta)
    assert np.max(np.abs(got - exact)) < 1e-9


def test_spectral_derivative_order_limit():
    pg = PhaseGrid(StateGrid(16))
    spectral_derivative(np.zeros(pg.shape), pg, 3, 3)
    with pytest.raises(UnsupportedOrder):
        spectral_derivative(np.zeros(pg.shape), pg, 4, 3)


def test_odd_derivative_keeps_real_fields_real():
    pg = PhaseGrid(StateGrid(32))
    a = GaussianSymbolParams(1.0, 0.4).sample(pg).real
    assert np.max(np.abs(spectral_derivative(a, pg, 1, 0).imag)) < 1e-14


@given(st.integers(2, 40), st.integers(0, 2 ** 31 - 1))
def test_operator_norm_matches_svd(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    assert abs(operator_norm(M, rel_tol=1e-12) - dense_norm(M)) < 1e-8 * dense_norm(M)


def test_operator_norm_deterministic(rng):
    M = rng.standard_normal((30, 30))
    assert operator_norm(M) == operator_norm(M)


def test_operator_norm_rejects_rectangular():
    with pytest.raises(ShapeError):
        operator_norm(np.zeros((3, 4)))


def test_operator_norm_of_zero():
    assert operator_norm(np.zeros((5, 5))) == 0.0


def test_field_roundtrip(tmp_path, rng):
    v = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    p = tmp_path / "f.bin"
    write_field(p, v, 1, 16)
    back, d, N = read_field(p)
    assert (d, N) == (1, 16)
    assert np.array_equal(back, v)
    assert p.read_bytes()[:8] == b"WCLFIELD"


def test_field_rejects_bad_sizes(tmp_path):
    with pytest.raises(ShapeError):
        write_field(tmp_path / "f.bin", np.zeros(10), 1, 16)
    (tmp_path / "g.bin").write_bytes(b"garbage" * 4)
    with pytest.raises(ShapeError):
        read_field(tmp_path / "g.bin")


def test_matrix_roundtrip(tmp_path, rng):
    M = rng.standard_normal((5, 7)) + 1j * rng.standard_normal((5, 7))
    write_matrix(tmp_path / "m.bin", M)
    assert np.array_equal(read_matrix(tmp_path / "m.bin"), M)


def test_matrix_truncated_payload(tmp_path):
    write_matrix(tmp_path / "m.bin", np.eye(3))
    raw = (tmp_path / "m.bin").read_bytes()
    (tmp_path / "m.bin").write_bytes(raw[:-16])
    with pytest.raises(ShapeError):
        read_matrix(tmp_path / "m.bin")


def test_report_text_is_stable():
    rep = VerificationReport("demo")
    rep.record("x", 0.1)
    rep.record("flag", True)
    rep.check_below("small", 1e-12, 1e-10)
    rep.check_at_most("big", 2.0, 1.0)
    text = rep.to_text()
    assert "x = 1.000000e-01" in text
    assert "flag = true" in text
    assert "check.small = pass" in text
    assert "check.big = FAIL" in text
    assert text.rstrip().endswith("verdict = FAIL")
    assert [c.name for c in rep.failures()] == ["big"]


def test_report_merge_prefixes():
    inner = VerificationReport("inner")
    inner.record("r", 1)
    inner.check_true("ok", True)
    outer = VerificationReport("outer")
    outer.merge(inner, "sub")
    assert outer.values["sub.r"] == 1
    assert outer.passed


def test_format_value_complex_and_lists():
    assert format_value(1 + 2j) == "1.000000e+00+2.000000e+00j"
    assert format_value([1, 2.0]) == "[1, 2.000000e+00]"
