"""Acceptance criteria at their stated parameters and tolerances.

Each test prints one ``PASS``/``FAIL`` line through the terminal reporter, so
the lines appear even under output capture.  Run alone with

    pytest tests/test_acceptance.py -v
"""
import subprocess
import sys
import time

import numpy as np
import pytest

from weylcalc import PhaseGrid, StateGrid
from weylcalc.calculus import mehler_symbol, quantize
from weylcalc.diagnostics import (THETAS, domination_stability, dyadic_symbol_uniformity,
                                  mehler_eigencheck, random_low_mode, sector_stability,
                                  square_function_check, tlp_actual, tlp_bound,
                                  tlp_bound_check)
from weylcalc.moyal import moyal_fft, moyal_gaussian
from weylcalc.pairs import (GaussianPairBackend, GridStandardBackend, HermiteBackend,
                            lattice_samples, verify_ccr, verify_sigma)
from weylcalc.suites import (MEHLER_FAMILY, random_gaussian_pair, settings_for,
                             suite_norm_equality, suite_transference, suite_untwist)

FULL = settings_for("full")


@pytest.fixture
def announce(request):
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    start = time.perf_counter()

    def emit(number, ok, detail, limit):
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < limit
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail} ({elapsed:.1f} s < {limit:g} s)"
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)
        else:
            print(line)
        return ok

    return emit


def test_01_ccr_exactness(announce):
    bk = GridStandardBackend(StateGrid(64))
    h = bk.grid.h
    rng = np.random.default_rng(0)
    samples = [(i * h, j * h) for i, j in rng.integers(-16, 17, size=(20, 2))]
    rep = verify_ccr(bk, samples, tol=1e-10)
    worst = max(rep.values[f"residual_{k}"] for k in ("AA", "BB", "AB"))
    assert announce(1, rep.passed, f"CCR max residual {worst:.2e} < 1e-10", 5)


def test_02_composition_law(announce):
    gb = GridStandardBackend(StateGrid(64))
    rg = verify_sigma(gb, lattice_samples(gb, 50, seed=0), tol=1e-9)
    hb = HermiteBackend(16)
    rng = np.random.default_rng(0)
    hs = [((rng.uniform(-1, 1), rng.uniform(-1, 1)), (rng.uniform(-1, 1), rng.uniform(-1, 1)))
          for _ in range(20)]
    rh = verify_sigma(hb, hs, tol=1e-6)
    detail = (f"grid {rg.values['max_residual']:.2e} < 1e-9, "
              f"hermite {rh.values['max_residual']:.2e} < 1e-6")
    assert announce(2, rg.passed and rh.passed, detail, 30)


def test_03_mehler_formula(announce):
    hb = HermiteBackend(16)
    eig = mehler_eigencheck(16, [0.25, 1.0, 4.0], bk=hb)
    modes = slice(0, 13)
    P = {t: quantize(hb, mehler_symbol(t)) for t in (0.5, 1.0, 1.5)}
    law = float(np.abs((P[0.5] @ P[1.0] - P[1.5])[:, modes]).max())
    ok = eig.values["max_residual"] < 1e-6 and law < 1e-8
    detail = f"eigen residual {eig.values['max_residual']:.2e} < 1e-6, semigroup {law:.2e} < 1e-8"
    assert announce(3, ok, detail, 60)


def test_04_moyal_homomorphism(announce):
    pg = PhaseGrid(StateGrid(64))
    gb = GridStandardBackend(pg.state)
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(10):
        a, b = random_gaussian_pair(rng)
        lhs = quantize(gb, a) @ quantize(gb, b)
        worst = max(worst, float(np.linalg.norm(lhs - quantize(gb, moyal_fft(a, b, pg)), 2)))
    law = 0.0
    for t1, t2 in [(0.3, 0.7), (1.0, 2.0), (np.log(3), np.log(3)), (0.5, 4.0)]:
        exact = moyal_gaussian(mehler_symbol(t1), mehler_symbol(t2)).sample(pg)
        law = max(law, float(np.abs(moyal_fft(mehler_symbol(t1), mehler_symbol(t2), pg) - exact).max()))
    ok = worst < 1e-6 and law < 1e-7
    assert announce(4, ok, f"homomorphism {worst:.2e} < 1e-6, Gaussian law {law:.2e} < 1e-7", 300)


def test_05_explicit_spectral_bound(announce):
    rep = tlp_bound_check([0.01, 0.1, 1, 5, 10, 20])
    a, b = tlp_actual(1.0), tlp_bound(1.0)
    ok = rep.passed and f"{a:.4g}" == "0.3679" and f"{b:.4g}" == "5.886"
    assert announce(5, ok, f"bound holds at 6 t values; t=1: {a:.4g} vs {b:.4g}", 1)


def test_06_untwisting(announce):
    rep = suite_untwist({**FULL, "N_twisted": 32, "untwist_trials": 10})
    worst = max(v for k, v in rep.values.items() if k.endswith("window_residual"))
    assert announce(6, rep.passed, f"5 symbols x 10 fields, max residual {worst:.2e} < 1e-6", 600)


def test_07_norm_equality(announce):
    rep = suite_norm_equality({**FULL, "norm_equality_N": [32, 48]})
    gaps = [abs(v - 1) for k, v in rep.values.items() if k.endswith(".ratio")]
    assert announce(7, rep.passed, f"max |ratio - 1| {max(gaps):.2e} < 0.05, refinement 32->48 ok", 900)


def test_08_transference(announce):
    rep = suite_transference({**FULL, "N": 64})
    slack = max(rep.values[k] / rep.values[k.replace("weyl_norm", "twisted_norm")]
                for k in rep.values if k.endswith("weyl_norm"))
    assert announce(8, rep.passed, f"grid, hermite, skewed; max ||a(A,B)||/||C_a|| {slack:.4f}", 300)


def test_09_sector_and_domination(announce):
    sec = sector_stability(THETAS)
    dom = domination_stability(THETAS)
    ind = max(v for k, v in dom.values.items() if k.endswith("max_relative_spread"))
    ok = sec.passed and dom.passed
    detail = (f"C1 spread {sec.values['C1_spread']:.2f}, C2 spread {sec.values['C2_spread']:.2f}, "
              f"C spread {dom.values['C_spread']:.2f} (< 4 required), "
              f"(y,eta) independence {ind:.1e} < 1e-10")
    assert announce(9, ok, detail, 30)


def test_10_square_function(announce):
    hb = HermiteBackend(16)
    rng = np.random.default_rng(0)
    fs = [random_low_mode(hb, rng) for _ in range(100)]
    rep = square_function_check(hb, fs, s_list=(1.0, 1.5, 2.0), N=10, mc_tol=0.05)
    detail = (f"max E||S f||^2/||f||^2 {rep.values['max_exact_over_norm2']:.4f} <= 1, "
              f"MC error {rep.values['max_mc_relative_error']:.3f} < 0.05")
    assert announce(10, rep.passed, detail, 60)


def test_11_dyadic_uniformity(announce):
    rep = dyadic_symbol_uniformity(k_small=5, k_large=20, trials=5)
    detail = (f"k=20 exceeds k=5 by {100 * rep.values['relative_excess']:.2f}% < 25%, "
              f"telescoped sup {rep.values['telescoped_sup']:.4f} <= 1 + 1e-9")
    assert announce(11, rep.passed, detail, 60)


def test_12_gaussian_pair(announce):
    bk = GaussianPairBackend(StateGrid(64))
    p2 = [bk.weighted_norm_B(t, 2) for t in (0.5, 1.0, 2.0)]
    p4 = [bk.weighted_norm_B(t, 4) for t in (0.5, 1.0, 1.5, 2.0)]
    gap = max(abs(v - 1) for v in p2)
    ok = gap < 1e-8 and all(b > a for a, b in zip(p4, p4[1:]))
    detail = f"p=2 max |norm - 1| {gap:.1e} < 1e-8; p=4 norms {', '.join(f'{v:.4g}' for v in p4)} increasing"
    assert announce(12, ok, detail, 30)


def _verify_all():
    cmd = [sys.executable, "-m", "weylcalc.cli", "verify", "all", "--profile", "quick"]
    return subprocess.run(cmd, capture_output=True, check=False).stdout


def test_13_determinism(announce):
    first = _verify_all()
    second = _verify_all()
    ok = first == second and len(first) > 0
    assert announce(13, ok, f"two quick runs byte-identical ({len(first)} bytes)", 600)
