"""Verification suites run by ``weylcalc verify``.

Each suite takes a settings dict (profile defaults overlaid with config-file
values) and returns a VerificationReport.  Reports contain no timings so two
runs with the same settings are byte-identical.
"""
import numpy as np

from .calculus import (ground_projection, hermite_function_samples, mehler_symbol,
                       quantize)
from .diagnostics import (THETAS, domination_stability, dyadic_symbol_uniformity,
                          mehler_eigencheck, random_low_mode, sector_stability,
                          square_function_check, tlp_bound_check)
from .grids import PhaseGrid, StateGrid
from .moyal import kernel_bounds, kn_matrix, moyal_fft, moyal_gaussian
from .pairs import (GaussianPairBackend, GridStandardBackend, HermiteBackend,
                    TwistedStandardBackend, default_packet_centers, group_bounds,
                    lattice_samples, ou_translation_norm_oracle, skew_transform,
                    verify_ccr, verify_sigma)
from .report import VerificationReport
from .symbols import GaussianSymbolParams
from .twisted import norm_equality_check, transference_check, untwist_check

PROFILES = {
    "quick": {
        "N": 32, "N_twisted": 32, "norm_equality_N": [32], "n_max": 16, "sigma_samples": 50,
        "moyal_pairs": 4, "untwist_trials": 2, "square_functions": 20, "dyadic_trials": 2,
        "mc_draws": 20000, "seed": 0,
    },
    "full": {
        "N": 64, "N_twisted": 32, "norm_equality_N": [32, 48], "n_max": 16, "sigma_samples": 50,
        "moyal_pairs": 10, "untwist_trials": 10, "square_functions": 100, "dyadic_trials": 5,
        "mc_draws": 20000, "seed": 0,
    },
}

MEHLER_FAMILY = (0.5, 1.0, 2.0)


def settings_for(profile="quick", overrides=None):
    if profile not in PROFILES:
        raise KeyError(f"unknown profile {profile!r}")
    out = dict(PROFILES[profile])
    for k, v in (overrides or {}).items():
        out[k] = v
    return out


def _hermite_sigma_samples(count, seed):
    rng = np.random.default_rng(seed)
    return [((rng.uniform(-1, 1), rng.uniform(-1, 1)), (rng.uniform(-1, 1), rng.uniform(-1, 1)))
            for _ in range(count)]


def suite_ccr(cfg):
    rep = VerificationReport("ccr")
    g = StateGrid(cfg["N"], 1)
    ints = [(-5, 3), (1, 1), (4, -7), (-2, -2), (6, 5)]
    rep.merge(verify_ccr(GridStandardBackend(g), [(i * g.h, j * g.h) for i, j in ints]), "grid_d1")
    g2 = StateGrid(16, 2)
    rep.merge(verify_ccr(GridStandardBackend(g2), [(i * g2.h, j * g2.h) for i, j in ints[:3]]), "grid_d2")
    tw = TwistedStandardBackend(StateGrid(cfg["N_twisted"], 2))
    step = tw.ccr_lattice_step
    rep.merge(verify_ccr(tw, [(i * step, j * step) for i, j in ints[:3]], tol=1e-9), "twisted")
    hb = HermiteBackend(cfg["n_max"])
    rep.merge(verify_ccr(hb, [(0.5, -0.7), (1.0, 1.0)], tol=hb.tolerance), "hermite")
    return rep


def suite_sigma(cfg):
    rep = VerificationReport("sigma")
    gb = GridStandardBackend(StateGrid(cfg["N"], 1))
    rep.merge(verify_sigma(gb, lattice_samples(gb, cfg["sigma_samples"], seed=cfg["seed"])), "grid")
    hb = HermiteBackend(cfg["n_max"])
    rep.merge(verify_sigma(hb, _hermite_sigma_samples(20, cfg["seed"]), tol=1e-6), "hermite")
    sk = skew_transform(gb, 1.0)
    rep.merge(verify_sigma(sk, lattice_samples(sk, 20, seed=cfg["seed"] + 1)), "skewed")
    return rep


def suite_mehler(cfg):
    rep = VerificationReport("mehler")
    hb = HermiteBackend(cfg["n_max"])
    rep.merge(mehler_eigencheck(cfg["n_max"], [0.25, 1.0, 4.0], bk=hb), "eigen")
    modes = hb.check_modes
    P = {t: quantize(hb, mehler_symbol(t)) for t in (0.5, 1.0, 1.5)}
    law = float(np.abs((P[0.5] @ P[1.0] - P[1.5])[:, modes]).max())
    rep.record("semigroup_law_residual", law)
    rep.check_below("semigroup_law", law, 1e-8)
    z1, z2 = 0.5 + 0.3j, 0.25 - 0.6j
    hol = float(np.abs((quantize(hb, mehler_symbol(z1)) @ quantize(hb, mehler_symbol(z2))
                        - quantize(hb, mehler_symbol(z1 + z2)))[:, modes]).max())
    rep.record("complex_time_law_residual", hol)
    rep.check_below("complex_time_law", hol, 1e-6)
    Pi = ground_projection(hb)
    idem = float(np.abs((Pi @ Pi - Pi)[:, modes]).max())
    rep.record("projection_idempotence", idem)
    rep.check_below("projection_idempotent", idem, 1e-8)
    g = StateGrid(cfg["N"], 1)
    t = np.log(3)
    H = np.stack([hermite_function_samples(n, g) for n in range(g.N)], axis=1)
    oracle = (H * np.exp(-t * np.arange(g.N))) @ H.conj().T
    grid_res = float(np.linalg.norm(quantize(GridStandardBackend(g), mehler_symbol(t)) - oracle, 2))
    rep.record("grid_vs_hermite_oracle", grid_res)
    rep.check_below("grid_mehler", grid_res, 1e-6)
    return rep


def random_gaussian_pair(rng):
    def one():
        return GaussianSymbolParams.translated(rng.uniform(0.5, 1.5), rng.uniform(0.3, 1.0),
                                               rng.uniform(-1, 1), rng.uniform(-1, 1))
    return one(), one()


def suite_moyal(cfg):
    rep = VerificationReport("moyal")
    pg = PhaseGrid(StateGrid(64, 1))
    gb = GridStandardBackend(pg.state)
    rng = np.random.default_rng(cfg["seed"])
    worst = 0.0
    for _ in range(cfg["moyal_pairs"]):
        a, b = random_gaussian_pair(rng)
        lhs = quantize(gb, a) @ quantize(gb, b)
        worst = max(worst, float(np.linalg.norm(lhs - quantize(gb, moyal_fft(a, b, pg)), 2)))
    rep.record("pairs", cfg["moyal_pairs"])
    rep.record("homomorphism_residual", worst)
    rep.check_below("homomorphism", worst, 1e-6)
    law = 0.0
    for t1, t2 in [(0.3, 0.7), (1.0, 2.0), (np.log(3), np.log(3))]:
        exact = moyal_gaussian(mehler_symbol(t1), mehler_symbol(t2)).sample(pg)
        law = max(law, float(np.abs(moyal_fft(mehler_symbol(t1), mehler_symbol(t2), pg) - exact).max()))
    rep.record("gaussian_law_residual", law)
    rep.check_below("gaussian_law", law, 1e-7)
    return rep


def untwist_family():
    fam = [(f"mehler({t:g})", mehler_symbol(t)) for t in MEHLER_FAMILY]
    fam.append(("shifted_x", GaussianSymbolParams.translated(1.0, 0.5, 1.0, 0.0)))
    fam.append(("shifted_xi", GaussianSymbolParams.translated(1.0, 0.7, 0.0, -0.8)))
    return fam


def suite_untwist(cfg):
    rep = VerificationReport("untwist")
    pg = PhaseGrid(StateGrid(cfg["N_twisted"], 1))
    for i, (lab, a) in enumerate(untwist_family()):
        rep.merge(untwist_check(a, cfg["untwist_trials"], pg, seed=cfg["seed"] + i, labels=lab), lab)
    return rep


def suite_norm_equality(cfg):
    rep = VerificationReport("norm_equality")
    Ns = list(cfg["norm_equality_N"])
    for t in MEHLER_FAMILY:
        gaps = []
        for N in Ns:
            nc, nw, ratio = norm_equality_check(mehler_symbol(t), N)
            key = f"mehler({t:g}).N={N}"
            rep.record(f"{key}.nc", nc)
            rep.record(f"{key}.nw", nw)
            rep.record(f"{key}.ratio", ratio)
            rep.check_below(f"{key}.ratio_gap", abs(ratio - 1), 0.05)
            gaps.append(abs(ratio - 1))
        if len(gaps) > 1:
            # at the roundoff floor the gap cannot shrink further
            rep.check_true(f"mehler({t:g}).refinement", gaps[-1] <= gaps[0] or gaps[-1] < 1e-12)
    return rep


def suite_transference(cfg):
    rep = VerificationReport("transference")
    g = StateGrid(cfg["N"], 1)
    backends = [("grid", GridStandardBackend(g)), ("hermite", HermiteBackend(cfg["n_max"])),
                ("skewed", skew_transform(GridStandardBackend(g), 1.0))]
    pg = PhaseGrid(StateGrid(cfg["N_twisted"], 1))
    from .twisted import twisted_norm
    for t in MEHLER_FAMILY:
        a = mehler_symbol(t)
        nc = twisted_norm(a, pg)
        for lab, bk in backends:
            rep.merge(transference_check(bk, a, nc=nc, label=f"mehler({t:g})"), f"{lab}.mehler({t:g})")
    return rep


def suite_sectorial(cfg):
    rep = VerificationReport("sectorial")
    rep.merge(sector_stability(THETAS), "sector")
    rep.merge(tlp_bound_check([0.01, 0.1, 1, 5, 10, 20]), "tlp")
    return rep


def suite_domination(cfg):
    rep = VerificationReport("domination")
    rep.merge(domination_stability(THETAS), "domination")
    return rep


def suite_square_function(cfg):
    hb = HermiteBackend(cfg["n_max"])
    rng = np.random.default_rng(cfg["seed"])
    fs = [random_low_mode(hb, rng) for _ in range(cfg["square_functions"])]
    rep = VerificationReport("square_function")
    rep.merge(square_function_check(hb, fs, draws=cfg["mc_draws"], seed=cfg["seed"]), "random_low_mode")
    return rep


def suite_dyadic(cfg):
    rep = VerificationReport("dyadic")
    rep.merge(dyadic_symbol_uniformity(trials=cfg["dyadic_trials"], seed=cfg["seed"]), "kappa")
    return rep


def windowed_decay_symbol(X, XI):
    return np.exp(-X ** 2) / (1 + XI ** 2) * np.exp(-(XI / 6.0) ** 8)


def suite_kernel_bounds(cfg):
    rep = VerificationReport("kernel_bounds")
    bounds = []
    for N in (64, 128):
        pg = PhaseGrid(StateGrid(N, 1))
        row, col = kernel_bounds(windowed_decay_symbol, pg)
        norm = float(np.linalg.norm(kn_matrix(windowed_decay_symbol, pg), 2))
        rep.record(f"N={N}.row", row)
        rep.record(f"N={N}.col", col)
        rep.record(f"N={N}.operator_norm", norm)
        rep.check_at_most(f"N={N}.schur", norm, np.sqrt(row * col))
        bounds.append((row, col))
    (r1, c1), (r2, c2) = bounds
    change = max(abs(r2 / r1 - 1), abs(c2 / c1 - 1))
    rep.record("refinement_change", change)
    rep.check_below("refinement_stable", change, 0.10)
    pg = PhaseGrid(StateGrid(64, 1))
    g = GaussianSymbolParams(1.0, 1.0)
    row, col = kernel_bounds(g, pg)
    rep.check_at_most("gaussian.schur", float(np.linalg.norm(kn_matrix(g, pg), 2)), np.sqrt(row * col))
    return rep


def suite_gaussian_pair(cfg):
    rep = VerificationReport("gaussian_pair")
    bk = GaussianPairBackend(StateGrid(64, 1))
    p2 = [bk.weighted_norm_B(t, 2) for t in (0.5, 1.0, 2.0)]
    rep.record("p2_norms", p2)
    rep.check_below("p2_unit", max(abs(v - 1) for v in p2), 1e-8)
    W = lambda t: bk.weighted_group_B(t, 2)
    law = float(np.linalg.norm(W(0.5) @ W(1.0) - W(1.5), 2))
    rep.record("group_law_residual", law)
    rep.check_below("group_law", law, 1e-8)
    ts = (0.5, 1.0, 1.5)
    p4 = [bk.weighted_norm_B(t, 4) for t in ts]
    oracle = [ou_translation_norm_oracle(t, 4, default_packet_centers(bk)) for t in ts]
    rep.record("p4_norms", p4)
    rep.record("p4_oracle", oracle)
    rep.check_true("p4_increasing", all(b > a for a, b in zip(p4, p4[1:])))
    rep.check_below("p4_vs_oracle", max(abs(a / b - 1) for a, b in zip(p4, oracle)), 1e-6)
    gb4 = group_bounds(bk, [0.5, 1.0, 1.5, 2.0], p=4)
    rep.record("M_B_p4", gb4.M_B)
    rep.record("uniform_p4", gb4.uniform)
    return rep


SUITES = {
    "ccr": suite_ccr,
    "sigma": suite_sigma,
    "mehler": suite_mehler,
    "moyal": suite_moyal,
    "untwist": suite_untwist,
    "norm-equality": suite_norm_equality,
    "transference": suite_transference,
    "sectorial": suite_sectorial,
    "domination": suite_domination,
    "square-function": suite_square_function,
    "dyadic": suite_dyadic,
    "kernel-bounds": suite_kernel_bounds,
    "gaussian-pair": suite_gaussian_pair,
}


def run_suite(name, cfg):
    if name == "all":
        return [SUITES[k](cfg) for k in SUITES]
    return [SUITES[name](cfg)]
