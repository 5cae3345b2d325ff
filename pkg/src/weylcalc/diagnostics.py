"""Checks of the explicit spectral bounds: tLP(t), sector geometry of
``lam_z``, Gaussian domination, square functions, dyadic Gaussian sums and the
polynomial structure of Gaussian derivatives."""
from dataclasses import dataclass

import numpy as np

from .calculus import lambda_of, mehler_symbol, quantize, seminorm
from .errors import DomainError
from .fourier import spectral_derivative
from .pairs import HermiteBackend
from .report import VerificationReport
from .symbols import GaussianSum, GaussianSymbolParams

THETAS = (np.pi / 8, np.pi / 4, 3 * np.pi / 8, 7 * np.pi / 16)
IDENTITY_TOL = 1e-10


# --------------------------------------------------------------------------
# tLP(t)

def tlp_actual(t):
    """``t * max_n n e^{-tn}``: the norm of ``t L e^{-tL}`` in the eigenbasis."""
    if t <= 0:
        raise DomainError("t must be positive")
    n = np.arange(max(1, int(np.floor(1 / t))), int(np.ceil(1 / t)) + 2)
    return float(t * np.max(n * np.exp(-t * n)))


def tlp_bound(t, d=1, M_A=1.0, M_B=1.0):
    return float(2 ** (d + 2) * d * M_A * M_B * (1 + t) * np.exp(-t))


def tlp_bound_check(t_samples, d=1):
    rep = VerificationReport("tlp_bound")
    for t in t_samples:
        a, b = tlp_actual(t), tlp_bound(t, d)
        key = f"t={t:g}"
        rep.record(f"{key}.actual", a)
        rep.record(f"{key}.bound", b)
        rep.record(f"{key}.margin", b / a)
        rep.check_below(f"{key}.bound_holds", a, b)
    return rep


# --------------------------------------------------------------------------
# sector geometry

@dataclass(frozen=True)
class SectorSample:
    theta: float
    z: complex
    lam: complex

    @property
    def t(self):
        return 1.0 / np.real(1.0 / self.lam)


def sector_samples(theta, n_samples=200):
    """``z = r e^{+-i theta}`` with ``r`` log-spaced in ``[1e-3, 1e3]``."""
    r = np.logspace(-3, 3, n_samples)
    out = []
    for sign in (1, -1):
        for z in r * np.exp(sign * 1j * theta):
            out.append(SectorSample(theta, complex(z), lambda_of(complex(z))))
    return out


def sector_lambda_check(theta, n_samples=200):
    """``C1 = max (pi/2 - theta)/cos(arg lam_z)`` and ``C2 = max |lam_z| (pi/2 - theta)``."""
    gap = np.pi / 2 - theta
    samples = sector_samples(theta, n_samples)
    lam = np.array([s.lam for s in samples])
    rep = VerificationReport("sector")
    rep.record("theta", float(theta))
    rep.record("samples", len(samples))
    rep.check_true("re_lambda_positive", bool(np.all(lam.real > 0)))
    C1 = float(np.max(gap / np.cos(np.angle(lam))))
    C2 = float(np.max(np.abs(lam) * gap))
    rep.record("C1", C1)
    rep.record("C2", C2)
    rep.check_true("finite", bool(np.isfinite(C1) and np.isfinite(C2)))
    return rep


def sector_stability(thetas=THETAS, n_samples=200, factor=4.0):
    rep = VerificationReport("sector_stability")
    c1, c2 = [], []
    for th in thetas:
        r = sector_lambda_check(th, n_samples)
        rep.merge(r, prefix=f"theta={th:.6f}")
        c1.append(r.values["C1"])
        c2.append(r.values["C2"])
    rep.record("C1_spread", max(c1) / min(c1))
    rep.record("C2_spread", max(c2) / min(c2))
    rep.check_below("C1_spread", max(c1) / min(c1), factor)
    rep.check_below("C2_spread", max(c2) / min(c2), factor)
    return rep


# --------------------------------------------------------------------------
# Gaussian domination

def log_symbol_transform_modulus(lam, q, d=1):
    """``log |a^_z|`` at ``q = |y|^2 + |eta|^2``."""
    val = d * np.log(1 + lam) - d * np.log(2 * lam) - q / (4 * lam)
    return np.real(val)


def log_heat_kernel(t, q, d=1):
    """``log b_t = -d log t - q/(4t)``."""
    return -d * np.log(t) - q / (4 * t)


def domination_ratio_closed_form(theta, lam, d=1):
    t = 1.0 / np.real(1.0 / lam)
    return float((np.pi / 2 - theta) ** (2 * d) * abs(1 + lam) ** d * abs(2 * lam) ** (-d) * t ** d)


def domination_z_samples(theta, n_radii=40, n_angles=9):
    """``z`` filling the closed sector ``|arg z| <= theta``, ``|z|`` in ``[1e-2, 1e2]``.

    The lower radius keeps ``q / |lam_z|`` small enough that the log-domain
    comparison is not limited by roundoff at the 1e-10 level.
    """
    r = np.logspace(-2, 2, n_radii)
    phi = np.linspace(-theta, theta, n_angles)
    return [complex(z) for z in (r[:, None] * np.exp(1j * phi[None, :])).ravel()]


def domination_check(theta, z_samples=None, box=(2.0, 8.0, 32.0), n_points=33, d=1):
    """``C = max (pi/2 - theta)^{2d} |a^_z| / b_t`` with ``t = 1/Re(1/lam_z)``.

    For each z the ratio is evaluated on (y, eta) grids of growing half-width
    ``box``; its relative spread measures the (y, eta)-independence.
    """
    if z_samples is None:
        z_samples = domination_z_samples(theta)
    gap = np.pi / 2 - theta
    rep = VerificationReport("domination")
    rep.record("theta", float(theta))
    spread = 0.0
    C_by_box = []
    for L in box:
        y = np.linspace(-L, L, n_points)
        Y, E = np.meshgrid(y, y, indexing="ij")
        q = Y ** 2 + E ** 2
        best = 0.0
        for z in z_samples:
            lam = lambda_of(complex(z))
            t = 1.0 / np.real(1.0 / lam)
            logr = 2 * d * np.log(gap) + log_symbol_transform_modulus(lam, q, d) - log_heat_kernel(t, q, d)
            r0 = np.log(domination_ratio_closed_form(theta, lam, d))
            spread = max(spread, float(np.max(np.abs(np.expm1(logr - r0)))))
            best = max(best, float(np.exp(logr.max())))
        C_by_box.append(best)
    rep.record("C", C_by_box[-1])
    # the same sup with the prefactor (pi/2 - theta)^d instead of ^(2d)
    rep.record("C_single_power", C_by_box[-1] / gap ** d)
    rep.record("C_by_box", C_by_box)
    rep.record("max_relative_spread", spread)
    rep.check_below("yeta_independence", spread, IDENTITY_TOL)
    rep.check_true("C_stable_in_box", max(C_by_box) / min(C_by_box) - 1 < 1e-10)
    return rep


def domination_stability(thetas=THETAS, factor=4.0):
    rep = VerificationReport("domination_stability")
    cs = []
    for th in thetas:
        r = domination_check(th)
        rep.merge(r, prefix=f"theta={th:.6f}")
        cs.append(r.values["C"])
    rep.record("C_spread", max(cs) / min(cs))
    rep.check_below("C_spread", max(cs) / min(cs), factor)
    return rep


# --------------------------------------------------------------------------
# square function

def dyadic_times(s, N):
    return [(2.0 ** j * s, 2.0 ** (j + 1) * s) for j in range(-N, N + 1)]


def square_function_vectors(bk, s, N, f, method="quantized"):
    """The vectors ``(P(2^{j+1} s) - P(2^j s)) f`` for ``j = -N..N``."""
    f = np.asarray(f, dtype=complex)
    out = []
    if method == "eigen":
        n = np.arange(f.size)
        for lo, hi in dyadic_times(s, N):
            out.append((np.exp(-hi * n) - np.exp(-lo * n)) * f)
        return np.array(out)
    cache = {}
    for lo, hi in dyadic_times(s, N):
        for t in (lo, hi):
            if t not in cache:
                cache[t] = quantize(bk, mehler_symbol(t)) @ f
        out.append(cache[hi] - cache[lo])
    return np.array(out)


def rademacher_moments(V, draws=20000, seed=0):
    """Exact ``E||sum eps_j v_j||^2 = sum ||v_j||^2`` and a Monte Carlo average."""
    exact = float(np.sum(np.abs(V) ** 2))
    rng = np.random.default_rng(seed)
    eps = rng.choice([-1.0, 1.0], size=(draws, V.shape[0]))
    mc = float(np.mean(np.sum(np.abs(eps @ V) ** 2, axis=1)))
    return exact, mc


def square_function(bk, s, N, f, draws=20000, seed=0, method="quantized"):
    """``(exact, mc)`` Rademacher second moments of the dyadic square function."""
    if not 1 <= s <= 2:
        raise DomainError("s must lie in [1, 2]")
    V = square_function_vectors(bk, s, N, f, method)
    return rademacher_moments(V, draws, seed)


def random_low_mode(bk, rng, n_modes=None):
    n_modes = n_modes if n_modes is not None else bk.n_max - 3
    f = np.zeros(bk.state_dim, dtype=complex)
    f[:n_modes] = rng.standard_normal(n_modes) + 1j * rng.standard_normal(n_modes)
    return f / np.linalg.norm(f)


def square_function_check(bk, f_list, s_list=(1.0, 1.5, 2.0), N=10, draws=20000, seed=0, mc_tol=0.05):
    rep = VerificationReport("square_function")
    worst_ratio, worst_mc = 0.0, 0.0
    ops = {}
    for s in s_list:
        for lo, hi in dyadic_times(s, N):
            for t in (lo, hi):
                if t not in ops:
                    ops[t] = quantize(bk, mehler_symbol(t))
    for i, f in enumerate(f_list):
        nf2 = float(np.linalg.norm(f) ** 2)
        for s in s_list:
            V = np.array([(ops[hi] - ops[lo]) @ f for lo, hi in dyadic_times(s, N)])
            exact, mc = rademacher_moments(V, draws, seed + i)
            worst_ratio = max(worst_ratio, exact / nf2)
            if exact > 0:
                worst_mc = max(worst_mc, abs(mc - exact) / exact)
    rep.record("functions", len(f_list))
    rep.record("max_exact_over_norm2", worst_ratio)
    rep.record("max_mc_relative_error", worst_mc)
    rep.check_at_most("exact_le_norm2", worst_ratio, 1.0)
    rep.check_below("mc_cross_check", worst_mc, mc_tol)
    return rep


# --------------------------------------------------------------------------
# dyadic Gaussian sums

def dyadic_symbol(k, eps, s):
    """``kappa_{k,eps,s} = sum_{j=1}^k eps_j exp(-lam_{2^-j s} r^2)``."""
    return GaussianSum(tuple(GaussianSymbolParams(float(e), lambda_of(2.0 ** -j * s))
                             for j, e in zip(range(1, k + 1), eps)))


def telescoped_symbol(N, eps, s):
    """``sum_j eps_j (exp(-lam_{2^{-j+1}s} r^2) - exp(-lam_{2^{-j}s} r^2))``, j = 1..N."""
    terms = []
    for j, e in zip(range(1, N + 1), eps):
        terms.append(GaussianSymbolParams(float(e), lambda_of(2.0 ** (-j + 1) * s)))
        terms.append(GaussianSymbolParams(-float(e), lambda_of(2.0 ** -j * s)))
    return GaussianSum(tuple(terms))


def dyadic_points(n=60, r_max=1e4):
    """Symmetric log-spaced sample points reaching the scale of the widest term."""
    pos = np.logspace(-3, np.log10(r_max), n)
    return np.concatenate([-pos[::-1], [0.0], pos])


def dyadic_seminorm(kappa, points, order=2):
    """``max_{0 < alpha + beta, alpha, beta <= order} sup <xi>^alpha |d^alpha d^beta kappa|``."""
    return seminorm(kappa, 0, order, points=(points, points), exclude_order_zero=True).value


def dyadic_symbol_uniformity(k_small=5, k_large=20, trials=8, s_list=(1.0, 1.5, 2.0), order=2,
                             seed=0, tol=0.25):
    rng = np.random.default_rng(seed)
    pts = dyadic_points()
    sup_small, sup_large = 0.0, 0.0
    tele = 0.0
    for s in s_list:
        for _ in range(trials):
            for k in range(1, k_large + 1):
                eps = rng.choice([-1.0, 1.0], size=k)
                val = dyadic_seminorm(dyadic_symbol(k, eps, s), pts, order)
                sup_large = max(sup_large, val)
                if k <= k_small:
                    sup_small = max(sup_small, val)
            eps = rng.choice([-1.0, 1.0], size=k_large)
            X, XI = np.meshgrid(pts, pts, indexing="ij")
            tele = max(tele, float(np.abs(telescoped_symbol(k_large, eps, s)(X, XI)).max()))
    rep = VerificationReport("dyadic")
    rep.record("sup_k_le_small", sup_small)
    rep.record("sup_k_le_large", sup_large)
    rep.record("relative_excess", sup_large / sup_small - 1)
    rep.record("telescoped_sup", tele)
    rep.check_below("uniform_in_k", sup_large / sup_small - 1, tol)
    rep.check_at_most("telescoped_bounded", tele, 1 + 1e-9)
    return rep


# --------------------------------------------------------------------------
# Mehler eigencheck and polynomial derivatives

def mehler_eigencheck(n_max, t_samples, bk=None):
    """``max ||a_t(A,B) h_n - e^{-tn} h_n||`` over ``n <= n_max - 4`` and sampled t."""
    bk = bk if bk is not None else HermiteBackend(n_max)
    modes = np.arange(bk.n_max - 3)
    worst = 0.0
    rep = VerificationReport("mehler_eigen")
    for t in t_samples:
        P = quantize(bk, mehler_symbol(t))
        target = np.zeros((bk.state_dim, modes.size), dtype=complex)
        target[modes, modes] = np.exp(-t * modes)
        r = float(np.max(np.linalg.norm(P[:, modes] - target, axis=0)))
        rep.record(f"residual.t={t}", r)
        worst = max(worst, r)
    rep.record("max_residual", worst)
    rep.check_below("mehler_spectrum", worst, 1e-6)
    return rep


def polynomial_derivative_check(orders, lam_samples, pgrid, tol=1e-6):
    """Scaling law ``d^a_xi d^b_x e^{-lam r^2}(x, xi) = lam^{(a+b)/2} G_{a,b}(sqrt(lam) x, sqrt(lam) xi)``.

    Each spectral derivative at ``lam`` is compared with the one at ``4 lam``
    evaluated at half the coordinates (grid points ``x/2`` are reached by
    sampling the ``4 lam`` field on a half-spacing sub-lattice: ``x`` at even
    indices maps to ``x/2`` at the center-symmetric positions).
    """
    rep = VerificationReport("polynomial_derivative")
    X, XI = pgrid.mesh2()
    N = pgrid.N
    c = N // 2
    idx = c + (np.arange(N) - c) // 2
    even = (np.arange(N) - c) % 2 == 0
    interior = np.abs(pgrid.points) <= pgrid.extent / 2
    sel = np.ix_(even & interior, even & interior)
    worst = 0.0
    for a, b in orders:
        for lam in lam_samples:
            g1 = GaussianSymbolParams(1.0, lam).sample(pgrid)
            g4 = GaussianSymbolParams(1.0, 4 * lam).sample(pgrid)
            d1 = spectral_derivative(g1, pgrid, a, b)
            d4 = spectral_derivative(g4, pgrid, a, b)
            # d^k[e^{-4 lam r^2}](x/2) = 2^k d^k[e^{-lam r^2}](x)
            lhs = d1[sel]
            rhs = d4[np.ix_(idx, idx)][sel] / 2 ** (a + b)
            err = float(np.max(np.abs(lhs - rhs)))
            rep.record(f"residual.alpha={a}.beta={b}.lam={lam}", err)
            worst = max(worst, err)
    rep.record("max_residual", worst)
    rep.check_below("scaling_law", worst, tol)
    return rep
