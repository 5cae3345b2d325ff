"""The Weyl quantization map, the Mehler semigroup and symbol seminorms.

``quantize`` evaluates

    a(A, B) = (2 pi)^-1 int a^(u, v) e^{i(uA + vB)} du dv

either on the symbol grid's lattice (``method="lattice"``, the sampled
transform from ``dft_centered``) or, for closed-form Gaussians, by tensor
Gauss-Hermite quadrature of the exact transform (``method="gauss-hermite"``).
The lattice route is exact for the grid backends; the quadrature route is the
natural one for backends without a lattice.
"""
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, ShapeError, UnsupportedOrder
from .fourier import dft_centered, spectral_derivative
from .grids import PhaseGrid, StateGrid
from .linalg import operator_norm
from .pairs import HermiteBackend, SkewedBackend, dense
from .report import VerificationReport
from .symbols import (GaussianSum, GaussianSymbolParams, dilate, evaluate_at_origin,
                      is_closed_form, sample_symbol)

GH_NODES = 96
PROJECTION_TIME = 40.0
MAX_SEMINORM_ORDER = 3


def default_phase_grid(bk):
    if bk.lattice is None:
        return None
    return PhaseGrid(StateGrid(bk.lattice.N, 1))


def _stack(bk, which, params):
    own = getattr(bk, f"group_{which}_stack", None)
    if own is not None:
        return own(np.asarray(params, dtype=float))
    fn = bk.group_A if which == "A" else bk.group_B
    return np.stack([dense(fn(p)) for p in params])


def _assemble(bk, us, vs, coef):
    """``sum_m A(u_m) sum_n coef[m, n] B(v_n)`` as a dense matrix."""
    if bk.sparse:
        Bs = [bk.group_B(v) for v in vs]
        out = np.zeros((bk.state_dim, bk.state_dim), dtype=complex)
        for m, u in enumerate(us):
            row = coef[m]
            if not np.any(row):
                continue
            S = sp.csr_matrix((bk.state_dim, bk.state_dim), dtype=complex)
            for n, B in enumerate(Bs):
                if row[n] != 0:
                    S = S + row[n] * B
            out += (bk.group_A(u) @ S).toarray()
        return out
    Bs = _stack(bk, "B", vs)
    S = np.einsum("mn,nij->mij", coef, Bs, optimize=True)
    As = _stack(bk, "A", us)
    return np.einsum("mij,mjk->ik", As, S, optimize=True)


def _quantize_lattice(bk, a, pgrid):
    if pgrid.d != 1:
        raise ShapeError("quantize is implemented for d=1 symbols")
    if bk.lattice is not None and not np.isclose(bk.lattice.h, pgrid.h):
        raise ShapeError("symbol grid spacing does not match the backend lattice")
    ahat = dft_centered(sample_symbol(a, pgrid), pgrid)
    pts = pgrid.points
    coef = ahat * np.exp(0.5j * np.outer(pts, pts)) * pgrid.h ** 2 / (2 * np.pi)
    return _assemble(bk, pts, pts, coef)


def _gh_axis(lam, b, nodes, decay=0.0):
    """Nodes and weights for ``int exp((b - iu)^2 / (4 lam)) g(u) du``.

    The modulus of the integrand's Gaussian factor is centered at ``u0`` with
    rate ``Re(1/(4 lam))``.  ``decay`` adds the Gaussian rate already present
    in ``g`` (1/4 for Hermite-basis matrix elements of ``e^{i(uA+vB)}``), so
    that what remains after dividing by the node weight is close to a
    polynomial.  The remaining oscillation is folded into the weights.
    """
    s, w = np.polynomial.hermite.hermgauss(nodes)
    kappa = 1.0 / (4 * lam)
    kr = float(np.real(kappa))
    u0 = float(np.imag(kappa * b)) / kr
    rate = kr + decay
    u = u0 * kr / rate + s / np.sqrt(rate)
    logf = (b - 1j * u) ** 2 / (4 * lam)
    return u, w * np.exp(logf + s ** 2) / np.sqrt(rate)


def _quantize_gaussian(bk, a, nodes):
    out = np.zeros((bk.state_dim, bk.state_dim), dtype=complex)
    for term in a.terms:
        if term.d != 1:
            raise ShapeError("quantize is implemented for d=1 symbols")
        decay = getattr(bk, "quadrature_decay", 0.0)
        u, wu = _gh_axis(term.lam, term.b_x, nodes, decay)
        v, wv = _gh_axis(term.lam_xi, term.b_xi, nodes, decay)
        amp = term.c / (2 * np.sqrt(term.lam * term.lam_xi))
        coef = amp * np.outer(wu, wv) * np.exp(0.5j * np.outer(u, v)) / (2 * np.pi)
        out += _assemble(bk, u, v, coef)
    return out


def _has_lattice(bk):
    return bk.lattice is not None


def quantize(bk, a, pgrid=None, method="auto", nodes=GH_NODES):
    """Weyl quantization ``a(A, B)`` of a symbol on a d=1 backend.

    Parameters
    ----------
    bk : WeylBackend
    a : array, callable ``a(X, XI)``, GaussianSymbolParams or GaussianSum
    pgrid : PhaseGrid, optional
        Symbol grid for the lattice route; defaults to the backend lattice.
    method : {"auto", "lattice", "gauss-hermite"}
        ``auto`` picks Gauss-Hermite for closed forms on lattice-free
        backends and the lattice route otherwise.

    Returns
    -------
    ndarray
        Dense ``state_dim x state_dim`` matrix.
    """
    if bk.d != 1:
        raise ShapeError("quantize is implemented for pairs of dimension 1")
    if method == "auto":
        method = "gauss-hermite" if is_closed_form(a) and not _has_lattice(bk) else "lattice"
    if method == "gauss-hermite":
        if not is_closed_form(a):
            raise ShapeError("gauss-hermite quantization needs a closed-form Gaussian symbol")
        return _quantize_gaussian(bk, a, nodes)
    if method != "lattice":
        raise ValueError(f"unknown quantization method {method!r}")
    pgrid = pgrid if pgrid is not None else default_phase_grid(bk)
    if pgrid is None:
        raise ShapeError("lattice quantization on this backend needs a phase grid")
    return _quantize_lattice(bk, a, pgrid)


# --------------------------------------------------------------------------
# Mehler semigroup

def lambda_of(z):
    """``lam_z = (1 - e^{-z}) / (1 + e^{-z}) = tanh(z/2)`` for ``Re z > 0`` (or z = 0)."""
    if np.real(z) < 0 or (np.real(z) == 0 and z != 0):
        raise DomainError(f"lambda_of needs Re z > 0, got {z}")
    if np.isrealobj(z):
        return float(np.tanh(float(z) / 2))
    return complex(np.tanh(complex(z) / 2))


def mehler_symbol(z, d=1):
    """``a_z = (1 + lam_z)^d exp(-lam_z (|x|^2 + |xi|^2))``."""
    if not np.real(z) > 0:
        raise DomainError(f"mehler_symbol needs Re z > 0, got {z}")
    lam = lambda_of(z)
    return GaussianSymbolParams((1 + lam) ** d, lam, d)


def semigroup_operator(bk, t, pgrid=None):
    if np.real(t) <= 0:
        raise DomainError(f"semigroup time must have positive real part, got {t}")
    return quantize(bk, mehler_symbol(t), pgrid)


def semigroup_apply(bk, t, f, pgrid=None):
    """``e^{-tL} f`` computed as ``a_t(A, B) f``."""
    return semigroup_operator(bk, t, pgrid) @ np.asarray(f)


def generator_residual(bk, f, h):
    """``|| (f - P(h) f)/h - L f ||`` on the Hermite backend."""
    if not isinstance(bk, HermiteBackend):
        raise ShapeError("generator_residual needs the hermite backend")
    f = np.asarray(f, dtype=complex)
    Pf = semigroup_apply(bk, h, f)
    return float(np.linalg.norm((f - Pf) / h - bk.L @ f))


def ground_projection(bk, pgrid=None):
    """``a_t(A, B)`` at ``t = 40``, where ``lam_t`` equals 1 in double precision."""
    return quantize(bk, mehler_symbol(PROJECTION_TIME), pgrid)


def hermite_function_samples(n, grid):
    """Orthonormal grid vector of the n-th Hermite function on a d=1 StateGrid."""
    x = grid.points
    vals = np.zeros((n + 1, x.size))
    vals[0] = np.pi ** -0.25 * np.exp(-0.5 * x ** 2)
    if n >= 1:
        vals[1] = np.sqrt(2) * x * vals[0]
    for k in range(2, n + 1):
        vals[k] = np.sqrt(2 / k) * x * vals[k - 1] - np.sqrt((k - 1) / k) * vals[k - 2]
    return (vals[n] * np.sqrt(grid.h)).astype(complex)


# --------------------------------------------------------------------------
# seminorms

@dataclass(frozen=True)
class SeminormReport:
    N: int
    m: int
    value: float
    argmax: tuple = ()

    def as_report(self, name="seminorm"):
        rep = VerificationReport(name)
        rep.record("N", self.N)
        rep.record("m", self.m)
        rep.record("value", self.value)
        rep.record("argmax_alpha_beta", list(self.argmax))
        return rep


def seminorm(a, N, m, pgrid=None, points=None, exclude_order_zero=False):
    """``max_{alpha, beta <= m} sup <xi>^{N + alpha} |d_xi^alpha d_x^beta a|``.

    With ``points = (xs, xis)`` the sup runs over that tensor point set using
    exact derivatives of a closed-form symbol.  Otherwise the symbol is sampled
    on ``pgrid`` and differentiated spectrally.
    """
    if m > MAX_SEMINORM_ORDER:
        raise UnsupportedOrder(f"seminorm order m={m} exceeds {MAX_SEMINORM_ORDER}")
    if points is not None:
        if not is_closed_form(a):
            raise ShapeError("point-set seminorms need a closed-form symbol")
        X, XI = np.meshgrid(points[0], points[1], indexing="ij")
        deriv = lambda al, be: a.derivative(X, XI, al, be)
    else:
        if pgrid is None or pgrid.d != 1:
            raise ShapeError("seminorm needs a d=1 phase grid")
        X, XI = pgrid.mesh2()
        samples = sample_symbol(a, pgrid)
        deriv = lambda al, be: spectral_derivative(samples, pgrid, al, be)
    weight = np.sqrt(1 + XI ** 2)
    best, arg = -np.inf, ()
    for al in range(m + 1):
        for be in range(m + 1):
            if exclude_order_zero and al + be == 0:
                continue
            val = float(np.max(weight ** (N + al) * np.abs(deriv(al, be))))
            if val > best:
                best, arg = val, (al, be)
    return SeminormReport(N, m, best, arg)


def calculus_boundedness_ratio(bk, family, N, m, pgrid=None, labels=None):
    """Empirical type-(-N, m) constant ``max ||a(A,B)|| / seminorm(a)`` over a family."""
    pgrid = pgrid if pgrid is not None else default_phase_grid(bk)
    rep = VerificationReport("calculus_ratio")
    labels = labels if labels is not None else [f"symbol_{i}" for i in range(len(family))]
    ratios = []
    for lab, a in zip(labels, family):
        sn = seminorm(a, N, m, pgrid).value
        if sn == 0:
            rep.note(f"{lab}: zero seminorm, skipped")
            continue
        r = operator_norm(quantize(bk, a, pgrid), rel_tol=1e-12) / sn
        rep.record(f"ratio.{lab}", r)
        ratios.append(r)
    rep.record("max_ratio", max(ratios) if ratios else float("nan"))
    rep.check_true("finite", bool(ratios) and bool(np.all(np.isfinite(ratios))))
    return rep


# --------------------------------------------------------------------------
# approximate identities and the S^0 extension scheme

def _as_vector(f):
    return np.asarray(f, dtype=complex).reshape(-1)


def approx_identity_sweep(bk, eta, ks, f, pgrid=None, final_tol=1e-3):
    """Errors ``||eta_{1/k}(A,B) f - f||`` with ``eta_{1/k}(x, xi) = eta(x/k, xi/k)``."""
    if not np.isclose(evaluate_at_origin(eta), 1.0):
        raise DomainError("eta must equal 1 at the origin")
    f = _as_vector(f)
    errors = [float(np.linalg.norm(quantize(bk, dilate(eta, k), pgrid) @ f - f)) for k in ks]
    rep = VerificationReport("approx_identity")
    rep.record("ks", list(ks))
    rep.record("errors", errors)
    tail = errors[len(errors) // 2:]
    # nonincreasing rather than strict so the zero vector passes
    rep.check_true("tail_nonincreasing", all(b <= a for a, b in zip(tail, tail[1:])))
    if final_tol is not None:
        rep.check_below("final_error", errors[-1], final_tol)
    return rep


def _cutoff_symbol(a, eta, n):
    eta_n = dilate(eta, n)
    if np.isscalar(a):
        return eta_n.scaled(a) if is_closed_form(eta_n) else (lambda X, XI: a * eta_n(X, XI))
    if is_closed_form(a) and is_closed_form(eta_n):
        return a.times(eta_n)
    return lambda X, XI: a(X, XI) * eta_n(X, XI)


def s0_extend(bk, a, eta, n_list, f, pgrid=None):
    """``a_n(A,B) f`` for ``a_n = a * eta(./n)`` along ``n_list``.

    Returns the last iterate and a report of the Cauchy increments
    ``||a_{n_{i+1}}(A,B) f - a_{n_i}(A,B) f||``.  ``a`` may be a scalar
    constant, a closed form, or a callable.
    """
    f = _as_vector(f)
    iterates = [quantize(bk, _cutoff_symbol(a, eta, n), pgrid) @ f for n in n_list]
    incs = [float(np.linalg.norm(y - x)) for x, y in zip(iterates, iterates[1:])]
    rep = VerificationReport("s0_extension")
    rep.record("n_list", list(n_list))
    rep.record("increments", incs)
    factors = [a / b for a, b in zip(incs, incs[1:]) if b > 0]
    if factors:
        rep.record("min_decay_factor", min(factors))
    rep.check_true("increments_decay", all(b < a for a, b in zip(incs, incs[1:])))
    return iterates[-1], rep
