"""Moyal products, the Kohn-Nirenberg conversion and kernel (Schur) bounds.

On the Fourier side the Moyal product is a twisted convolution,
``(a # b)^ = C_{a^} b^``, so ``moyal_fft`` shares its quadrature with the
twisted-convolution module.
"""
from math import factorial

import numpy as np

from .errors import DomainError, ShapeError, UnsupportedOrder
from .fourier import dft_centered, dft_matrix, idft_centered, spectral_derivative
from .report import VerificationReport
from .symbols import GaussianSymbolParams, sample_symbol
from .twisted import twisted_convolve

MAX_EXPANSION_ORDER = 3
FIT_NOISE_FLOOR = 1e-13


def moyal_gaussian(p, q):
    """Closed-form product of radial centered Gaussians.

    ``c1 e^{-l1 r^2} # c2 e^{-l2 r^2} = c1 c2 (1 + l1 l2)^-d e^{-l3 r^2}``
    with ``l3 = (l1 + l2) / (1 + l1 l2)``.
    """
    if not (p.is_radial and q.is_radial) or p.d != q.d:
        raise ShapeError("moyal_gaussian needs radial centered Gaussians of equal dimension")
    if np.real(p.lam) <= 0 or np.real(q.lam) <= 0:
        raise DomainError("Gaussian exponents need positive real part")
    den = 1 + p.lam * q.lam
    if den == 0:
        raise DomainError("degenerate Gaussian product")
    return GaussianSymbolParams(p.c * q.c / den ** p.d, (p.lam + q.lam) / den, p.d)


def moyal_fft(a, b, pgrid):
    """Grid samples of ``a # b`` via the twisted convolution of the transforms."""
    if pgrid.d != 1:
        raise ShapeError("moyal_fft is implemented for d=1")
    ah = dft_centered(sample_symbol(a, pgrid), pgrid)
    bh = dft_centered(sample_symbol(b, pgrid), pgrid)
    return idft_centered(twisted_convolve(ah, bh, pgrid), pgrid)


def moyal_expansion(a, b, M, pgrid, convention="one-sided"):
    """Truncated asymptotic expansion of ``a # b`` up to order ``M``.

    ``convention="one-sided"``:
        ``sum_{k<=M} (1/k!) i^{-k} d_xi^k a d_x^k b`` (the one-sided series).
    ``convention="weyl"``:
        ``sum_{j+k<=M} (1/(j! k!)) (i/2)^{j+k} (-1)^k
        d_x^j d_xi^k a  d_xi^j d_x^k b`` (symmetric Weyl series).
    """
    if M > MAX_EXPANSION_ORDER:
        raise UnsupportedOrder(f"expansion order {M} exceeds {MAX_EXPANSION_ORDER}")
    A = sample_symbol(a, pgrid)
    B = sample_symbol(b, pgrid)
    out = np.zeros(pgrid.shape, dtype=complex)
    if convention == "one-sided":
        for k in range(M + 1):
            da = spectral_derivative(A, pgrid, alpha=k)
            db = spectral_derivative(B, pgrid, beta=k)
            out += da * db / (factorial(k) * 1j ** k)
        return out
    if convention == "weyl":
        for j in range(M + 1):
            for k in range(M + 1 - j):
                da = spectral_derivative(A, pgrid, alpha=k, beta=j)
                db = spectral_derivative(B, pgrid, alpha=j, beta=k)
                out += (0.5j) ** (j + k) * (-1) ** k * da * db / (factorial(j) * factorial(k))
        return out
    raise ValueError(f"unknown convention {convention!r}")


def moyal_remainder(a, b, M, pgrid, convention="one-sided"):
    return moyal_fft(a, b, pgrid) - moyal_expansion(a, b, M, pgrid, convention)


def remainder_decay(a, b, M, pgrid, convention="one-sided"):
    """Fit ``|r(x, xi)| <= C <xi>^-beta`` from the xi-profile ``sup_x |r|``.

    Least squares on log-log samples with ``|xi|`` in ``[2, xi_max/2]`` and
    the profile above the noise floor.
    """
    r = moyal_remainder(a, b, M, pgrid, convention)
    rep = VerificationReport("remainder_decay")
    rep.record("M", M)
    scale = max(float(np.abs(sample_symbol(a, pgrid)).max() * np.abs(sample_symbol(b, pgrid)).max()), 1e-300)
    profile = np.abs(r).max(axis=0)
    xi = pgrid.points
    sel = (np.abs(xi) >= 2) & (np.abs(xi) <= pgrid.extent / 2) & (profile > FIT_NOISE_FLOOR * scale)
    if np.count_nonzero(sel) < 3:
        rep.note("remainder at machine precision")
        rep.record("beta", float("inf"))
        rep.record("C", 0.0)
        return rep
    lx = np.log(np.sqrt(1 + xi[sel] ** 2))
    ly = np.log(profile[sel])
    slope, icept = np.polyfit(lx, ly, 1)
    rep.record("beta", float(-slope))
    rep.record("C", float(np.exp(icept)))
    rep.record("fit_points", int(np.count_nonzero(sel)))
    return rep


def kn_symbol(a, pgrid):
    """Order-one Kohn-Nirenberg symbol ``b = a - (i/2) d_x d_xi a`` of the Weyl symbol ``a``."""
    A = sample_symbol(a, pgrid)
    return A - 0.5j * spectral_derivative(A, pgrid, alpha=1, beta=1)


def kn_symbol_exact(a, pgrid):
    """Grid-exact conversion ``b^ = e^{iuv/2} a^`` (all orders)."""
    pts = pgrid.points
    ah = dft_centered(sample_symbol(a, pgrid), pgrid)
    return idft_centered(ah * np.exp(0.5j * np.outer(pts, pts)), pgrid)


def kn_matrix(b, pgrid):
    """Matrix of ``T_b f(x) = (2 pi)^{-1/2} int b(x, xi) f^(xi) e^{i x xi} dxi`` on the grid."""
    B = sample_symbol(b, pgrid)
    F = dft_matrix(pgrid.N)
    return (F.conj().T * B) @ F


def kn_apply(b, f, pgrid):
    """``T_b f`` in O(N^2): transform, weight by ``b(x_k, .)``, resum per row."""
    B = sample_symbol(b, pgrid)
    f = np.asarray(f, dtype=complex)
    if f.shape != (pgrid.N,):
        raise ShapeError(f"state field of shape {f.shape} does not match N={pgrid.N}")
    fh = dft_centered(f, pgrid.state)
    F = dft_matrix(pgrid.N)
    return np.einsum("km,km,m->k", F.conj().T, B, fh)


def kernel_bounds(r, pgrid):
    """Schur row/column sums of the kernel of ``T_r`` on the grid.

    ``(row, col)`` with ``row = max_k sum_l |T[k, l]|`` and
    ``col = max_l sum_k |T[k, l]|``; ``||T_r|| <= sqrt(row * col)``.
    """
    T = kn_matrix(r, pgrid)
    absT = np.abs(T)
    return float(absT.sum(axis=1).max()), float(absT.sum(axis=0).max())
