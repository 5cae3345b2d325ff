"""Twisted convolution on phase-space grids and the checks built on it.

    C_a g(x, xi) = (2 pi)^-1 int e^{i(x eta - y xi)/2} a(y, eta) g(x - y, xi - eta) dy deta

is evaluated by direct quadrature on the lattice with ``g`` taken as zero
outside the grid (no periodic wrap).  The same routine computes Moyal
products on the Fourier side.
"""
import numpy as np
from scipy.signal import fftconvolve

from .calculus import default_phase_grid, quantize
from .errors import ShapeError
from .fourier import dft_centered
from .grids import PhaseGrid, StateGrid
from .linalg import dense_norm, operator_norm
from .pairs import (GridStandardBackend, TwistedStandardBackend, group_bounds)
from .report import VerificationReport
from .symbols import sample_symbol

NORM_EQUALITY_TOL = 0.05
TRANSFERENCE_SLACK = 1.05
UNTWIST_TOL = 1e-6


def _field(v, pgrid):
    if pgrid.d != 1:
        raise ShapeError("twisted convolution is implemented for d=1 phase grids")
    arr = np.asarray(v, dtype=complex)
    if arr.shape != pgrid.shape:
        if arr.size == pgrid.size:
            return arr.reshape(pgrid.shape)
        raise ShapeError(f"field of shape {arr.shape} does not match {pgrid.shape}")
    return arr


def twisted_convolve(k, g, pgrid):
    """``C_k g`` on a d=1 phase grid (arrays of shape ``(N, N)``).

    The sum over ``y`` is an explicit loop; the ``eta`` sum for every output
    row is a linear convolution.
    """
    k = _field(k, pgrid)
    g = _field(g, pgrid)
    N, h, pts = pgrid.N, pgrid.h, pgrid.points
    c = N // 2
    out = np.zeros((N, N), dtype=complex)
    for p in range(N):
        lo, hi = max(0, p - c), min(N, p - c + N)
        rows = np.arange(lo, hi)
        kp = np.exp(0.5j * np.outer(pts[rows], pts)) * k[p][None, :]
        conv = fftconvolve(kp, g[rows - p + c], axes=1)
        out[rows] += conv[:, c:c + N] * np.exp(-0.5j * pts[p] * pts)[None, :]
    return out * h ** 2 / (2 * np.pi)


def twisted_matrix(k, pgrid):
    """Dense ``N^2 x N^2`` matrix of ``g -> C_k g`` (row-major flattening)."""
    k = _field(k, pgrid)
    N, h, pts = pgrid.N, pgrid.h, pgrid.points
    c = N // 2
    idx = np.arange(N)
    off = idx[:, None] - idx[None, :] + c
    valid = (off >= 0) & (off < N)
    offc = np.clip(off, 0, N - 1)
    # axes (i, j, r, s): output (x_i, xi_j), input (x_r, xi_s), y = x_i - x_r, eta = xi_j - xi_s
    P = offc[:, None, :, None]
    Q = offc[None, :, None, :]
    mask = valid[:, None, :, None] & valid[None, :, None, :]
    xi_out = pts[None, :, None, None]
    x_out = pts[:, None, None, None]
    phase = np.exp(0.5j * (x_out * pts[Q] - pts[P] * xi_out))
    M = np.where(mask, phase * k[P, Q], 0.0) * h ** 2 / (2 * np.pi)
    return M.reshape(N * N, N * N)


def symbol_transform(a, pgrid):
    return dft_centered(sample_symbol(a, pgrid), pgrid)


def guard_mask(pgrid):
    """Points of the phase grid inside half the box."""
    X, XI = pgrid.mesh2()
    lim = pgrid.extent / 2
    return (np.abs(X) <= lim) & (np.abs(XI) <= lim)


def untwist_check(a, trials, pgrid, seed=0, labels="symbol"):
    """Compare ``C_{a^}`` with ``a`` quantized on the twisted standard pair.

    Test fields are random inside half the box; the residual is measured on
    the same window, where periodic wrap of the backend and zero extension of
    the quadrature see identical data.  The full-grid residual is reported
    for information.
    """
    bk = TwistedStandardBackend(StateGrid(pgrid.N, 2))
    Qa = quantize(bk, a, pgrid)
    ahat = symbol_transform(a, pgrid)
    mask = guard_mask(pgrid)
    rng = np.random.default_rng(seed)
    worst, worst_full = 0.0, 0.0
    for _ in range(trials):
        g = (rng.standard_normal(pgrid.shape) + 1j * rng.standard_normal(pgrid.shape)) * mask
        lhs = twisted_convolve(ahat, g, pgrid)
        rhs = (Qa @ g.reshape(-1)).reshape(pgrid.shape)
        gn = np.linalg.norm(g)
        worst = max(worst, float(np.linalg.norm((lhs - rhs)[mask]) / gn))
        worst_full = max(worst_full, float(np.linalg.norm(lhs - rhs) / gn))
    rep = VerificationReport("untwist")
    rep.record("symbol", labels)
    rep.record("N", pgrid.N)
    rep.record("trials", trials)
    rep.record("window_residual", worst)
    rep.record("full_grid_residual", worst_full)
    rep.check_below("untwist_residual", worst, UNTWIST_TOL)
    return rep


def twisted_norm(a, pgrid):
    # the top singular values of C_a are clustered (it acts like a(Q,P) on one
    # variable and trivially on the other), which stalls power iteration
    return dense_norm(twisted_matrix(symbol_transform(a, pgrid), pgrid))


def norm_equality_check(a, N):
    """``(nc, nw, nc/nw)``: twisted-convolution norm vs grid Weyl-operator norm."""
    pgrid = PhaseGrid(StateGrid(N, 1))
    nc = twisted_norm(a, pgrid)
    nw = operator_norm(quantize(GridStandardBackend(StateGrid(N, 1)), a, pgrid), rel_tol=1e-12)
    return nc, nw, nc / nw


def transference_check(bk, a, nc=None, N_twisted=32, samples=None, label="symbol"):
    """Check ``||a(A,B)|| <= M_A^2 M_B^2 ||C_{a^}|| * 1.05`` on one backend."""
    if nc is None:
        nc = twisted_norm(a, PhaseGrid(StateGrid(N_twisted, 1)))
    if samples is None:
        step = bk.lattice.h if bk.lattice is not None else 0.25
        samples = [k * step for k in range(-4, 5)]
    gb = group_bounds(bk, samples)
    op = quantize(bk, a)
    norm_op = operator_norm(op, rel_tol=1e-12)
    bound = gb.M_A ** 2 * gb.M_B ** 2 * nc
    rep = VerificationReport("transference")
    rep.record("backend", bk.kind)
    rep.record("symbol", label)
    rep.record("M_A", gb.M_A)
    rep.record("M_B", gb.M_B)
    rep.record("weyl_norm", norm_op)
    rep.record("twisted_norm", nc)
    rep.check_at_most("transference", norm_op, bound * TRANSFERENCE_SLACK)
    return rep
