"""Unitary centered DFT and spectral differentiation on self-dual grids.

Normalization table (all 2*pi bookkeeping lives here):

==========================  ==============================================
continuum object            grid counterpart
==========================  ==============================================
(2 pi)^{-1/2} int f e^{-ix xi} dx    ``dft_centered`` along one axis
(2 pi)^{-d} int_{R^2d} a e^{-i(xu+xi v)}  ``dft_centered`` over all 2d axes
int f(x) dx                 ``h**d * sum(f)``
d/dx                        multiplier ``1j * xi`` on the dual lattice
==========================  ==============================================

The unitary DFT matrix is ``F[m, k] = N**-0.5 * exp(-1j * x_k * xi_m)`` with
``x_k, xi_m`` on the same lattice; because ``N h**2 = 2 pi`` this is also
``h / sqrt(2 pi)`` times the Riemann sum of the continuum transform.
"""
import numpy as np

from .errors import ShapeError, UnsupportedOrder

MAX_DERIVATIVE_ORDER = 6


def _as_field(v, shape):
    v = np.asarray(v)
    if v.shape == shape:
        return v, False
    if v.ndim == 1 and v.size == int(np.prod(shape)):
        return v.reshape(shape), True
    raise ShapeError(f"field of shape {v.shape} does not match grid shape {shape}")


def dft_centered(v, grid, axes=None, inverse=False):
    """Unitary centered DFT of a field on ``grid`` (StateGrid or PhaseGrid).

    ``axes`` restricts the transform to a subset of axes; by default every
    axis is transformed.  Flat inputs are accepted and returned flat.
    """
    arr, flat = _as_field(v, grid.shape)
    if axes is None:
        axes = tuple(range(arr.ndim))
    arr = np.fft.ifftshift(arr, axes=axes)
    if inverse:
        arr = np.fft.ifftn(arr, axes=axes, norm="ortho")
    else:
        arr = np.fft.fftn(arr, axes=axes, norm="ortho")
    arr = np.fft.fftshift(arr, axes=axes)
    return arr.reshape(-1) if flat else arr


def idft_centered(v, grid, axes=None):
    return dft_centered(v, grid, axes=axes, inverse=True)


def dft_matrix(N):
    """Dense unitary centered DFT matrix for one axis of length ``N``."""
    k = np.arange(N) - N // 2
    return np.exp(-2j * np.pi * np.outer(k, k) / N) / np.sqrt(N)


def spectral_derivative(a, pgrid, alpha=0, beta=0):
    """``d_xi^alpha d_x^beta a`` for a field on a phase grid.

    ``alpha`` (xi-orders) and ``beta`` (x-orders) are ints for d=1 or
    length-d tuples.  Odd-order multipliers drop the unpaired Nyquist mode so
    real fields stay real.
    """
    d = pgrid.d
    alpha = _multi_index(alpha, d)
    beta = _multi_index(beta, d)
    order = sum(alpha) + sum(beta)
    if order > MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrder(f"total derivative order {order} exceeds {MAX_DERIVATIVE_ORDER}")
    arr, flat = _as_field(a, pgrid.shape)
    if order == 0:
        out = np.array(arr, dtype=complex)
        return out.reshape(-1) if flat else out
    dual = pgrid.points
    spec = dft_centered(arr, pgrid)
    for axis, k in enumerate(beta + alpha):
        if k == 0:
            continue
        mult = (1j * dual) ** k
        if k % 2 == 1:
            mult[0] = 0.0
        shape = [1] * spec.ndim
        shape[axis] = -1
        spec = spec * mult.reshape(shape)
    out = idft_centered(spec, pgrid)
    return out.reshape(-1) if flat else out


def _multi_index(idx, d):
    if np.isscalar(idx):
        idx = (int(idx),) + (0,) * (d - 1)
    idx = tuple(int(i) for i in idx)
    if len(idx) != d or any(i < 0 for i in idx):
        raise ShapeError(f"multi-index {idx} invalid for d={d}")
    return idx
