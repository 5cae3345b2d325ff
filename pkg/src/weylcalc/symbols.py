"""Symbols: sampled phase-space fields and closed-form Gaussians.

A closed-form Gaussian symbol on R^2 (d = 1) is

    a(x, xi) = c * exp(-lam x^2 - lam_xi xi^2 + b_x x + b_xi xi)

with complex coefficients and ``Re lam, Re lam_xi > 0``.  Translated,
modulated and dilated Gaussians all stay in this family, as do products of
its members.  For d = 2 only the isotropic form ``c exp(-lam |z|^2)`` is
supported.
"""
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial import hermite as _herm

from .errors import DomainError, ShapeError


@dataclass(frozen=True)
class GaussianSymbolParams:
    """``c exp(-lam x^2 - lam_xi xi^2 + b_x x + b_xi xi)``; ``lam_xi`` defaults to ``lam``."""

    c: complex
    lam: complex
    d: int = 1
    lam_xi: complex = None
    b_x: complex = 0.0
    b_xi: complex = 0.0

    def __post_init__(self):
        if self.lam_xi is None:
            object.__setattr__(self, "lam_xi", self.lam)
        if np.real(self.lam) <= 0 or np.real(self.lam_xi) <= 0:
            raise DomainError(f"Gaussian exponent needs positive real part, got {self.lam}, {self.lam_xi}")
        if self.d == 2 and not self.is_radial:
            raise ShapeError("d=2 Gaussian symbols must be radial")

    @classmethod
    def translated(cls, c, lam, x0=0.0, xi0=0.0):
        """``c exp(-lam((x-x0)^2 + (xi-xi0)^2))``."""
        amp = c * np.exp(-lam * (x0 ** 2 + xi0 ** 2))
        return cls(amp, lam, b_x=2 * lam * x0, b_xi=2 * lam * xi0)

    @property
    def is_radial(self):
        return self.lam_xi == self.lam and self.b_x == 0 and self.b_xi == 0

    def __call__(self, X, XI):
        if self.d == 1:
            return self.c * np.exp(-self.lam * X ** 2 - self.lam_xi * XI ** 2 + self.b_x * X + self.b_xi * XI)
        r2 = sum(x ** 2 for x in X) + sum(xi ** 2 for xi in XI)
        return self.c * np.exp(-self.lam * r2)

    def sample(self, pgrid):
        _check_dim(self, pgrid)
        X, XI = pgrid.mesh()
        if self.d == 1:
            return np.asarray(self(X[0], XI[0]), dtype=complex)
        return np.asarray(self(X, XI), dtype=complex)

    def log_fourier(self, U, V):
        """Log of the symbol transform ``(2 pi)^-1 int a e^{-i(xu + xi v)}`` (d=1)."""
        lx, lxi = self.lam, self.lam_xi
        return (np.log(self.c / (2 * np.sqrt(lx * lxi)) + 0j)
                + (self.b_x - 1j * U) ** 2 / (4 * lx)
                + (self.b_xi - 1j * V) ** 2 / (4 * lxi))

    def fourier(self, U, V):
        if self.d != 1:
            raise ShapeError("closed-form transform is implemented for d=1")
        return np.exp(self.log_fourier(U, V))

    def derivative(self, X, XI, alpha=0, beta=0):
        """Exact ``d_xi^alpha d_x^beta`` of a radial Gaussian at the given points.

        Uses ``d^n/dx^n e^{-lam x^2} = (-sqrt lam)^n H_n(sqrt lam x) e^{-lam x^2}``
        with physicists' Hermite polynomials ``H_n``.
        """
        if not self.is_radial or self.d != 1:
            raise ShapeError("closed-form derivatives need a radial d=1 Gaussian")
        s = np.sqrt(self.lam + 0j)
        hx = _herm.hermval(s * X, [0] * beta + [1])
        hxi = _herm.hermval(s * XI, [0] * alpha + [1])
        return self.c * (-s) ** (alpha + beta) * hx * hxi * np.exp(-self.lam * (X ** 2 + XI ** 2))

    def scaled(self, alpha):
        return replace(self, c=alpha * self.c)

    def dilated(self, k):
        """``a(x/k, xi/k)``."""
        return replace(self, lam=self.lam / k ** 2, lam_xi=self.lam_xi / k ** 2,
                       b_x=self.b_x / k, b_xi=self.b_xi / k)

    def times(self, other):
        """Pointwise product with another Gaussian of the same dimension."""
        if other.d != self.d:
            raise ShapeError("dimension mismatch in Gaussian product")
        return GaussianSymbolParams(self.c * other.c, self.lam + other.lam, self.d,
                                    self.lam_xi + other.lam_xi, self.b_x + other.b_x,
                                    self.b_xi + other.b_xi)

    @property
    def terms(self):
        return (self,)


@dataclass(frozen=True)
class GaussianSum:
    """Finite linear combination of closed-form Gaussians (amplitudes carry the weights)."""

    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def d(self):
        return self.terms[0].d if self.terms else 1

    def __call__(self, X, XI):
        return sum(t(X, XI) for t in self.terms)

    def sample(self, pgrid):
        out = np.zeros(pgrid.shape, dtype=complex)
        for t in self.terms:
            out += t.sample(pgrid)
        return out

    def fourier(self, U, V):
        return sum(t.fourier(U, V) for t in self.terms)

    def derivative(self, X, XI, alpha=0, beta=0):
        out = np.zeros(np.broadcast(X, XI).shape, dtype=complex)
        for t in self.terms:
            out += t.derivative(X, XI, alpha, beta)
        return out

    def scaled(self, alpha):
        return GaussianSum(tuple(t.scaled(alpha) for t in self.terms))

    def dilated(self, k):
        return GaussianSum(tuple(t.dilated(k) for t in self.terms))

    def times(self, other):
        return GaussianSum(tuple(s.times(o) for s in self.terms for o in other.terms))


CLOSED_FORM = (GaussianSymbolParams, GaussianSum)


def is_closed_form(a):
    return isinstance(a, CLOSED_FORM)


def _check_dim(a, pgrid):
    if a.d != pgrid.d:
        raise ShapeError(f"symbol dimension {a.d} does not match grid dimension {pgrid.d}")


def sample_symbol(a, pgrid):
    """Grid samples of a symbol given as an array, a closed form, or a callable ``a(X, XI)``."""
    if is_closed_form(a):
        return a.sample(pgrid)
    if callable(a):
        if pgrid.d == 1:
            X, XI = pgrid.mesh2()
        else:
            X, XI = pgrid.mesh()
        return np.asarray(np.broadcast_to(a(X, XI), pgrid.shape), dtype=complex)
    arr = np.asarray(a)
    if arr.shape == pgrid.shape:
        return arr.astype(complex)
    if arr.ndim == 1 and arr.size == pgrid.size:
        return arr.reshape(pgrid.shape).astype(complex)
    raise ShapeError(f"symbol of shape {arr.shape} does not match phase grid {pgrid.shape}")


def dilate(a, k):
    """``a(x/k, xi/k)`` for closed forms or callables."""
    if is_closed_form(a):
        return a.dilated(k)
    if callable(a):
        return lambda X, XI: a(X / k, XI / k)
    raise ShapeError("only closed-form or callable symbols can be dilated")


def evaluate_at_origin(a):
    if is_closed_form(a) or callable(a):
        return complex(np.asarray(a(np.zeros(1), np.zeros(1))).reshape(-1)[0])
    raise ShapeError("origin value needs a closed-form or callable symbol")
