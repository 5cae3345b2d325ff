"""Finite-dimensional Weyl pairs: the one-parameter groups ``e^{iuA}``, ``e^{ivB}``.

Backends
--------
grid-standard     position/momentum on a periodic self-dual grid
hermite           position/momentum in a (padded) Hermite number basis
gaussian-measure  the Gaussian-measure pair, conjugate of grid-standard by a
                  diagonal intertwiner; norms taken in the weighted space
twisted-standard  ``(-Q2/2 - P1, Q1/2 - P2)`` on a two-axis grid
skewed            ``(A, lam*A + B)`` built from any other backend

For pairs of dimension d > 1, ``e^{iuA}`` is the product over ascending j.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg  # noqa: F401  (registers sp.linalg)

from .errors import ShapeError
from .fourier import dft_matrix
from .grids import StateGrid
from .linalg import operator_norm
from .report import VerificationReport

SIGMA_TOL = 1e-9
NOISE_FLOOR = 1e-13


def _vec(t, d):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.shape != (d,):
        raise ShapeError(f"parameter {t} does not have dimension {d}")
    return t


class WeylBackend:
    """A realized Weyl pair acting on ``C^state_dim``.

    Subclasses implement ``_group_A`` and ``_group_B`` for one parameter
    vector.  ``lattice`` is the StateGrid whose lattice ``h Z`` makes the
    groups exact, or ``None`` for backends without one.
    """

    kind = "abstract"
    d = 1
    state_dim = 0
    lattice = None
    unitary = True
    sparse = False
    tolerance = 1e-10

    def group_A(self, u):
        return self._group_A(_vec(u, self.d))

    def group_B(self, v):
        return self._group_B(_vec(v, self.d))

    def identity(self):
        if self.sparse:
            return sp.identity(self.state_dim, dtype=complex, format="csr")
        return np.eye(self.state_dim, dtype=complex)

    @property
    def check_modes(self):
        """Index set on which identities are asserted (all states by default)."""
        return slice(None)

    def descriptor(self) -> dict:
        return {"kind": self.kind}


def dense(M):
    return M.toarray() if sp.issparse(M) else np.asarray(M)


def weyl_exponential(bk, u, v):
    """``e^{i(uA+vB)} := e^{iuv/2} e^{iuA} e^{ivB}``."""
    u = _vec(u, bk.d)
    v = _vec(v, bk.d)
    return np.exp(0.5j * float(u @ v)) * (bk.group_A(u) @ bk.group_B(v))


# --------------------------------------------------------------------------
# grid-standard

class GridStandardBackend(WeylBackend):
    """``e^{iuQ}`` = diagonal phase, ``e^{ivP}`` = band-limited shift by ``v``."""

    kind = "grid-standard"

    def __init__(self, grid: StateGrid):
        self.grid = grid
        self.lattice = grid
        self.d = grid.d
        self.state_dim = grid.size

    @cached_property
    def _dft(self):
        return dft_matrix(self.grid.N)

    def _axis_shift(self, v):
        N = self.grid.N
        if self.grid.on_lattice(v):
            n = int(self.grid.lattice_index(v))
            return np.roll(np.eye(N, dtype=complex), n, axis=1)
        F = self._dft
        return F.conj().T @ (np.exp(1j * v * self.grid.points)[:, None] * F)

    def _group_A(self, u):
        grids = self.grid.mesh()
        phase = sum(uj * xj for uj, xj in zip(u, grids))
        return np.diag(np.exp(1j * phase).reshape(-1))

    def _group_B(self, v):
        out = np.ones((1, 1), dtype=complex)
        for vj in v:
            out = np.kron(out, self._axis_shift(vj))
        return out

    def descriptor(self):
        return {"kind": self.kind, "N": self.grid.N, "d": self.grid.d}


def standard_pair_grid(g: StateGrid) -> GridStandardBackend:
    return GridStandardBackend(g)


# --------------------------------------------------------------------------
# hermite

class HermiteBackend(WeylBackend):
    """Position/momentum in the Hermite basis.

    ``Q = (a + a^H)/sqrt 2`` and ``P = (a - a^H)/(i sqrt 2)`` are built in a
    working basis of ``n_work + 1`` modes; identities are asserted on the
    resolved modes ``n <= n_max - 4``.  The padding keeps the truncation edge out
    of reach of every low mode for the parameter ranges used here.
    """

    kind = "hermite"
    tolerance = 1e-6
    # low-mode matrix elements of e^{i(uQ+vP)} carry a factor e^{-(u^2+v^2)/4}
    quadrature_decay = 0.25

    def __init__(self, n_max: int, n_work: int = None):
        if n_max < 4:
            raise ShapeError("hermite backend needs n_max >= 4")
        self.n_max = int(n_max)
        self.n_work = int(n_work) if n_work is not None else max(8 * self.n_max, 128)
        if self.n_work < self.n_max:
            raise ShapeError("n_work must be at least n_max")
        self.state_dim = self.n_work + 1

    @cached_property
    def lowering(self):
        return np.diag(np.sqrt(np.arange(1, self.state_dim)), 1).astype(complex)

    @cached_property
    def Q(self):
        a = self.lowering
        return (a + a.conj().T) / np.sqrt(2)

    @cached_property
    def P(self):
        a = self.lowering
        return (a - a.conj().T) / (1j * np.sqrt(2))

    @cached_property
    def _eig_Q(self):
        return np.linalg.eigh(self.Q)

    @cached_property
    def _eig_P(self):
        return np.linalg.eigh(self.P)

    @property
    def L(self):
        """``(Q^2 + P^2)/2 - 1/2`` in the working basis."""
        return 0.5 * (self.Q @ self.Q + self.P @ self.P) - 0.5 * np.eye(self.state_dim)

    @property
    def check_modes(self):
        # quadrature and truncation effects are confined to modes above n_max - 4
        return slice(0, self.n_max - 3)

    @staticmethod
    def _exp(eig, t):
        w, V = eig
        return (V * np.exp(1j * t * w)) @ V.conj().T

    def _group_A(self, u):
        return self._exp(self._eig_Q, float(u[0]))

    def _group_B(self, v):
        return self._exp(self._eig_P, float(v[0]))

    def group_A_stack(self, us):
        w, V = self._eig_Q
        return np.einsum("ij,mj,kj->mik", V, np.exp(1j * np.outer(us, w)), V.conj(), optimize=True)

    def group_B_stack(self, vs):
        w, V = self._eig_P
        return np.einsum("ij,mj,kj->mik", V, np.exp(1j * np.outer(vs, w)), V.conj(), optimize=True)

    def basis_vector(self, n):
        e = np.zeros(self.state_dim, dtype=complex)
        e[n] = 1.0
        return e

    def descriptor(self):
        return {"kind": self.kind, "n_max": self.n_max, "n_work": self.n_work}


def hermite_backend(n_max: int, d: int = 1, n_work: int = None) -> HermiteBackend:
    if d != 1:
        raise ShapeError("hermite backend is implemented for d=1")
    return HermiteBackend(n_max, n_work)


# --------------------------------------------------------------------------
# gaussian-measure

class GaussianPairBackend(WeylBackend):
    """The Gaussian position/momentum pair on a discretized ``L^2(gamma)``.

    States are samples ``f(x_k)`` at ``x_k = sqrt(2) y_k`` where ``y_k`` is the
    self-dual lattice.  The intertwiner ``U f(y) = sqrt 2 e^{-y^2/2} f(sqrt 2 y)``
    is diagonal in these coordinates, so ``e^{itP} = U^{-1} T(t) U`` with ``T``
    the grid-standard translation, and ``e^{itQ}`` multiplies by
    ``e^{itx/sqrt 2} = e^{ity}``.
    """

    kind = "gaussian-measure"
    unitary = False
    tolerance = 1e-8

    def __init__(self, grid: StateGrid):
        if grid.d != 1:
            raise ShapeError("gaussian pair is implemented for d=1")
        self.grid = grid
        self.lattice = grid
        self.state_dim = grid.N
        self._standard = GridStandardBackend(grid)

    @property
    def y(self):
        return self.grid.points

    @property
    def x(self):
        return np.sqrt(2) * self.grid.points

    @cached_property
    def log_weights(self):
        """Log of the quadrature weights of ``gamma`` on the x-lattice."""
        dx = np.sqrt(2) * self.grid.h
        return -0.5 * self.x ** 2 + np.log(dx / np.sqrt(2 * np.pi))

    def _log_u(self):
        return np.log(np.sqrt(2)) - 0.5 * self.y ** 2

    def _group_A(self, u):
        return self._standard._group_A(u)

    def _group_B(self, v):
        T = self._standard._group_B(v)
        lu = self._log_u()
        return np.exp(lu[None, :] - lu[:, None]) * T

    def weighted(self, M, p=2):
        """``D_p M D_p^{-1}`` with ``D_p = diag(w^{1/p})``: the matrix whose plain
        ``l^p`` norm is the weighted ``L^p(gamma)`` norm of ``M``.

        For group elements the entrywise form is used so no entry of size
        ``e^{y^2/2}`` is ever formed.
        """
        lw = self.log_weights / p
        return np.exp(lw[:, None] - lw[None, :]) * M

    def weighted_group_B(self, t, p=2):
        T = self._standard._group_B(_vec(t, 1))
        lu = self._log_u()
        lw = self.log_weights / p
        expo = (lu[None, :] - lu[:, None]) + (lw[:, None] - lw[None, :])
        return np.exp(expo) * T

    def weighted_norm_B(self, t, p=2, centers=None, width=2.0):
        """Weighted ``L^p(gamma)`` norm of ``e^{itP}``.

        p=2: exact (largest singular value of the weighted matrix).
        Otherwise: supremum of ``||e^{itP} f||_p / ||f||_p`` over normalized
        Gaussian wave packets ``f`` centered at ``centers`` (a lower bound on
        the operator norm that is insensitive to aliasing of the shift).
        """
        if p == 2:
            return operator_norm(self.weighted_group_B(t, 2), rel_tol=1e-13)
        if centers is None:
            centers = default_packet_centers(self)
        T = self._standard._group_B(_vec(t, 1))
        best = 0.0
        for c in centers:
            f = np.exp(-((self.x - c) ** 2) / (2 * width ** 2))
            uf = np.exp(self._log_u()) * f
            tuf = T @ uf
            # entries at roundoff level would be amplified by e^{y^2/2}; the
            # true tail of a shifted packet is negligible there
            tuf[np.abs(tuf) < NOISE_FLOOR * np.abs(tuf).max()] = 0.0
            g = tuf / np.exp(self._log_u())
            best = max(best, _weighted_lp(g, self.log_weights, p) / _weighted_lp(f, self.log_weights, p))
        return best

    def descriptor(self):
        return {"kind": self.kind, "N": self.grid.N}


def default_packet_centers(bk):
    """Packet centers kept well inside the box so shifts up to 2 do not wrap."""
    lim = 0.5 * bk.x.max()
    return np.linspace(-lim, lim, 17)


def _weighted_lp(f, log_w, p):
    # sum |f|^p w computed in log space; |f| may underflow far from the packet
    with np.errstate(divide="ignore"):
        logs = p * np.log(np.abs(f)) + log_w
    m = logs.max()
    return float(np.exp((m + np.log(np.exp(logs - m).sum())) / p))


def ou_translation_norm_oracle(t, p, centers, width=2.0, n_quad=4001):
    """Packet norm ratio from the closed-form weighted translation identity

        ||e^{itP} f||_p^p = int exp((1/2 - p/4)(2 sqrt2 x t - 2 t^2)) |f(x)|^p dgamma(x),

    evaluated by direct quadrature.  Independent of any grid backend.
    """
    best = 0.0
    for c in centers:
        x = np.linspace(c - 12 * width, c + 12 * width, n_quad)
        dens = np.exp(-0.5 * x ** 2) / np.sqrt(2 * np.pi)
        fp = np.exp(-p * (x - c) ** 2 / (2 * width ** 2))
        mult = np.exp((0.5 - p / 4) * (2 * np.sqrt(2) * x * t - 2 * t ** 2))
        num = np.trapezoid(mult * fp * dens, x)
        den = np.trapezoid(fp * dens, x)
        best = max(best, (num / den) ** (1.0 / p))
    return best


def gaussian_pair(g: StateGrid) -> GaussianPairBackend:
    return GaussianPairBackend(g)


# --------------------------------------------------------------------------
# twisted-standard

class TwistedStandardBackend(WeylBackend):
    """The pair ``(-Q2/2 - P1, Q1/2 - P2)`` on ``L^2(R^2)``, d = 1.

    States are fields ``g[i, j] = g(x_i, xi_j)`` on a two-axis grid, flattened
    row-major.  With commuting factors,

        e^{iuA} g(x, xi) = e^{-i u xi / 2} g(x - u, xi)
        e^{ivB} g(x, xi) = e^{ i v x  / 2} g(x, xi - v)

    Lattice parameters give sparse phase-times-permutation matrices.  The
    half-phases make the periodic relations exact on ``2 h Z``.
    """

    kind = "twisted-standard"
    sparse = True

    def __init__(self, grid2: StateGrid):
        if grid2.d != 2:
            raise ShapeError("twisted standard pair needs a two-axis grid")
        self.grid = grid2
        self.lattice = grid2
        self.state_dim = grid2.size

    @property
    def ccr_lattice_step(self):
        return 2 * self.grid.h

    def _shift_1d(self, t):
        """Matrix of ``f -> f(. - t)`` on one axis (sparse when on-lattice)."""
        N = self.grid.N
        g1 = StateGrid(N, 1)
        if g1.on_lattice(t):
            n = int(g1.lattice_index(t))
            rows = np.arange(N)
            cols = (rows - n) % N
            return sp.csr_matrix((np.ones(N, dtype=complex), (rows, cols)), shape=(N, N))
        F = dft_matrix(N)
        return sp.csr_matrix(F.conj().T @ (np.exp(-1j * t * g1.points)[:, None] * F))

    def _group_A(self, u):
        u = float(u[0])
        N = self.grid.N
        pts = self.grid.points
        eye = sp.identity(N, dtype=complex, format="csr")
        phase = sp.diags(np.exp(-0.5j * u * pts))
        return (sp.kron(eye, phase) @ sp.kron(self._shift_1d(u), eye)).tocsr()

    def _group_B(self, v):
        v = float(v[0])
        N = self.grid.N
        pts = self.grid.points
        eye = sp.identity(N, dtype=complex, format="csr")
        phase = sp.diags(np.exp(0.5j * v * pts))
        return (sp.kron(phase, eye) @ sp.kron(eye, self._shift_1d(v))).tocsr()

    def descriptor(self):
        return {"kind": self.kind, "N": self.grid.N}


def twisted_standard_pair(g2: StateGrid) -> TwistedStandardBackend:
    return TwistedStandardBackend(g2)


# --------------------------------------------------------------------------
# skew transform

class SkewedBackend(WeylBackend):
    """``(A, lam A + B)`` with ``e^{it(lam A + B)} := e^{i lam t^2/2} e^{i lam t A} e^{itB}``."""

    kind = "skewed"

    def __init__(self, base: WeylBackend, lam: float):
        self.base = base
        self.lam = float(lam)
        self.d = base.d
        self.state_dim = base.state_dim
        self.lattice = base.lattice
        self.unitary = base.unitary
        self.sparse = base.sparse
        self.tolerance = base.tolerance

    @property
    def check_modes(self):
        return self.base.check_modes

    def _group_A(self, u):
        return self.base._group_A(u)

    def _group_B(self, v):
        if self.lam == 0.0:
            return self.base._group_B(v)
        phase = np.exp(0.5j * self.lam * float(v @ v))
        return phase * (self.base._group_A(self.lam * v) @ self.base._group_B(v))

    def descriptor(self):
        return {"kind": self.kind, "lambda": self.lam, "base": self.base.descriptor()}


def skew_transform(bk: WeylBackend, lam: float) -> WeylBackend:
    return SkewedBackend(bk, lam)


# --------------------------------------------------------------------------
# verifiers

def _residual(M, modes):
    if sp.issparse(M):
        # Frobenius norm: a cheap upper bound on the spectral norm
        return float(sp.linalg.norm(M[:, modes]))
    return float(np.linalg.norm(np.asarray(M)[:, modes], 2))


def verify_ccr(bk, samples, tol=1e-10):
    """Max residual of the three integrated commutation relations over ``samples``.

    ``samples`` is an iterable of ``(s, t)`` scalar pairs; for d > 1 every
    index pair (j, k) is exercised.
    """
    rep = VerificationReport("ccr")
    worst = {"AA": 0.0, "BB": 0.0, "AB": 0.0}
    modes = bk.check_modes
    for s, t in samples:
        for j in range(bk.d):
            for k in range(bk.d):
                sj = np.zeros(bk.d)
                tk = np.zeros(bk.d)
                sj[j] = s
                tk[k] = t
                Aj, Ak = bk.group_A(sj), bk.group_A(tk)
                Bj, Bk = bk.group_B(sj), bk.group_B(tk)
                worst["AA"] = max(worst["AA"], _residual(Aj @ Ak - Ak @ Aj, modes))
                worst["BB"] = max(worst["BB"], _residual(Bj @ Bk - Bk @ Bj, modes))
                phase = np.exp(-1j * s * t * (j == k))
                worst["AB"] = max(worst["AB"], _residual(Aj @ Bk - phase * (Bk @ Aj), modes))
    for key, val in worst.items():
        rep.record(f"residual_{key}", val)
        rep.check_below(f"relation_{key}", val, tol)
    return rep


def verify_sigma(bk, samples, tol=SIGMA_TOL, modes=None):
    """Check ``W(u,v) W(u',v') = e^{i(u'v - uv')/2} W(u+u', v+v')`` on samples.

    Failures are reported, never raised.
    """
    rep = VerificationReport("sigma")
    modes = bk.check_modes if modes is None else modes
    worst = 0.0
    for (u, v), (u2, v2) in samples:
        u, v, u2, v2 = (_vec(t, bk.d) for t in (u, v, u2, v2))
        lhs = weyl_exponential(bk, u, v) @ weyl_exponential(bk, u2, v2)
        phase = np.exp(0.5j * float(u2 @ v - u @ v2))
        rhs = phase * weyl_exponential(bk, u + u2, v + v2)
        worst = max(worst, _residual(lhs - rhs, modes))
    rep.record("samples", len(samples))
    rep.record("max_residual", worst)
    rep.check_below("composition_law", worst, tol)
    return rep


def lattice_samples(bk, count, seed=0, span=None, step=None):
    """Random on-lattice ``((u,v),(u',v'))`` sample pairs for a grid backend."""
    rng = np.random.default_rng(seed)
    step = step if step is not None else getattr(bk, "ccr_lattice_step", bk.lattice.h)
    span = span if span is not None else bk.lattice.N // 4
    out = []
    for _ in range(count):
        ints = rng.integers(-span, span + 1, size=(4, bk.d))
        u, v, u2, v2 = (i * step for i in ints)
        out.append(((u, v), (u2, v2)))
    return out


@dataclass
class GroupBoundEstimate:
    M_A: float
    M_B: float
    samples: list = field(default_factory=list)
    uniform: bool = True

    def as_report(self):
        rep = VerificationReport("group_bounds")
        rep.record("M_A", self.M_A)
        rep.record("M_B", self.M_B)
        rep.record("sample_count", len(self.samples))
        rep.record("uniform", self.uniform)
        return rep


def group_bounds(bk, samples, p=2):
    """Sup of operator norms of the groups over sampled parameters.

    For the gaussian-measure backend norms are taken in ``L^p(gamma)``; growth
    of ``M_B`` across the sample range is flagged as non-uniform.
    """
    samples = [float(t) for t in samples]
    if isinstance(bk, GaussianPairBackend):
        na = [operator_norm(bk.weighted(bk.group_A(t), p), rel_tol=1e-13) if p == 2 else 1.0 for t in samples]
        nb = [bk.weighted_norm_B(t, p) for t in samples]
    else:
        na = [operator_norm(bk.group_A(t), rel_tol=1e-13) for t in samples]
        nb = [operator_norm(bk.group_B(t), rel_tol=1e-13) for t in samples]
    order = np.argsort(np.abs(samples))
    growing = np.all(np.diff(np.asarray(nb)[order]) > 0) and len(samples) > 1 and nb[order[-1]] > 1.5
    return GroupBoundEstimate(max(na), max(nb), samples, uniform=not growing)
