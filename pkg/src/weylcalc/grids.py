"""Self-dual uniform grids for the position and phase-space variables.

A grid with ``N`` points per axis and spacing ``h = sqrt(2*pi/N)`` is its own
Fourier dual: the centered DFT maps samples on the lattice ``x_k = (k - N/2) h``
to samples on the same lattice.  The same lattice therefore carries ``x``,
``xi`` and the Fourier variables ``u``, ``v``.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidGrid

MIN_POINTS = 8


@dataclass(frozen=True)
class StateGrid:
    """Uniform centered lattice on R^d with ``N`` points per axis."""

    N: int
    d: int = 1

    def __post_init__(self):
        if self.d not in (1, 2):
            raise InvalidGrid(f"d must be 1 or 2, got {self.d}")
        if not _is_valid_size(self.N):
            raise InvalidGrid(f"N must be an even integer >= {MIN_POINTS}, got {self.N}")

    @property
    def h(self) -> float:
        return float(np.sqrt(2 * np.pi / self.N))

    @cached_property
    def points(self) -> np.ndarray:
        """1-D array of lattice coordinates (shared by every axis)."""
        return (np.arange(self.N) - self.N // 2) * self.h

    @property
    def shape(self) -> tuple:
        return (self.N,) * self.d

    @property
    def size(self) -> int:
        return self.N ** self.d

    @property
    def extent(self) -> float:
        """Half-width of the box, ``N h / 2``."""
        return self.N * self.h / 2

    def mesh(self):
        """Coordinate arrays of shape ``self.shape`` (``indexing='ij'``)."""
        return np.meshgrid(*([self.points] * self.d), indexing="ij")

    def on_lattice(self, t, tol=1e-12) -> bool:
        """True if every entry of ``t`` is an integer multiple of ``h``."""
        q = np.asarray(t, dtype=float) / self.h
        return bool(np.all(np.abs(q - np.round(q)) < tol))

    def lattice_index(self, t) -> np.ndarray:
        return np.round(np.asarray(t, dtype=float) / self.h).astype(int)


@dataclass(frozen=True)
class PhaseGrid:
    """Product grid for the phase-space variables ``(x, xi)`` of R^{2d}.

    Arrays on a phase grid have shape ``(N,)*d + (N,)*d``; the first ``d``
    axes carry ``x`` and the last ``d`` carry ``xi``.
    """

    state: StateGrid

    @property
    def N(self) -> int:
        return self.state.N

    @property
    def d(self) -> int:
        return self.state.d

    @property
    def h(self) -> float:
        return self.state.h

    @property
    def points(self) -> np.ndarray:
        return self.state.points

    @property
    def shape(self) -> tuple:
        return (self.N,) * (2 * self.d)

    @property
    def size(self) -> int:
        return self.N ** (2 * self.d)

    @property
    def extent(self) -> float:
        return self.state.extent

    def mesh(self):
        """Return ``(X, XI)``; each is a list of ``d`` coordinate arrays."""
        grids = np.meshgrid(*([self.points] * (2 * self.d)), indexing="ij")
        return grids[: self.d], grids[self.d:]

    def mesh2(self):
        """Convenience for d=1: plain ``(X, XI)`` arrays of shape (N, N)."""
        if self.d != 1:
            raise InvalidGrid("mesh2 is only defined for d=1 phase grids")
        return np.meshgrid(self.points, self.points, indexing="ij")

    def radius2(self) -> np.ndarray:
        X, XI = self.mesh()
        return sum(x ** 2 for x in X) + sum(xi ** 2 for xi in XI)


def _is_valid_size(N) -> bool:
    # powers of two are the usual choice; any even size keeps the centered
    # lattice symmetric and is needed for 48-point refinement runs
    return isinstance(N, (int, np.integer)) and N >= MIN_POINTS and N % 2 == 0


def make_state_grid(N: int, d: int = 1) -> StateGrid:
    return StateGrid(int(N) if isinstance(N, np.integer) else N, d)


def make_phase_grid(N: int, d: int = 1) -> PhaseGrid:
    return PhaseGrid(make_state_grid(N, d))
