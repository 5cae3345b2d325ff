"""Finite-dimensional Weyl calculus: quantization, Moyal products, twisted
convolutions and spectral checks on discretized canonical pairs."""

from .errors import (ConvergenceError, DomainError, InvalidGrid, ShapeError,
                     UnsupportedOrder, WeylCalcError)
from .grids import PhaseGrid, StateGrid, make_phase_grid, make_state_grid
from .fourier import dft_centered, idft_centered, spectral_derivative
from .linalg import operator_norm

__all__ = [
    "ConvergenceError", "DomainError", "InvalidGrid", "ShapeError",
    "UnsupportedOrder", "WeylCalcError", "PhaseGrid", "StateGrid",
    "make_phase_grid", "make_state_grid", "dft_centered", "idft_centered",
    "spectral_derivative", "operator_norm",
]
