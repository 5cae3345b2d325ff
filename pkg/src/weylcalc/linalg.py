"""Operator-norm estimation by power iteration on ``M^H M``."""
import numpy as np
from scipy.sparse.linalg import aslinearoperator

from .errors import ConvergenceError, ShapeError

POWER_SEED = 20240531


def operator_norm(M, rel_tol=1e-10, max_iter=20000, seed=POWER_SEED):
    """Largest singular value of ``M`` (dense, sparse or LinearOperator).

    The start vector is a fixed-seed complex Gaussian, so repeated calls give
    bit-identical answers.  Iteration stops once the geometric tail of the
    remaining increments (estimated from consecutive ones) drops below
    ``rel_tol`` relative to the current estimate.
    """
    if M.shape[0] != M.shape[1]:
        raise ShapeError(f"operator_norm expects a square operator, got {M.shape}")
    op = aslinearoperator(M)
    n = M.shape[1]
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x /= np.linalg.norm(x)
    sigma = 0.0
    prev_delta = None
    for _ in range(max_iter):
        y = op.matvec(x)
        new_sigma = float(np.linalg.norm(y))
        if new_sigma == 0.0:
            return 0.0
        z = op.rmatvec(y)
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return new_sigma
        x = z / nz
        delta = abs(new_sigma - sigma)
        sigma = new_sigma
        if prev_delta is not None and prev_delta > 0:
            rho = min(delta / prev_delta, 0.999999)
            tail = delta * rho / (1.0 - rho)
            if tail <= rel_tol * sigma and delta <= 10 * rel_tol * sigma:
                return sigma
        elif delta == 0.0:
            return sigma
        prev_delta = delta
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} steps", estimate=sigma, vector=x
    )


def dense_norm(M):
    """Spectral norm by full SVD; the reference for ``operator_norm``."""
    return float(np.linalg.norm(np.asarray(M), 2))
