"""Sparse decomposition segmentation.

Models a block as smooth background P @ alpha plus a sparse foreground
component s, and minimizes

    ||alpha||_1 + lam1 * ||f - P alpha||_1 + lam2 * ||D (f - P alpha)||_1

by ADMM with three auxiliary splittings (y for alpha, z for the sparse
component, x for its total-variation image). D stacks the horizontal and
vertical first-difference operators (anisotropic TV).
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import cho_factor, cho_solve

from .basis import BasisKind, BasisMatrix, get_basis
from .blocks import Coefficients, ForegroundMask, as_vector
from .errors import NumericalDivergenceError, ParameterError
from .regression import inlier_mask


@dataclass(frozen=True)
class DifferenceOperator:
    """First-difference operators over a column-major vectorized block."""

    n: int
    dx: sp.csr_matrix  # horizontal: S[i, j+1] - S[i, j], n*(n-1) rows
    dy: sp.csr_matrix  # vertical:   S[i+1, j] - S[i, j], (n-1)*n rows
    stacked: sp.csr_matrix  # D = [dx; dy]


def difference_operator(n):
    if n < 2:
        raise ParameterError(f"block side must be >= 2, got {n}")
    e = sp.diags([-np.ones(n - 1), np.ones(n - 1)], [0, 1], shape=(n - 1, n))
    eye = sp.identity(n)
    # Column-major vectorization: horizontal neighbors differ across
    # columns, vertical neighbors within a column.
    dx = sp.kron(e, eye, format="csr")
    dy = sp.kron(eye, e, format="csr")
    return DifferenceOperator(n=n, dx=dx, dy=dy,
                              stacked=sp.vstack([dx, dy], format="csr"))


def total_variation(s, D):
    """Anisotropic TV of the vectorized block s."""
    return float(np.abs(D.stacked @ np.asarray(s, dtype=float)).sum())


def soft_threshold(x, lam):
    """Elementwise shrinkage sign(x) * max(|x| - lam, 0)."""
    if lam < 0:
        raise ParameterError(f"threshold must be >= 0, got {lam}")
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.maximum(np.abs(x) - lam, 0.0)


@dataclass(frozen=True)
class SdResult:
    coefficients: Coefficients
    s: np.ndarray  # sparse component, f - P @ alpha
    mask: ForegroundMask
    objective_trace: np.ndarray  # objective value per iteration

    @property
    def alpha(self):
        return self.coefficients.alpha


# One Cholesky factorization of A per (n, k, kind, rho); A does not change
# across iterations or blocks.
_FACTOR_CACHE = {}


def _system(P, D, rho):
    rho1, rho2, rho3 = rho
    DP = np.asarray(D.stacked @ P.columns)
    key = None
    if isinstance(P, BasisMatrix):
        key = (P.n, P.k, P.kind, rho)
        hit = _FACTOR_CACHE.get(key)
        if hit is not None:
            return hit
    A = (rho3 * DP.T @ DP + rho2 * P.columns.T @ P.columns
         + rho1 * np.eye(P.k))
    factor = cho_factor(A)
    out = (factor, DP)
    if key is not None:
        _FACTOR_CACHE[key] = out
    return out


def admm_solve(f, P, D, lam1=10.0, lam2=4.0, rho=(1.0, 1.0, 1.0),
               k_max=50, eps_in=10.0):
    """Run the fixed-iteration ADMM updates and extract the decomposition.

    All primal and dual variables start at zero. The returned sparse
    component is s = f - P @ alpha, so f = P @ alpha + s holds exactly;
    the mask marks |s| >= eps_in as foreground.
    """
    if lam1 <= 0 or lam2 <= 0:
        raise ParameterError("lam1 and lam2 must be positive")
    if any(r <= 0 for r in rho):
        raise ParameterError("rho components must be positive")
    if k_max < 1:
        raise ParameterError(f"k_max must be >= 1, got {k_max}")

    vec = as_vector(f)
    cols = P.columns
    if vec.size != cols.shape[0]:
        raise ParameterError("block and basis dimensions do not match")
    rho1, rho2, rho3 = rho
    factor, DP = _system(P, D, tuple(float(r) for r in rho))
    Ds = D.stacked
    Df = Ds @ vec

    k = cols.shape[1]
    alpha = np.zeros(k)
    y = np.zeros(k)
    z = np.zeros(vec.size)
    x = np.zeros(Df.size)
    u1 = np.zeros(k)
    u2 = np.zeros(vec.size)
    u3 = np.zeros(Df.size)

    trace = np.empty(k_max)
    for it in range(k_max):
        rhs = (u1 - cols.T @ u2 - DP.T @ u3 + rho1 * y
               + rho2 * (cols.T @ (vec - z)) + rho3 * (DP.T @ (Df - x)))
        alpha = cho_solve(factor, rhs)
        Pa = cols @ alpha
        DPa = DP @ alpha
        y = soft_threshold(alpha - u1 / rho1, 1.0 / rho1)
        z = soft_threshold(vec - Pa - u2 / rho2, lam1 / rho2)
        x = soft_threshold(Df - DPa - u3 / rho3, lam2 / rho3)
        u1 = u1 + rho1 * (y - alpha)
        u2 = u2 + rho2 * (z + Pa - vec)
        u3 = u3 + rho3 * (x + DPa - Df)
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(u3))):
            raise NumericalDivergenceError(it + 1)
        trace[it] = (np.abs(alpha).sum() + lam1 * np.abs(vec - Pa).sum()
                     + lam2 * np.abs(Df - DPa).sum())

    s = vec - cols @ alpha
    return SdResult(
        coefficients=Coefficients(alpha),
        s=s,
        mask=inlier_mask(s, eps_in),
        objective_trace=trace,
    )


def sd_segment(f, P, cfg):
    """Sparse-decomposition segmentation with pipeline configuration."""
    vec = as_vector(f)
    n = int(round(np.sqrt(vec.size)))
    D = difference_operator(n)
    return admm_solve(vec, P, D, lam1=cfg.lam1, lam2=cfg.lam2, rho=cfg.rho,
                      k_max=cfg.k_max_admm, eps_in=cfg.eps_in)
