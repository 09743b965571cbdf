"""Fitting the smooth model to a block: least squares and least absolute
deviation, plus residual and inlier-mask helpers."""

from dataclasses import dataclass

import numpy as np

from .basis import BasisMatrix
from .blocks import Coefficients, ForegroundMask, as_vector
from .errors import ParameterError


def _columns(P):
    if isinstance(P, BasisMatrix):
        return P.columns, True
    a = np.asarray(P, dtype=float)
    if a.ndim != 2:
        raise ParameterError("basis must be a 2D matrix")
    return a, False


def _check_dims(vec, cols):
    if vec.size != cols.shape[0]:
        raise ParameterError(
            f"block length {vec.size} does not match basis rows {cols.shape[0]}"
        )


def least_squares_fit(f, P):
    """l2-minimizing coefficients of f over the columns of P.

    For an orthonormal BasisMatrix this is just P^T f; a general matrix is
    handled by a rank-revealing least-squares solve.
    """
    vec = as_vector(f)
    cols, orthonormal = _columns(P)
    _check_dims(vec, cols)
    if orthonormal:
        alpha = cols.T @ vec
    else:
        alpha, *_ = np.linalg.lstsq(cols, vec, rcond=None)
    return Coefficients(alpha)


@dataclass(frozen=True)
class LadResult:
    """Outcome of an IRLS least-absolute-deviation fit."""

    coefficients: Coefficients
    converged: bool
    iterations: int

    @property
    def alpha(self):
        return self.coefficients.alpha


def lad_fit(f, P, max_iter=50, tol=1e-6):
    """l1-minimizing coefficients via iteratively reweighted least squares.

    Weights are 1 / max(|r_i|, delta) with delta = 1e-6; iteration stops
    when the coefficient change drops below tol or max_iter is reached
    (the best iterate is returned with converged=False in that case).
    """
    delta = 1e-6
    vec = as_vector(f)
    cols, _ = _columns(P)
    _check_dims(vec, cols)

    alpha = least_squares_fit(vec, cols).alpha
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        r = vec - cols @ alpha
        w = 1.0 / np.maximum(np.abs(r), delta)
        sw = np.sqrt(w)
        new_alpha, *_ = np.linalg.lstsq(sw[:, None] * cols, sw * vec, rcond=None)
        change = np.max(np.abs(new_alpha - alpha))
        alpha = new_alpha
        if change < tol:
            converged = True
            break
    return LadResult(Coefficients(alpha), converged, it)


def residuals(f, P, a):
    """Elementwise fitting error f - P @ alpha."""
    vec = as_vector(f)
    cols, _ = _columns(P)
    _check_dims(vec, cols)
    alpha = a.alpha if isinstance(a, Coefficients) else np.asarray(a, dtype=float)
    if alpha.size != cols.shape[1]:
        raise ParameterError(
            f"coefficient length {alpha.size} does not match basis count "
            f"{cols.shape[1]}"
        )
    return vec - cols @ alpha


def inlier_mask(r, eps_in):
    """Classify residuals: |r| < eps_in is background (inlier), the rest
    foreground. Ties |r| == eps_in are foreground."""
    if eps_in <= 0:
        raise ParameterError(f"eps_in must be positive, got {eps_in}")
    rv = np.asarray(r, dtype=float)
    n = int(round(np.sqrt(rv.size)))
    if n * n != rv.size:
        raise ParameterError(f"residual length {rv.size} is not a square")
    return ForegroundMask(n=n, bits=np.abs(rv) >= eps_in)
