"""Smooth 2D basis functions used to model block backgrounds.

Two families are provided: the 2D DCT-II basis and 2D orthonormal
polynomials (outer products of Gram-Schmidt-orthonormalized 1D power
bases). Basis functions are enumerated in zigzag order over the frequency
(or degree) plane and stored as columns of an N^2 x K matrix, vectorized
column-major like the blocks they model.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .blocks import as_vector
from .errors import ParameterError


class BasisKind(str, Enum):
    DCT = "dct"
    ORTHO_POLY = "poly"


@dataclass(frozen=True)
class BasisMatrix:
    """Orthonormal basis for smooth N x N blocks.

    Column j holds the column-major vectorization of the j-th 2D basis
    function; ``order[j]`` is its (u, v) frequency (or degree) index pair.
    """

    n: int
    k: int
    columns: np.ndarray  # N^2 x K
    kind: BasisKind
    order: tuple  # K pairs (u, v)

    def __post_init__(self):
        if self.columns.shape != (self.n * self.n, self.k):
            raise ParameterError(
                f"columns must be {self.n * self.n}x{self.k}, "
                f"got {self.columns.shape}"
            )
        self.columns.setflags(write=False)


def _check_nk(n, k):
    if n < 1:
        raise ParameterError(f"block side must be >= 1, got {n}")
    if not 1 <= k <= n * n:
        raise ParameterError(f"basis count must be in [1, {n * n}], got {k}")


def zigzag_order(n):
    """Enumerate all (u, v) pairs of {0..n-1}^2 in JPEG zigzag order.

    Anti-diagonals of constant u+v are traversed in alternating direction,
    starting (0,0), (0,1), (1,0), (2,0), (1,1), (0,2), ...
    """
    if n < 1:
        raise ParameterError(f"block side must be >= 1, got {n}")
    pairs = []
    for d in range(2 * n - 1):
        lo = max(0, d - n + 1)
        hi = min(d, n - 1)
        us = range(hi, lo - 1, -1) if d % 2 == 0 else range(lo, hi + 1)
        pairs.extend((u, d - u) for u in us)
    return pairs


def _dct_1d_rows(n):
    """Rows m=0..n-1 of the orthonormal 1D DCT-II: C[m, x]."""
    x = np.arange(n)
    m = np.arange(n)[:, None]
    beta = np.full(n, np.sqrt(2.0 / n))
    beta[0] = np.sqrt(1.0 / n)
    return beta[:, None] * np.cos((2 * x + 1) * np.pi * m / (2.0 * n))


def _ortho_poly_1d_rows(n, max_degree):
    """Rows m=0..max_degree of orthonormal polynomials on x = 1..n.

    Modified Gram-Schmidt on the monomials x^m, with a second
    re-orthogonalization pass to control drift at large n.
    """
    x = np.arange(1, n + 1, dtype=float)
    Q = np.vander(x, N=max_degree + 1, increasing=True).astype(float)
    for _ in range(2):  # re-orthogonalization pass
        for j in range(Q.shape[1]):
            for i in range(j):
                Q[:, j] -= (Q[:, i] @ Q[:, j]) * Q[:, i]
            Q[:, j] /= np.linalg.norm(Q[:, j])
    return Q.T


def _build(n, k, kind):
    order = tuple(zigzag_order(n)[:k])
    if kind == BasisKind.DCT:
        rows = _dct_1d_rows(n)
    else:
        max_deg = max(max(u, v) for u, v in order)
        rows = _ortho_poly_1d_rows(n, max_deg)
    cols = np.empty((n * n, k))
    for j, (u, v) in enumerate(order):
        # B[x, y] = rows[u, x] * rows[v, y], stacked column-major
        cols[:, j] = np.outer(rows[u], rows[v]).flatten(order="F")
    return BasisMatrix(n=n, k=k, columns=cols, kind=kind, order=order)


@lru_cache(maxsize=64)
def _cached(n, k, kind):
    return _build(n, k, kind)


def dct_basis(n, k):
    """First k 2D DCT basis functions of an n x n block, zigzag order."""
    _check_nk(n, k)
    return _cached(n, k, BasisKind.DCT)


def ortho_poly_basis(n, k):
    """First k 2D orthonormal-polynomial basis functions, zigzag order
    applied to the (degree_u, degree_v) pairs."""
    _check_nk(n, k)
    return _cached(n, k, BasisKind.ORTHO_POLY)


def get_basis(n, k, kind=BasisKind.DCT):
    kind = BasisKind(kind)
    if kind == BasisKind.DCT:
        return dct_basis(n, k)
    return ortho_poly_basis(n, k)


def basis_rmse_study(blocks, k_max, kinds=(BasisKind.DCT, BasisKind.ORTHO_POLY)):
    """Average least-squares reconstruction RMSE vs. basis count.

    For each k in 1..k_max and each basis kind, every block is fitted by
    least squares with the first k bases and the root-mean-squared
    reconstruction error, averaged over blocks, is reported.

    Returns a dict {(k, kind): rmse}.
    """
    vecs = [as_vector(b) for b in blocks]
    if not vecs:
        raise ParameterError("block set must not be empty")
    n2 = vecs[0].size
    n = int(round(np.sqrt(n2)))
    if n * n != n2 or any(v.size != n2 for v in vecs):
        raise ParameterError("all blocks must be square with the same side")
    if k_max > n2:
        raise ParameterError(f"k_max must be <= {n2}, got {k_max}")

    out = {}
    for kind in kinds:
        kind = BasisKind(kind)
        P = get_basis(n, k_max, kind)
        # Orthonormal columns: the squared residual after k bases is
        # ||f||^2 minus the cumulative energy of the first k coefficients.
        mse = np.zeros(k_max)
        for v in vecs:
            c = P.columns.T @ v
            res2 = (v @ v) - np.cumsum(c * c)
            mse += np.maximum(res2, 0.0) / n2
        rmse = np.sqrt(mse / len(vecs))
        for k in range(1, k_max + 1):
            out[(k, kind)] = float(rmse[k - 1])
    return out
