"""Core data containers for image blocks, model coefficients and masks.

Blocks are stored as 1D vectors obtained by stacking the columns of the
N x N plane (column-major / Fortran order). All intensities are floats in
[0, 255].
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParameterError


class Plane(str, Enum):
    LUMA = "luma"
    CHROMA_B = "cb"
    CHROMA_R = "cr"


def vectorize(plane):
    """Stack the columns of a 2D array into a 1D vector."""
    a = np.asarray(plane, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError(f"expected a square 2D block, got shape {a.shape}")
    return a.flatten(order="F")


def unvectorize(vec, n):
    """Inverse of :func:`vectorize`: rebuild the n x n plane."""
    v = np.asarray(vec, dtype=float)
    if v.size != n * n:
        raise ParameterError(f"vector of length {v.size} is not {n}x{n}")
    return v.reshape((n, n), order="F")


@dataclass(frozen=True)
class PixelBlock:
    """One N x N block of a single image plane."""

    n: int
    values: np.ndarray  # length n*n, column-major
    plane: Plane = Plane.LUMA

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.n * self.n,):
            raise ParameterError(
                f"values must have length {self.n * self.n}, got {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ParameterError("block values must be finite")
        if v.min() < 0 or v.max() > 255:
            raise ParameterError("block values must lie in [0, 255]")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_array(cls, plane_2d, plane=Plane.LUMA):
        a = np.asarray(plane_2d, dtype=float)
        return cls(n=a.shape[0], values=vectorize(a), plane=plane)

    def to_array(self):
        return unvectorize(self.values, self.n)


@dataclass(frozen=True)
class Coefficients:
    """Weights of the smooth model, one per basis function."""

    alpha: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=float)
        if a.ndim != 1:
            raise ParameterError("alpha must be a 1D vector")
        if not np.all(np.isfinite(a)):
            raise ParameterError("alpha must be finite")
        object.__setattr__(self, "alpha", a)

    def __len__(self):
        return self.alpha.size


@dataclass(frozen=True)
class ForegroundMask:
    """Boolean map over a block; True marks foreground (outlier) pixels."""

    n: int
    bits: np.ndarray  # length n*n, column-major, bool

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=bool)
        if b.shape != (self.n * self.n,):
            raise ParameterError(
                f"bits must have length {self.n * self.n}, got {b.shape}"
            )
        object.__setattr__(self, "bits", b)

    @classmethod
    def empty(cls, n):
        return cls(n=n, bits=np.zeros(n * n, dtype=bool))

    @classmethod
    def from_array(cls, mask_2d):
        a = np.asarray(mask_2d, dtype=bool)
        return cls(n=a.shape[0], bits=a.flatten(order="F"))

    def to_array(self):
        return self.bits.reshape((self.n, self.n), order="F")

    @property
    def foreground_count(self):
        return int(self.bits.sum())

    @property
    def background_count(self):
        return int((~self.bits).sum())


def as_vector(f):
    """Accept a PixelBlock or a raw vector/2D array and return the 1D vector."""
    if isinstance(f, PixelBlock):
        return f.values
    a = np.asarray(f, dtype=float)
    if a.ndim == 2:
        return vectorize(a)
    return a
