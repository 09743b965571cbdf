"""RANSAC segmentation of a single block.

Repeatedly fits the smooth model through K randomly sampled pixels, keeps
the model with the largest consensus (inlier) set, optionally stops early
once the inlier ratio passes stop_ratio, and refines the winner by one
least-squares refit over its inliers.
"""

from dataclasses import dataclass

import numpy as np

from .blocks import Coefficients, ForegroundMask, as_vector
from .errors import DegenerateInputError, ParameterError
from .regression import _check_dims, _columns, inlier_mask

_COND_LIMIT = 1e12  # sampled K x K systems above this are redrawn


@dataclass(frozen=True)
class RansacResult:
    mask: ForegroundMask
    coefficients: Coefficients
    inlier_ratio: float
    iterations_used: int
    early_stopped: bool

    @property
    def alpha(self):
        return self.coefficients.alpha


def ransac_segment(f, P, eps_in=10.0, m_iter=200, stop_ratio=0.95, seed=0):
    """Segment one block by robust regression.

    seed may be an int or a sequence of ints; identical inputs give an
    identical result.
    """
    if m_iter < 1:
        raise ParameterError(f"m_iter must be >= 1, got {m_iter}")
    if not 0 < stop_ratio <= 1:
        raise ParameterError(f"stop_ratio must be in (0, 1], got {stop_ratio}")
    if eps_in <= 0:
        raise ParameterError(f"eps_in must be positive, got {eps_in}")

    vec = as_vector(f)
    cols, _ = _columns(P)
    _check_dims(vec, cols)
    n2, k = cols.shape
    if k > n2:
        raise ParameterError("basis count exceeds pixel count")

    rng = np.random.default_rng(seed)
    best_count = -1
    best_alpha = None
    iterations = 0
    early = False
    for _ in range(m_iter):
        iterations += 1
        idx = rng.choice(n2, size=k, replace=False)
        A = cols[idx]
        if np.linalg.cond(A) > _COND_LIMIT:
            continue  # degenerate sample, redraw
        alpha = np.linalg.solve(A, vec[idx])
        count = int(np.count_nonzero(np.abs(vec - cols @ alpha) < eps_in))
        if count > best_count:  # ties keep the earlier iteration
            best_count = count
            best_alpha = alpha
        if best_count / n2 > stop_ratio:
            early = True
            break

    if best_alpha is None:
        raise DegenerateInputError(
            f"all {m_iter} sampled systems were singular"
        )

    # Refine by refitting over the winning inliers once.
    inliers = np.abs(vec - cols @ best_alpha) < eps_in
    if inliers.sum() >= k:
        refined, *_ = np.linalg.lstsq(cols[inliers], vec[inliers], rcond=None)
        best_alpha = refined
    mask = inlier_mask(vec - cols @ best_alpha, eps_in)
    return RansacResult(
        mask=mask,
        coefficients=Coefficients(best_alpha),
        inlier_ratio=mask.background_count / n2,
        iterations_used=iterations,
        early_stopped=early,
    )
