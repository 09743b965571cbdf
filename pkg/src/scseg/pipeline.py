"""Overall multi-mode segmentation: cheap classifiers, RANSAC/SD dispatch,
chrominance verification and quadtree recursion from 64x64 down to 8x8."""

import concurrent.futures
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from .basis import BasisKind, get_basis
from .blocks import ForegroundMask, as_vector, unvectorize, vectorize
from .errors import InputError, ParameterError
from .ransac import ransac_segment
from .regression import inlier_mask, lad_fit, least_squares_fit, residuals
from .sparse import sd_segment


class Method(str, Enum):
    RANSAC = "ransac"
    SD = "sd"
    LAD = "lad"
    LSF = "lsf"


class Mode(str, Enum):
    PURE_BACKGROUND = "pure_background"
    SMOOTH_BACKGROUND = "smooth_background"
    TEXT_ON_CONSTANT = "text_on_constant"
    ROBUST = "robust"
    SPLIT = "split"


@dataclass(frozen=True)
class SegmentationConfig:
    """All tunables of the segmentation pipeline in one validated record."""

    n_max: int = 64
    n_min: int = 8
    eps_in: float = 10.0  # inlier distortion threshold
    eps1: float = 3.0     # pure-background std-dev threshold
    eps2: float = 0.5     # quadtree inlier-ratio threshold
    t1: int = 10          # max color count for text-on-constant
    r_min: float = 50.0   # min intensity range for text-on-constant
    k: int = 10           # number of basis functions
    lam1: float = 10.0
    lam2: float = 4.0
    rho: tuple = (1.0, 1.0, 1.0)
    k_max_admm: int = 50
    m_iter: int = 200
    stop_ratio: float = 0.95
    method: Method = Method.RANSAC
    basis_kind: BasisKind = BasisKind.DCT
    seed: int = 0

    def __post_init__(self):
        if self.n_min < 2:
            raise ParameterError(f"n_min must be >= 2, got {self.n_min}")
        ratio = self.n_max / self.n_min
        if self.n_max < self.n_min or ratio != int(ratio) or \
                int(ratio) & (int(ratio) - 1):
            raise ParameterError(
                f"n_max ({self.n_max}) must be a power-of-two multiple "
                f"of n_min ({self.n_min})"
            )
        if not 0 < self.eps2 <= 1:
            raise ParameterError(f"eps2 must be in (0, 1], got {self.eps2}")
        for name in ("eps_in", "eps1", "r_min", "lam1", "lam2"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be positive")
        if self.t1 < 1 or self.k < 1 or self.m_iter < 1 or self.k_max_admm < 1:
            raise ParameterError("t1, k, m_iter and k_max_admm must be >= 1")
        if not 0 < self.stop_ratio <= 1:
            raise ParameterError(
                f"stop_ratio must be in (0, 1], got {self.stop_ratio}"
            )
        if len(self.rho) != 3 or any(r <= 0 for r in self.rho):
            raise ParameterError("rho must be three positive values")
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "basis_kind", BasisKind(self.basis_kind))
        object.__setattr__(self, "rho", tuple(float(r) for r in self.rho))


@dataclass(frozen=True)
class BlockDecision:
    """Per-block outcome; a Split node carries its four children in the
    order top-left, bottom-left, top-right, bottom-right (column-major)."""

    mode: Mode
    mask: ForegroundMask
    inlier_ratio: float
    children: Optional[tuple] = None

    def __post_init__(self):
        if (self.mode == Mode.SPLIT) != (self.children is not None):
            raise ParameterError("children present exactly when mode=split")

    def leaves(self):
        if self.children is None:
            yield self
        else:
            for c in self.children:
                yield from c.leaves()


def rgb_to_ycbcr(rgb):
    """Full-range BT.601 conversion; rgb is HxWx3 float or uint8."""
    a = np.asarray(rgb, dtype=float)
    r, g, b = a[..., 0], a[..., 1], a[..., 2]
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b
    cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b
    return y, np.clip(cb, 0, 255), np.clip(cr, 0, 255)


def is_pure_background(f, eps1=3.0):
    """True iff the population standard deviation of the block is < eps1."""
    return float(np.std(as_vector(f))) < eps1


def is_smooth_background(f, P, eps_in=10.0):
    """True iff a least-squares fit predicts every pixel with error < eps_in."""
    vec = as_vector(f)
    r = residuals(vec, P, least_squares_fit(vec, P))
    return float(np.max(np.abs(r))) < eps_in


def classify_text_on_constant(f, t1=10, r_min=50.0):
    """Detect text/graphics over a constant background.

    Rounds intensities to integers; if fewer than t1 distinct values span
    a range above r_min, the modal value is background and everything
    else foreground. Returns None when the rule does not apply.
    """
    vec = np.rint(as_vector(f))
    values, counts = np.unique(vec, return_counts=True)
    if len(values) >= t1 or values[-1] - values[0] <= r_min:
        return None
    modal = values[np.argmax(counts)]
    n = int(round(np.sqrt(vec.size)))
    return ForegroundMask(n=n, bits=vec != modal)


def verify_chrominance(planes, mask, P, eps_in=10.0):
    """Move background pixels whose chroma cannot be fitted to foreground.

    planes is the (luma, cb, cr) triple; only the two chroma planes are
    fitted, on the current background pixels, and any background pixel
    with chroma residual >= eps_in in either plane becomes foreground.
    Foreground pixels never revert. Planes with fewer background pixels
    than basis functions are skipped.
    """
    _, cb, cr = planes
    bits = mask.bits.copy()
    bg = ~bits
    cols = P.columns
    if bg.sum() < cols.shape[1]:
        return ForegroundMask(n=mask.n, bits=bits)
    for plane in (cb, cr):
        if plane is None:
            continue
        vec = as_vector(plane)
        alpha, *_ = np.linalg.lstsq(cols[bg], vec[bg], rcond=None)
        bad = np.abs(vec[bg] - cols[bg] @ alpha) >= eps_in
        idx = np.flatnonzero(bg)[bad]
        bits[idx] = True
        bg = ~bits
        if bg.sum() < cols.shape[1]:
            break
    return ForegroundMask(n=mask.n, bits=bits)


def _block_seed(seed, x0, y0, side):
    # Per-block seeds derive from absolute coordinates so image-level
    # parallelism cannot change results.
    return [int(seed) & 0xFFFFFFFF, x0, y0, side]


def _robust_mask(y, P, cfg, x0, y0):
    vec = vectorize(y)
    if cfg.method == Method.RANSAC:
        res = ransac_segment(vec, P, eps_in=cfg.eps_in, m_iter=cfg.m_iter,
                             stop_ratio=cfg.stop_ratio,
                             seed=_block_seed(cfg.seed, x0, y0, y.shape[0]))
        return res.mask
    if cfg.method == Method.SD:
        return sd_segment(vec, P, cfg).mask
    if cfg.method == Method.LAD:
        alpha = lad_fit(vec, P).coefficients
    else:  # LSF
        alpha = least_squares_fit(vec, P)
    return inlier_mask(residuals(vec, P, alpha), cfg.eps_in)


def segment_block(planes, cfg, x0=0, y0=0):
    """Run the five-step algorithm on one block.

    planes is (luma, cb, cr); cb and cr may be None for grayscale input.
    (x0, y0) locate the block inside the image for seed derivation.
    """
    y = np.asarray(planes[0], dtype=float)
    n = y.shape[0]
    if y.shape != (n, n):
        raise ParameterError(f"block must be square, got {y.shape}")

    # Step 1: pure background.
    if is_pure_background(y, cfg.eps1):
        return BlockDecision(Mode.PURE_BACKGROUND, ForegroundMask.empty(n), 1.0)

    P = get_basis(n, cfg.k, cfg.basis_kind)

    # Step 2: smoothly varying background.
    if is_smooth_background(y, P, cfg.eps_in):
        return BlockDecision(Mode.SMOOTH_BACKGROUND, ForegroundMask.empty(n), 1.0)

    # Step 3: text/graphics over constant background.
    mask = classify_text_on_constant(y, cfg.t1, cfg.r_min)
    if mask is not None:
        ratio = mask.background_count / (n * n)
        return BlockDecision(Mode.TEXT_ON_CONSTANT, mask, ratio)

    # Step 4: robust segmentation on luma + chrominance verification.
    mask = _robust_mask(y, P, cfg, x0, y0)
    if planes[1] is not None and planes[2] is not None:
        mask = verify_chrominance(planes, mask, P, cfg.eps_in)
    ratio = mask.background_count / (n * n)
    if ratio > cfg.eps2 or n == cfg.n_min:
        return BlockDecision(Mode.ROBUST, mask, ratio)

    # Step 5: quadtree split, column-major child order.
    h = n // 2
    children = []
    stitched = np.empty((n, n), dtype=bool)
    for dx in (0, h):
        for dy in (0, h):
            sub = tuple(
                None if p is None else np.asarray(p, dtype=float)[dy:dy + h, dx:dx + h]
                for p in planes
            )
            child = segment_block(sub, cfg, x0 + dx, y0 + dy)
            children.append(child)
            stitched[dy:dy + h, dx:dx + h] = child.mask.to_array()
    return BlockDecision(Mode.SPLIT, ForegroundMask.from_array(stitched),
                         ratio, tuple(children))


def _split_planes(img):
    a = np.asarray(img)
    if a.dtype != np.uint8:
        raise InputError(f"only 8-bit images are supported, got dtype {a.dtype}")
    if a.ndim == 2:
        return a.astype(float), None, None
    if a.ndim == 3 and a.shape[2] == 3:
        return rgb_to_ycbcr(a)
    raise InputError(f"unsupported image shape {a.shape}")


def segment_image(img, cfg, workers=1, return_decisions=False):
    """Tile the image into n_max blocks, segment each, stitch the masks.

    The image height and width must be multiples of cfg.n_max; otherwise
    an InputError asks the caller to pad (the CLI offers --pad). Output is
    a 2D boolean array, identical for any worker count.
    """
    y, cb, cr = _split_planes(img)
    hgt, wid = y.shape
    nb = cfg.n_max
    if hgt % nb or wid % nb:
        raise InputError(
            f"image size {wid}x{hgt} is not a multiple of {nb}; "
            "pad it to the next multiple (CLI: --pad)"
        )

    tiles = [(r, c) for c in range(0, wid, nb) for r in range(0, hgt, nb)]

    def run(tile):
        r, c = tile
        planes = tuple(
            None if p is None else p[r:r + nb, c:c + nb] for p in (y, cb, cr)
        )
        return segment_block(planes, cfg, x0=c, y0=r)

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as ex:
            decisions = list(ex.map(run, tiles))
    else:
        decisions = [run(t) for t in tiles]

    mask = np.empty((hgt, wid), dtype=bool)
    for (r, c), dec in zip(tiles, decisions):
        mask[r:r + nb, c:c + nb] = dec.mask.to_array()
    if return_decisions:
        return mask, dict(zip(tiles, decisions))
    return mask


def mode_statistics(decisions):
    """Leaf-mode counts and percentages over segment_image decisions."""
    counts = {m: 0 for m in Mode if m != Mode.SPLIT}
    for dec in decisions.values():
        for leaf in dec.leaves():
            counts[leaf.mode] += 1
    total = sum(counts.values())
    return {
        m.value: (c, 100.0 * c / total if total else 0.0)
        for m, c in counts.items()
    }


def reconstruct_background(f, mask, P):
    """Fill foreground holes with the smooth model fitted to background.

    Background pixels keep their original values; foreground positions get
    the model prediction clamped to [0, 255].
    """
    vec = as_vector(f)
    cols = P.columns
    bg = ~mask.bits
    if bg.sum() < cols.shape[1]:
        from .errors import DegenerateInputError
        raise DegenerateInputError(
            f"only {int(bg.sum())} background pixels for {cols.shape[1]} bases"
        )
    alpha, *_ = np.linalg.lstsq(cols[bg], vec[bg], rcond=None)
    out = vec.copy()
    fg = mask.bits
    out[fg] = np.clip(cols[fg] @ alpha, 0.0, 255.0)
    return out


def pad_to_multiple(img, multiple):
    """Edge-replicate so both dimensions become multiples of `multiple`."""
    a = np.asarray(img)
    hgt, wid = a.shape[:2]
    ph = (-hgt) % multiple
    pw = (-wid) % multiple
    if ph == 0 and pw == 0:
        return a
    pads = [(0, ph), (0, pw)] + [(0, 0)] * (a.ndim - 2)
    return np.pad(a, pads, mode="edge")
