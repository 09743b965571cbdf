"""Synthetic block generators shared across the test suite."""

import numpy as np

from scseg import dct_basis


def smooth_dct_blocks(n, count, rng, n_modes=40, k_dc=(4000, 12000)):
    """Smooth backgrounds synthesized from low-frequency DCT modes with
    decaying random coefficients (more modes than any fitted k)."""
    P = dct_basis(n, n_modes)
    blocks = []
    for _ in range(count):
        coef = np.zeros(n_modes)
        coef[0] = rng.uniform(*k_dc)
        for j, (u, v) in enumerate(P.order[1:], start=1):
            coef[j] = rng.normal(0.0, 300.0 / (1 + u + v) ** 2)
        blocks.append(np.clip(P.columns @ coef, 0.0, 255.0))
    return blocks


def ramp_text_block(n, rng, n_fg, lo=50.0, hi=150.0, fg_value=255.0):
    """Linear ramp background with n_fg pixels overwritten to fg_value.

    Returns (vector, truth_bits), both column-major.
    """
    img = np.tile(np.linspace(lo, hi, n), (n, 1))
    f = img.flatten(order="F")
    idx = rng.choice(n * n, size=n_fg, replace=False)
    f[idx] = fg_value
    truth = np.zeros(n * n, dtype=bool)
    truth[idx] = True
    return f, truth


def constant_blob_block(n, rng, contrast_lo=100.0, max_frac=0.15):
    """Constant background plus one rectangular high-contrast blob.

    Returns (vector, truth_bits).
    """
    bg = float(rng.integers(30, 150))
    img = np.full((n, n), bg)
    while True:
        bh, bw = rng.integers(2, 7, 2)
        if bh * bw <= max_frac * n * n:
            break
    r0 = rng.integers(0, n - bh)
    c0 = rng.integers(0, n - bw)
    img[r0:r0 + bh, c0:c0 + bw] = bg + contrast_lo + rng.uniform(0, 50)
    truth = (img != bg).flatten(order="F")
    return img.flatten(order="F"), truth


def text_lines_block(n, rng):
    """Constant background with thick horizontal text-like strokes.

    Returns (vector, truth_bits).
    """
    bg = float(rng.integers(60, 140))
    img = np.full((n, n), bg)
    for r0 in range(1, n - 1, 4):
        c0 = rng.integers(0, 4)
        c1 = rng.integers(n - 4, n)
        img[r0:r0 + 2, c0:c1] = 255.0
    truth = (img == 255.0).flatten(order="F")
    return img.flatten(order="F"), truth


def four_quadrant_block(rng, side=64, k=10, n_fg_per_quadrant=40):
    """64x64 block of four distinct smooth 32x32 gradients meeting at the
    center, each carrying displaced text pixels.

    Quadrant backgrounds are exactly representable by the first k DCT
    bases at the quadrant size; text pixels are displaced by 120 levels.
    Returns (image, truth) as 2D arrays.
    """
    h = side // 2
    P = dct_basis(h, k)
    img = np.empty((side, side))
    truth = np.zeros((side, side), dtype=bool)
    offsets = [40.0, 220.0, 120.0, 180.0]
    for qi, (r0, c0) in enumerate([(0, 0), (0, h), (h, 0), (h, h)]):
        coef = np.zeros(k)
        coef[0] = offsets[qi] * h
        coef[1:] = rng.normal(0.0, 60.0, k - 1)
        quad = (P.columns @ coef).reshape((h, h), order="F")
        img[r0:r0 + h, c0:c0 + h] = quad
        idx = rng.choice(h * h, n_fg_per_quadrant, replace=False)
        rr, cc = idx % h, idx // h
        for a, b in zip(rr, cc):
            delta = 120.0 if quad[a, b] < 130.0 else -120.0
            img[r0 + a, c0 + b] = quad[a, b] + delta
            truth[r0 + a, c0 + b] = True
    return np.clip(img, 0.0, 255.0), truth
