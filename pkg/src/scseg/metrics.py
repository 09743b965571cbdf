"""Precision / recall / F1 evaluation against annotated ground-truth masks.

Dataset layout: a directory of pairs `<id>.img.png` (8-bit gray or RGB)
and `<id>.gt.png` (single channel, 0 = background, 255 = foreground).
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .blocks import ForegroundMask
from .errors import DatasetError, ParameterError
from .pipeline import segment_image


def _bits(mask):
    if isinstance(mask, ForegroundMask):
        return mask.bits
    return np.asarray(mask, dtype=bool).ravel()


def confusion_counts(pred, gt):
    """(tp, fp, fn, tn) pixel counts; foreground is the positive class."""
    p = _bits(pred)
    g = _bits(gt)
    if p.shape != g.shape:
        raise ParameterError(
            f"mask sizes differ: {p.shape} vs {g.shape}"
        )
    tp = int(np.count_nonzero(p & g))
    fp = int(np.count_nonzero(p & ~g))
    fn = int(np.count_nonzero(~p & g))
    tn = int(np.count_nonzero(~p & ~g))
    return tp, fp, fn, tn


def _rates(tp, fp, fn):
    # Empty-denominator convention: with no predicted positives, precision
    # is 1 when there are also no actual positives, else 0 (and
    # symmetrically for recall).
    if tp + fp == 0:
        precision = 1.0 if tp + fn == 0 else 0.0
    else:
        precision = tp / (tp + fp)
    if tp + fn == 0:
        recall = 1.0 if tp + fp == 0 else 0.0
    else:
        recall = tp / (tp + fn)
    return precision, recall


def precision_recall(pred, gt):
    """Precision and recall of a predicted mask vs ground truth."""
    tp, fp, fn, _ = confusion_counts(pred, gt)
    return _rates(tp, fp, fn)


def f1(precision, recall):
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if not (0 <= precision <= 1 and 0 <= recall <= 1):
        raise ParameterError("precision and recall must lie in [0, 1]")
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float  # micro-averaged
    recall: float
    f1: float
    per_image: tuple  # (id, precision, recall, f1) rows

    @property
    def macro_f1(self):
        if not self.per_image:
            return 0.0
        return float(np.mean([row[3] for row in self.per_image]))

    def summary(self):
        return (
            f"items={len(self.per_image)} precision={self.precision:.4f} "
            f"recall={self.recall:.4f} f1={self.f1:.4f} "
            f"macro_f1={self.macro_f1:.4f}"
        )


def load_dataset_pairs(dataset_dir):
    """Yield (id, image array, ground-truth bool array) for every item."""
    root = Path(dataset_dir)
    if not root.is_dir():
        raise DatasetError(f"not a directory: {root}")
    img_paths = sorted(root.glob("*.img.png"))
    if not img_paths:
        raise DatasetError(f"no *.img.png files in {root}")
    for img_path in img_paths:
        item = img_path.name[: -len(".img.png")]
        gt_path = root / f"{item}.gt.png"
        if not gt_path.exists():
            raise DatasetError(f"missing ground truth for item '{item}'")
        img = np.asarray(Image.open(img_path))
        gt = np.asarray(Image.open(gt_path).convert("L")) > 127
        if img.shape[:2] != gt.shape:
            raise DatasetError(
                f"size mismatch for item '{item}': "
                f"{img.shape[:2]} vs {gt.shape}"
            )
        yield item, img, gt


def evaluate_dataset(dataset_dir, cfg, workers=1):
    """Segment every dataset item and report micro and per-image scores."""
    agg = np.zeros(4, dtype=np.int64)
    per_image = []
    for item, img, gt in load_dataset_pairs(dataset_dir):
        pred = segment_image(img, cfg, workers=workers)
        tp, fp, fn, tn = confusion_counts(pred.ravel(), gt.ravel())
        agg += (tp, fp, fn, tn)
        p, r = _rates(tp, fp, fn)
        per_image.append((item, p, r, f1(p, r)))
    tp, fp, fn, tn = (int(v) for v in agg)
    p, r = _rates(tp, fp, fn)
    return EvalReport(tp=tp, fp=fp, fn=fn, tn=tn, precision=p, recall=r,
                      f1=f1(p, r), per_image=tuple(per_image))


def write_report_csv(report, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "precision", "recall", "f1"])
        for item, p, r, score in report.per_image:
            w.writerow([item, f"{p:.6f}", f"{r:.6f}", f"{score:.6f}"])
        w.writerow(["__micro__", f"{report.precision:.6f}",
                    f"{report.recall:.6f}", f"{report.f1:.6f}"])
