"""Command-line frontend: segment, decompose, basis-rmse and eval."""

import argparse
import csv
import os
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from . import __version__
from .basis import BasisKind, basis_rmse_study, get_basis
from .blocks import vectorize, unvectorize
from .errors import ScsegError
from .metrics import evaluate_dataset, write_report_csv
from .pipeline import (
    Method,
    SegmentationConfig,
    mode_statistics,
    pad_to_multiple,
    segment_image,
    _split_planes,
)
from .ransac import ransac_segment
from .regression import lad_fit, least_squares_fit
from .sparse import difference_operator, admm_solve

_DEFAULTS = SegmentationConfig()

# SegmentationConfig fields exposed as flags: (name, type, help)
_CONFIG_FLAGS = [
    ("n-max", int, "maximum block side"),
    ("n-min", int, "minimum block side"),
    ("eps-in", float, "inlier distortion threshold"),
    ("eps1", float, "pure-background std-dev threshold"),
    ("eps2", float, "quadtree inlier-ratio threshold"),
    ("t1", int, "max color count for text-on-constant"),
    ("r-min", float, "min intensity range for text-on-constant"),
    ("k", int, "number of basis functions"),
    ("lam1", float, "sparsity weight (SD)"),
    ("lam2", float, "total-variation weight (SD)"),
    ("k-max-admm", int, "ADMM iteration count"),
    ("m-iter", int, "max RANSAC iterations"),
    ("stop-ratio", float, "RANSAC early-stop inlier ratio"),
    ("seed", int, "PRNG seed"),
]


def _add_config_flags(p):
    for flag, typ, help_text in _CONFIG_FLAGS:
        attr = flag.replace("-", "_")
        p.add_argument(
            f"--{flag}", type=typ, default=None, dest=attr,
            help=f"{help_text} (default: {getattr(_DEFAULTS, attr)})",
        )
    p.add_argument(
        "--rho", type=float, nargs=3, default=None, metavar=("R1", "R2", "R3"),
        help=f"ADMM penalty parameters (default: {_DEFAULTS.rho})",
    )
    p.add_argument(
        "--method", choices=[m.value for m in Method], default=None,
        help=f"core segmentation method (default: {_DEFAULTS.method.value})",
    )
    p.add_argument(
        "--basis-kind", choices=[k.value for k in BasisKind], default=None,
        help=f"basis family (default: {_DEFAULTS.basis_kind.value})",
    )
    p.add_argument(
        "--config", type=Path, default=None,
        help="plain key=value config file; flags override the file, "
             "the file overrides defaults",
    )


_FIELD_TYPES = {f: t for f, t, _ in _CONFIG_FLAGS}
_FIELD_TYPES.update({"method": str, "basis-kind": str})


def _read_config_file(path):
    values = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ScsegError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip().replace("_", "-")
        raw = raw.strip()
        if key == "rho":
            values["rho"] = tuple(float(x) for x in raw.split(","))
        elif key in _FIELD_TYPES:
            values[key.replace("-", "_")] = _FIELD_TYPES[key](raw)
        else:
            raise ScsegError(f"{path}:{lineno}: unknown key {key!r}")
    return values


def _build_config(args):
    values = {}
    if args.config is not None:
        values.update(_read_config_file(args.config))
    for flag, _, _ in _CONFIG_FLAGS:
        attr = flag.replace("-", "_")
        if getattr(args, attr) is not None:
            values[attr] = getattr(args, attr)
    for attr in ("method", "basis_kind"):
        if getattr(args, attr, None) is not None:
            values[attr] = getattr(args, attr)
    if getattr(args, "rho", None) is not None:
        values["rho"] = tuple(args.rho)
    return SegmentationConfig(**values)


def _threads(args):
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("SCSEG_THREADS")
    return max(1, int(env)) if env else 1


def _load_image(path):
    img = Image.open(path)
    if img.mode == "L":
        return np.asarray(img)
    return np.asarray(img.convert("RGB"))


def _save_mask(mask, path):
    Image.fromarray(np.where(mask, 255, 0).astype(np.uint8), mode="L").save(path)


def _save_gray(values, path):
    Image.fromarray(np.clip(np.rint(values), 0, 255).astype(np.uint8),
                    mode="L").save(path)


def _cmd_segment(args):
    cfg = _build_config(args)
    img = _load_image(args.input)
    orig_shape = np.asarray(img).shape[:2]
    if args.pad:
        img = pad_to_multiple(img, cfg.n_max)
    mask, decisions = segment_image(img, cfg, workers=_threads(args),
                                    return_decisions=True)
    mask = mask[: orig_shape[0], : orig_shape[1]]
    _save_mask(mask, args.output)
    if args.stats is not None:
        with open(args.stats, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["mode", "count", "percentage"])
            for mode, (count, pct) in mode_statistics(decisions).items():
                w.writerow([mode, count, f"{pct:.2f}"])
    return 0


def _cmd_decompose(args):
    cfg = _build_config(args)
    img = _load_image(args.input)
    orig_shape = np.asarray(img).shape[:2]
    if args.pad:
        img = pad_to_multiple(img, cfg.n_max)
    y, _, _ = _split_planes(img)
    hgt, wid = y.shape
    nb = cfg.n_max
    if hgt % nb or wid % nb:
        raise ScsegError(
            f"image size {wid}x{hgt} is not a multiple of {nb}; use --pad"
        )
    background = np.empty_like(y)
    sparse_abs = np.empty_like(y)
    mask = np.empty((hgt, wid), dtype=bool)
    P = get_basis(nb, cfg.k, cfg.basis_kind)
    D = difference_operator(nb)
    for r in range(0, hgt, nb):
        for c in range(0, wid, nb):
            f = vectorize(y[r:r + nb, c:c + nb])
            if cfg.method == Method.SD:
                res = admm_solve(f, P, D, lam1=cfg.lam1, lam2=cfg.lam2,
                                 rho=cfg.rho, k_max=cfg.k_max_admm,
                                 eps_in=cfg.eps_in)
                alpha, bits = res.alpha, res.mask.bits
            elif cfg.method == Method.RANSAC:
                res = ransac_segment(
                    f, P, eps_in=cfg.eps_in, m_iter=cfg.m_iter,
                    stop_ratio=cfg.stop_ratio,
                    seed=[cfg.seed & 0xFFFFFFFF, c, r, nb])
                alpha, bits = res.alpha, res.mask.bits
            else:
                fit = (lad_fit(f, P).coefficients if cfg.method == Method.LAD
                       else least_squares_fit(f, P))
                alpha = fit.alpha
                bits = np.abs(f - P.columns @ alpha) >= cfg.eps_in
            smooth = P.columns @ alpha
            background[r:r + nb, c:c + nb] = unvectorize(smooth, nb)
            sparse_abs[r:r + nb, c:c + nb] = unvectorize(np.abs(f - smooth), nb)
            mask[r:r + nb, c:c + nb] = bits.reshape((nb, nb), order="F")
    h0, w0 = orig_shape
    out = Path(args.output_prefix)
    _save_gray(background[:h0, :w0], f"{out}.background.png")
    _save_gray(sparse_abs[:h0, :w0], f"{out}.sparse.png")
    _save_mask(mask[:h0, :w0], f"{out}.mask.png")
    return 0


def _cmd_basis_rmse(args):
    kinds = {
        "both": (BasisKind.DCT, BasisKind.ORTHO_POLY),
        "dct": (BasisKind.DCT,),
        "poly": (BasisKind.ORTHO_POLY,),
    }[args.kind]
    blocks = []
    for path in sorted(Path(args.blocks).glob("*.png")):
        arr = np.asarray(Image.open(path).convert("L"), dtype=float)
        if arr.shape != (args.n, args.n):
            raise ScsegError(
                f"{path.name}: expected {args.n}x{args.n}, got {arr.shape}"
            )
        blocks.append(vectorize(arr))
    if not blocks:
        raise ScsegError(f"no *.png blocks found in {args.blocks}")
    table = basis_rmse_study(blocks, args.kmax, kinds)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(["k", "kind", "rmse"])
        for (k, kind), rmse in sorted(table.items(), key=lambda t: (t[0][0], t[0][1].value)):
            w.writerow([k, kind.value, f"{rmse:.6f}"])
    finally:
        if args.out:
            out.close()
    return 0


def _cmd_eval(args):
    cfg = _build_config(args)
    report = evaluate_dataset(args.dataset, cfg, workers=_threads(args))
    if args.out is not None:
        write_report_csv(report, args.out)
    print(report.summary())
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="scseg",
        description="Separate smooth background from sparse foreground in "
                    "screen-content images.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment an image into a foreground mask")
    p.add_argument("input", type=Path)
    p.add_argument("output", type=Path, help="output mask PNG (0/255)")
    p.add_argument("--stats", type=Path, default=None,
                   help="write per-block mode statistics CSV")
    p.add_argument("--pad", action="store_true",
                   help="edge-replicate to the next multiple of n-max")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $SCSEG_THREADS or 1)")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("decompose",
                       help="emit background, |sparse| layer and mask images")
    p.add_argument("input", type=Path)
    p.add_argument("output_prefix",
                   help="prefix for <prefix>.background.png, .sparse.png, .mask.png")
    p.add_argument("--pad", action="store_true")
    p.add_argument("--threads", type=int, default=None)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("basis-rmse",
                       help="reconstruction RMSE vs basis count study (CSV)")
    p.add_argument("--n", type=int, default=64, help="block side (default: 64)")
    p.add_argument("--kmax", type=int, default=20,
                   help="largest basis count (default: 20)")
    p.add_argument("--kind", choices=["both", "dct", "poly"], default="both")
    p.add_argument("--blocks", required=True,
                   help="directory of n x n grayscale PNG blocks")
    p.add_argument("--out", type=Path, default=None,
                   help="output CSV path (default: stdout)")
    p.set_defaults(func=_cmd_basis_rmse)

    p = sub.add_parser("eval", help="evaluate against an annotated dataset")
    p.add_argument("dataset", type=Path,
                   help="directory of <id>.img.png / <id>.gt.png pairs")
    p.add_argument("--out", type=Path, default=None, help="report CSV path")
    p.add_argument("--threads", type=int, default=None)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_eval)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScsegError as exc:
        print(f"scseg {args.command}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"scseg {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
