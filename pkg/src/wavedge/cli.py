"""Command-line front end.

Subcommands: decompose, enhance-naive, enhance-mm, batch, inspect.  Every
subcommand accepts ``--config FILE`` (a JSON object whose keys mirror the
flag names); explicit flags win over config values, which win over the
built-in defaults.  Exit codes: 0 success, 1 I/O error, 2 parameter error,
3 data-format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .batch import enhancement_params, make_config, run_batch
from .coeffio import band_name, dump_pyramids
from .datasets import read_cifar_bin, read_idx, read_image_dir
from .dwt import decompose, energy
from .errors import FormatError, ParameterError
from .image import Image
from .mm import MMConfig, Threshold, enhance_mm_plane
from .naive import NaiveConfig, enhance_naive
from .pnm import read_pnm, write_plane_pnm, write_pnm

DEFAULTS = {
    "levels": 2,
    "renorm": "rescale",
    "sigma": 1.0,
    "threshold": "quantile:0.75",
    "inject": "mask",
    "workers": 1,
    "codec": "same",
}

# CLI spelling -> detail-subband injection mode
_INJECT = {"mask": "mask_details", "angle": "split_by_angle"}


def _load_config(path) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ParameterError(f"{path}: config file must hold a JSON object")
    return data


def _pick(args, config: dict, key: str, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return DEFAULTS.get(key, default)


def _mm_config(args, config) -> MMConfig:
    inject = str(_pick(args, config, "inject"))
    if inject not in _INJECT:
        raise ParameterError(f"inject must be 'mask' or 'angle', got {inject!r}")
    return MMConfig(
        sigma=float(_pick(args, config, "sigma")),
        threshold=Threshold.parse(str(_pick(args, config, "threshold"))),
        injection=_INJECT[inject],
    )


def _naive_config(args, config) -> NaiveConfig:
    return NaiveConfig(
        levels=int(_pick(args, config, "levels")),
        renormalize=str(_pick(args, config, "renorm")),
    )


def _open_dataset(args, config):
    fmt = _pick(args, config, "format")
    if fmt == "idx":
        images = _pick(args, config, "images")
        labels = _pick(args, config, "labels")
        if not images or not labels:
            raise ParameterError("idx input needs --images and --labels")
        return read_idx(images, labels)
    if fmt == "cifar_bin":
        data = _pick(args, config, "data")
        if not data:
            raise ParameterError("cifar_bin input needs --data FILE [FILE ...]")
        return read_cifar_bin(data)
    if fmt == "image_dir":
        root = _pick(args, config, "root")
        if not root:
            raise ParameterError("image_dir input needs --root")
        return read_image_dir(root)
    raise ParameterError(f"unknown dataset format {fmt!r} (idx, cifar_bin, image_dir)")


def cmd_decompose(args) -> int:
    config = _load_config(args.config)
    img = read_pnm(args.image)
    levels = int(_pick(args, config, "levels"))
    pyramids = decompose(img, levels)

    input_energy = sum(energy(p) for p in img.planes)
    print(f"input {input_energy:.17g}")
    total = 0.0
    for ch, pyr in enumerate(pyramids):
        for lv, (dx, dy, dd) in enumerate(pyr.details, start=1):
            for band, values in (("dx", dx), ("dy", dy), ("dd", dd)):
                e = energy(values)
                total += e
                print(f"{Path(band_name(lv, band, ch, img.channels)).stem} {e:.17g}")
        e = energy(pyr.coarsest_approx)
        total += e
        print(f"{Path(band_name(pyr.levels, 'approx', ch, img.channels)).stem} {e:.17g}")
    print(f"total {total:.17g}")

    if args.dump:
        sidecar = dump_pyramids(pyramids, args.dump)
        print(f"wrote {len(sidecar['subbands'])} subband files to {args.dump}")
    return 0


def cmd_enhance_naive(args) -> int:
    config = _load_config(args.config)
    img = read_pnm(args.image)
    out = enhance_naive(img, _naive_config(args, config))
    write_pnm(args.out, out)
    print(f"wrote {args.out}")
    return 0


def cmd_enhance_mm(args) -> int:
    config = _load_config(args.config)
    img = read_pnm(args.image)
    cfg = _mm_config(args, config)
    dump_dir = Path(args.dump_stages) if args.dump_stages else None
    if dump_dir is not None:
        dump_dir.mkdir(parents=True, exist_ok=True)

    finals = []
    for ch in range(img.channels):
        final, stages = enhance_mm_plane(img.plane(ch), cfg)
        finals.append(final)
        if dump_dir is not None:
            suffix = f"_c{ch}" if img.channels > 1 else ""
            for pos, (name, values) in enumerate(stages, start=1):
                write_plane_pnm(
                    dump_dir / f"{pos:02d}_{name}{suffix}.pgm", values,
                    rescale=name != "final",
                )
    write_pnm(args.out, Image(np.stack(finals)))
    print(f"wrote {args.out}")
    return 0


def cmd_batch(args) -> int:
    config = _load_config(args.config)
    method = _pick(args, config, "method")
    if method is None:
        raise ParameterError("batch needs --method (identity, naive, mm)")
    out_root = _pick(args, config, "out")
    if out_root is None:
        raise ParameterError("batch needs --out DIR")
    workers = int(_pick(args, config, "workers"))
    codec = str(_pick(args, config, "codec"))

    if method == "naive":
        cfg = _naive_config(args, config)
    elif method == "mm":
        cfg = _mm_config(args, config)
    else:
        cfg = make_config(method)

    manifest, stream = _open_dataset(args, config)
    result, _ = run_batch(manifest, stream, out_root, method, cfg,
                          codec=codec, workers=workers)

    echo = " ".join(f"{k}={v}" for k, v in enhancement_params(method, cfg).items())
    print(f"processed {result.items} items in {result.wall_seconds:.2f}s "
          f"({result.items_per_second:.1f} items/s)")
    print(f"stage seconds: read {result.read_seconds:.3f} "
          f"enhance {result.enhance_seconds:.3f} write {result.write_seconds:.3f}")
    print(f"config: method={method}{' ' + echo if echo else ''} "
          f"workers={workers} codec={codec}")
    print(f"manifest: {Path(out_root) / 'manifest.json'}")
    return 0


def cmd_inspect(args) -> int:
    config = _load_config(args.config)
    manifest, stream = _open_dataset(args, config)
    w, h, c = manifest.image_shape
    print(f"format: {manifest.format}")
    print(f"shape: {w}x{h}x{c}")
    print(f"items: {manifest.num_items}")
    print(f"classes: {' '.join(manifest.label_names)}")
    if args.histogram:
        counts = [0] * len(manifest.label_names)
        for item in stream:
            counts[item.label] += 1
        for name, count in zip(manifest.label_names, counts):
            print(f"{name}: {count}")
    return 0


def _add_dataset_flags(sub):
    sub.add_argument("--format", choices=("idx", "cifar_bin", "image_dir"))
    sub.add_argument("--images", help="IDX image file")
    sub.add_argument("--labels", help="IDX label file")
    sub.add_argument("--data", nargs="+", help="CIFAR binary batch files")
    sub.add_argument("--root", help="image_dir dataset root")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavedge",
        description="Wavelet edge enhancement for images and image datasets.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("decompose", help="multilevel transform of one image")
    p.add_argument("image", help="P5/P6 input image")
    p.add_argument("--levels", type=int)
    p.add_argument("--dump", help="directory for subband dumps")
    p.add_argument("--config")
    p.set_defaults(func=cmd_decompose)

    p = commands.add_parser("enhance-naive", help="detail-only enhancement of one image")
    p.add_argument("image", help="P5/P6 input image")
    p.add_argument("out", help="output image path")
    p.add_argument("--levels", type=int)
    p.add_argument("--renorm", choices=("rescale", "clamp"))
    p.add_argument("--config")
    p.set_defaults(func=cmd_enhance_naive)

    p = commands.add_parser("enhance-mm", help="modulus-maxima enhancement of one image")
    p.add_argument("image", help="P5/P6 input image")
    p.add_argument("out", help="output image path")
    p.add_argument("--sigma", type=float)
    p.add_argument("--threshold", help="'fixed:T' or 'quantile:Q'")
    p.add_argument("--inject", choices=("mask", "angle"))
    p.add_argument("--dump-stages", help="directory for per-stage graymaps")
    p.add_argument("--config")
    p.set_defaults(func=cmd_enhance_mm)

    p = commands.add_parser("batch", help="enhance a whole dataset")
    _add_dataset_flags(p)
    p.add_argument("--out", help="output dataset directory")
    p.add_argument("--method", choices=("identity", "naive", "mm"))
    p.add_argument("--levels", type=int)
    p.add_argument("--renorm", choices=("rescale", "clamp"))
    p.add_argument("--sigma", type=float)
    p.add_argument("--threshold")
    p.add_argument("--inject", choices=("mask", "angle"))
    p.add_argument("--workers", type=int)
    p.add_argument("--codec", choices=("same", "image_dir"))
    p.add_argument("--config")
    p.set_defaults(func=cmd_batch)

    p = commands.add_parser("inspect", help="print a dataset's manifest")
    _add_dataset_flags(p)
    p.add_argument("--histogram", action="store_true", help="count items per class")
    p.add_argument("--config")
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
