"""Command-line frontend: ``specmix <subcommand> ...``."""

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import io as sio
from .pipeline import (
    PRESETS,
    SmuSettings,
    build_preset,
    explain_pipeline,
    load_config,
    parse_d0_spec,
    run_pipeline,
)
from .spectral import (
    MixupStrategy,
    Orientation,
    baseline_mix,
    psnr,
    radial_amplitude_profile,
    smu_mix,
)

REPORT_D0 = (15, 30, 45, 60)
REPORT_LAMBDA = 0.5
REPORT_RADIUS_FRACTION = 0.1


class UsageError(Exception):
    """Invalid flag combination, reported before any file is touched."""


# ---------------------------------------------------------------------------
# config resolution


def resolve_config(args):
    if args.preset is None and args.config is None:
        raise UsageError("one of --preset or --config is required")
    if args.preset is not None and args.preset not in PRESETS:
        raise UsageError(f"unknown preset {args.preset!r} (see `specmix list-presets`)")
    cfg = build_preset(args.preset) if args.preset else None
    if args.config is not None:
        try:
            cfg = load_config(args.config, base=cfg)
        except FileNotFoundError:
            raise UsageError(f"config file not found: {args.config}") from None
        except ValueError as exc:
            raise UsageError(f"bad config {args.config}: {exc}") from None
    if args.smu_d0 is not None:
        try:
            cfg = cfg.with_updates(
                smu=SmuSettings(probability=args.smu_prob, **parse_d0_spec(args.smu_d0))
            )
        except ValueError as exc:
            raise UsageError(f"--smu-d0: {exc}") from None
    if args.seed is not None:
        cfg = cfg.with_updates(master_seed=args.seed)
    return cfg


# ---------------------------------------------------------------------------
# augment


def _augment_one(i, entry, corpus, out_dir, cfg, bank):
    syn = sio.load_image(entry)
    real = None
    real_idx = None
    if cfg.smu is not None:
        real_idx = sio.sample_index(bank, i)
        real = sio.sample_real(bank, i, syn.shape)
        if real.shape[2] != syn.shape[2]:
            # match channel layout of the synthetic image
            real = real.mean(axis=2, keepdims=True) if syn.shape[2] == 1 else real.repeat(3, axis=2)
    record = []
    out = run_pipeline(syn, real, cfg, i, record=record)
    rel = corpus.relative(entry).with_suffix(".png")
    dest = out_dir / rel
    dest.parent.mkdir(parents=True, exist_ok=True)
    sio.save_image(out, dest)
    stages = ",".join(f"{label}:{int(fired)}" for label, fired, _ in record)
    d0 = next((d for label, _, d in record if label == "SMU" and d is not None), None)
    line = f"image index={i} path={rel.as_posix()} stages={stages or '-'}"
    if cfg.smu is not None:
        line += f" real={real_idx} d0={'-' if d0 is None else format(d0, 'g')}"
    return line


def cmd_augment(args):
    cfg = resolve_config(args)
    if cfg.smu is not None and args.real_dir is None:
        raise UsageError("the resolved config enables SMU, which requires --real-dir")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    syn_dir = Path(args.syn_dir)
    if not syn_dir.is_dir():
        raise UsageError(f"--syn-dir does not exist: {syn_dir}")
    if args.real_dir is not None and not Path(args.real_dir).is_dir():
        raise UsageError(f"--real-dir does not exist: {args.real_dir}")

    corpus = sio.scan_corpus(syn_dir, max_images=args.max_images)
    if corpus.count == 0:
        raise UsageError(f"no images found under {syn_dir}")
    bank = None
    if cfg.smu is not None:
        size = None if args.real_size == 0 else (args.real_size, args.real_size)
        bank = sio.load_real_bank(args.real_dir, seed=cfg.master_seed, size=size)
        if len(bank) == 0:
            raise UsageError(f"no images found under {args.real_dir}")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def job(item):
        i, entry = item
        return _augment_one(i, entry, corpus, out_dir, cfg, bank)

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        lines = list(pool.map(job, enumerate(corpus.entries)))

    header = [
        "format=specmix-manifest-1",
        f"seed={cfg.master_seed}",
        f"preset={args.preset or '-'}",
        f"config_hash={cfg.digest()}",
        f"config={json.dumps(cfg.to_dict(), sort_keys=True)}",
        "stages=" + ("|".join(explain_pipeline(cfg)) or "-"),
        f"count={corpus.count}",
    ]
    (out_dir / "manifest.txt").write_text("\n".join(header + lines) + "\n", encoding="utf-8")
    print(f"wrote {corpus.count} image(s) to {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# mix / inspect / psnr-report


def _strategy_from_args(args):
    try:
        if args.strategy == "smu":
            return MixupStrategy("smu", d0=args.d0)
        return MixupStrategy(
            args.strategy,
            radius=args.radius,
            lam=args.lam,
            orientation=Orientation(args.orientation),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_mix(args):
    if not args.d0 > 0 or not math.isfinite(args.d0):
        raise UsageError(f"--d0 must be positive, got {args.d0:g}")
    strategy = _strategy_from_args(args)
    syn = sio.load_image(args.syn)
    real = sio.load_image(args.real)
    if strategy.kind == "smu":
        out = smu_mix(syn, real, strategy.d0)
    else:
        out = baseline_mix(syn, real, strategy)
    sio.save_image(out, args.out)
    if args.spectrum_out:
        spec_dir = Path(args.spectrum_out)
        spec_dir.mkdir(parents=True, exist_ok=True)
        sio.export_spectrum_png(syn, spec_dir / "syn_spectrum.png")
        sio.export_spectrum_png(real, spec_dir / "real_spectrum.png")
        sio.export_spectrum_png(out, spec_dir / "mixed_spectrum.png")
    print(f"{strategy.label()}: wrote {args.out}")
    return 0


def cmd_inspect(args):
    if args.bins < 1:
        raise UsageError("--bins must be >= 1")
    img = sio.load_image(args.image)
    profile = radial_amplitude_profile(img, args.bins)
    print("bin,mean_log_amplitude")
    for i, v in enumerate(profile):
        print(f"{i},{v:.6f}")
    if args.spectrum_out:
        sio.export_spectrum_png(img, args.spectrum_out)
    return 0


def report_strategies(shape):
    """Strategies compared by ``psnr-report`` for an image of ``shape``."""
    radius = max(1, round(REPORT_RADIUS_FRACTION * min(shape[:2])))
    out = [MixupStrategy("smu", d0=d) for d in REPORT_D0]
    out.append(MixupStrategy("phase-swap"))
    out.append(MixupStrategy("weighted-sum", lam=REPORT_LAMBDA))
    for orient in (Orientation.KEEP_SYN_HIGH, Orientation.KEEP_SYN_LOW):
        out.append(MixupStrategy("hard-low-swap", radius=radius, orientation=orient))
        out.append(MixupStrategy("band-interp", radius=radius, lam=REPORT_LAMBDA, orientation=orient))
    return out


def psnr_table(syn, real):
    """Rows of (strategy, parameters, psnr) measured on 8-bit outputs."""
    rows = []
    for strat in report_strategies(syn.shape):
        if strat.kind == "smu":
            out = smu_mix(syn, real, strat.d0)
        else:
            out = baseline_mix(syn, real, strat)
        label = strat.label()
        name, _, params = label.partition("(")
        rows.append((name, params.rstrip(")"), psnr(sio.quantize(out), syn)))
    return rows


def cmd_psnr_report(args):
    syn = sio.load_image(args.syn)
    real = sio.load_image(args.real)
    rows = psnr_table(syn, real)
    if args.out_table == "-":
        fh = sys.stdout
    else:
        fh = open(args.out_table, "w", newline="", encoding="utf-8")
    try:
        writer = csv.writer(fh)
        writer.writerow(["strategy", "parameters", "psnr_db"])
        for name, params, value in rows:
            writer.writerow([name, params, "inf" if math.isinf(value) else f"{value:.4f}"])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


# ---------------------------------------------------------------------------
# presets


def cmd_list_presets(args):
    width = max(map(len, PRESETS))
    for name, (desc, _, _) in PRESETS.items():
        print(f"{name:<{width}}  {desc}")
    return 0


def cmd_explain(args):
    if args.preset not in PRESETS:
        raise UsageError(f"unknown preset {args.preset!r}")
    cfg = build_preset(args.preset)
    print(f"preset {args.preset}")
    print(
        f"order: gray_first={cfg.gray_first} gray_last={cfg.gray_last} "
        f"he_first={cfg.he_first} he_last={cfg.he_last}"
    )
    print("probabilities: " + " ".join(f"{op.value}={p:g}" for op, p in cfg.probabilities.items()))
    print("stages:")
    for i, stage in enumerate(explain_pipeline(cfg), 1):
        print(f"  {i}. {stage}")
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="specmix", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("augment", help="augment a directory of synthetic images")
    p.add_argument("--syn-dir", required=True)
    p.add_argument("--real-dir")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--preset")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-images", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--smu-d0", help="enable SMU: one cut-off, or a comma list drawn uniformly")
    p.add_argument("--smu-prob", type=float, default=1.0)
    p.add_argument("--real-size", type=int, default=112, help="resize real images to N x N (0 keeps size)")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("mix", help="mix one synthetic/real pair")
    p.add_argument("--syn", required=True)
    p.add_argument("--real", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--d0", type=float, default=60.0)
    p.add_argument("--strategy", default="smu", choices=MixupStrategy.KINDS)
    p.add_argument("--lambda", dest="lam", type=float, default=REPORT_LAMBDA)
    p.add_argument("--radius", type=float, default=10.0)
    p.add_argument("--orientation", default=Orientation.KEEP_SYN_HIGH.value,
                   choices=[o.value for o in Orientation])
    p.add_argument("--spectrum-out", help="directory for log-amplitude PNGs")
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("inspect", help="radial amplitude profile of one image")
    p.add_argument("--image", required=True)
    p.add_argument("--bins", type=int, default=16)
    p.add_argument("--spectrum-out")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("psnr-report", help="PSNR of every mixup strategy on one pair")
    p.add_argument("--syn", required=True)
    p.add_argument("--real", required=True)
    p.add_argument("--out-table", default="-")
    p.set_defaults(func=cmd_psnr_report)

    p = sub.add_parser("list-presets", help="list augmentation presets")
    p.set_defaults(func=cmd_list_presets)

    p = sub.add_parser("explain", help="show the stage order of a preset")
    p.add_argument("--preset", required=True)
    p.set_defaults(func=cmd_explain)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"specmix {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError, OSError) as exc:
        print(f"specmix {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
