"""Command-line interface: filter | curate | analyze.

Exit codes: 0 success, 1 runtime failure, 2 usage error (including config
mistakes). Progress and warnings go to stderr; machine-readable output
(per-file lines, the count summary, reports) goes to stdout. Thread count
resolution: --threads flag, then the BROKENEYES_THREADS environment
variable, then the config file, then auto (one worker per CPU).
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import corpus, metrics, raster
from .config import ToolConfig, load_config
from .errors import BrokenEyesError, ConfigError, NotFoundError
from .filters import DISORDERS, Condition, apply_condition
from .rng import derive_seed

_CONDITION_CHOICES = [c.value for c in Condition]


def _resolve_threads(args, cfg: ToolConfig) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("BROKENEYES_THREADS")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"BROKENEYES_THREADS must be an integer, got {env!r}") from None
        if value < 0:
            raise ConfigError("BROKENEYES_THREADS must be >= 0")
        return value
    if cfg.threads is not None:
        return cfg.threads
    return 0


def _resolve_seed(args, cfg: ToolConfig, *, curation: bool = False) -> int:
    if args.seed is not None:
        return args.seed
    if cfg.seed is not None:
        return cfg.seed
    if curation:
        return cfg.curation.global_seed
    return 0


def cmd_filter(args) -> int:
    cfg = load_config(args.config)
    threads = _resolve_threads(args, cfg)
    seed = _resolve_seed(args, cfg)
    condition = Condition(args.condition)
    in_path = Path(args.input)
    out_dir = Path(args.out)

    if in_path.is_file():
        jobs = [(in_path, in_path.name)]
    elif in_path.is_dir():
        jobs = [
            (p, p.relative_to(in_path).as_posix())
            for p in sorted(in_path.rglob("*"), key=lambda p: p.as_posix())
            if p.is_file() and p.suffix.lower() in raster.IMAGE_SUFFIXES
        ]
    else:
        raise NotFoundError(f"no such input: {in_path}")

    def process(job: tuple[Path, str]):
        src, rel = job
        try:
            img = raster.load_image(src)
        except ValueError as exc:
            return (src, None, str(exc))
        filtered = apply_condition(img, condition, cfg.filters, derive_seed(seed, rel))
        stem = rel.rsplit(".", 1)[0] if "." in rel else rel
        dst = out_dir / (stem + ".png")
        raster.save_png(filtered, dst)
        return (src, dst, None)

    workers = threads if threads > 0 else (os.cpu_count() or 1)
    if workers == 1 or len(jobs) <= 1:
        results = map(process, jobs)
    else:
        pool = ThreadPoolExecutor(max_workers=workers)
        results = pool.map(process, jobs)

    failures = 0
    for src, dst, error in results:
        if error is not None:
            failures += 1
            print(f"error: {error}", file=sys.stderr)
        else:
            print(f"{src} -> {dst}")
    return 1 if failures else 0


def cmd_curate(args) -> int:
    cfg = load_config(args.config)
    threads = _resolve_threads(args, cfg)
    seed = _resolve_seed(args, cfg, curation=True)
    curation = corpus.CurationConfig(
        min_resolution=cfg.curation.min_resolution,
        target_size=cfg.curation.target_size,
        split_ratios=cfg.curation.split_ratios,
        balance_tolerance=cfg.curation.balance_tolerance,
        global_seed=seed,
    )
    out_dir = Path(args.out)
    manifest = corpus.run_curation(
        args.human,
        args.nonhuman,
        out_dir,
        curation,
        cfg.filters,
        threads=threads,
        on_progress=lambda msg: print(msg, file=sys.stderr),
    )
    corpus.write_manifest(manifest, out_dir / "manifest.jsonl")
    print(corpus.format_count_summary(manifest.records))
    return 0


def cmd_analyze(args) -> int:
    from .tensorio import read_tensor

    threads = _resolve_threads(args, ToolConfig())
    out_dir = Path(args.out)
    disorder_dir = Path(args.disorders)
    tensor_paths = {c: disorder_dir / f"{c.value}.tnsr" for c in DISORDERS}
    records = metrics.compare_conditions(args.baseline, tensor_paths, threads=threads)
    metrics.write_report(records, out_dir / f"report.{args.format}", args.format)
    baseline = read_tensor(args.baseline)
    for condition in DISORDERS:
        heatmap = metrics.diff_heatmap(baseline, read_tensor(tensor_paths[condition]))
        raster.save_png(heatmap, out_dir / f"heatmap_{condition.value}.png")
    sys.stdout.write(metrics.render_report(records, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brokeneyes",
        description="Simulate eye disorders on images, curate condition datasets, "
        "and compare feature tensors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_filter = sub.add_parser("filter", help="apply one condition to an image or directory")
    p_filter.add_argument("--input", required=True, help="image file or directory")
    p_filter.add_argument(
        "--condition", required=True, type=str.lower, choices=_CONDITION_CHOICES
    )
    p_filter.add_argument("--out", required=True, help="output directory")
    p_filter.add_argument("--seed", type=int, default=None)
    p_filter.add_argument("--config", default=None, help="JSON config path")
    p_filter.add_argument("--threads", type=int, default=None)
    p_filter.set_defaults(func=cmd_filter)

    p_curate = sub.add_parser("curate", help="build the six-condition dataset")
    p_curate.add_argument("--human", required=True, help="directory of human-class images")
    p_curate.add_argument("--nonhuman", required=True, help="directory of non-human images")
    p_curate.add_argument("--out", required=True, help="output dataset directory")
    p_curate.add_argument("--seed", type=int, default=None)
    p_curate.add_argument("--config", default=None, help="JSON config path")
    p_curate.add_argument("--threads", type=int, default=None)
    p_curate.set_defaults(func=cmd_curate)

    p_analyze = sub.add_parser("analyze", help="compare disorder tensors against a baseline")
    p_analyze.add_argument("--baseline", required=True, help="baseline .tnsr file")
    p_analyze.add_argument(
        "--disorders", required=True, help="directory holding <condition>.tnsr files"
    )
    p_analyze.add_argument("--out", required=True, help="output directory")
    p_analyze.add_argument("--format", choices=["json", "csv"], default="json")
    p_analyze.add_argument("--threads", type=int, default=None)
    p_analyze.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenEyesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
