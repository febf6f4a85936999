"""Trainer CLI: train | evaluate | export | pipeline.

Flags mirror the TrainConfig fields. `pipeline` runs the full protocol:
one model per condition, confidence JSON per condition, and a TNSR
export set (baseline.tnsr plus one tensor per disorder) ready for the
dataset toolkit's analyze command.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .manifest import CONDITIONS, DISORDERS, read_manifest
from .train import (
    TrainConfig,
    choose_probe,
    evaluate_accuracy,
    evaluate_confidence,
    export_feature_map,
    train_all,
    train_condition,
)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--head-epochs", type=int, default=5)
    parser.add_argument("--finetune-epochs", type=int, default=1)
    parser.add_argument("--head-lr", type=float, default=1e-3)
    parser.add_argument("--finetune-lr", type=float, default=1e-4)
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--no-pretrained", dest="pretrained", action="store_false",
        help="start from a randomly initialized backbone",
    )


def _config(args) -> TrainConfig:
    return TrainConfig(
        head_epochs=args.head_epochs,
        finetune_epochs=args.finetune_epochs,
        head_lr=args.head_lr,
        finetune_lr=args.finetune_lr,
        batch_size=args.batch_size,
        seed=args.seed,
        pretrained=args.pretrained,
    )


def cmd_train(args) -> int:
    records = read_manifest(args.manifest)
    checkpoint = train_condition(
        records, args.data_root, args.condition, _config(args), args.out
    )
    print(checkpoint)
    return 0


def cmd_evaluate(args) -> int:
    records = read_manifest(args.manifest)
    confidence = evaluate_confidence(
        args.checkpoint, records, args.data_root, args.condition, args.out_json
    )
    print(json.dumps({"condition": args.condition, "confidence": confidence}))
    return 0


def cmd_export(args) -> int:
    print(export_feature_map(args.checkpoint, args.probe, args.out))
    return 0


def cmd_pipeline(args) -> int:
    records = read_manifest(args.manifest)
    data_root = Path(args.data_root)
    out = Path(args.out)
    config = _config(args)

    print("training all conditions", file=sys.stderr)
    models = train_all(records, data_root, config, out / "models")
    checkpoints = models.checkpoints

    summary = {}
    for condition in CONDITIONS:
        summary[condition] = {
            "accuracy": evaluate_accuracy(checkpoints[condition], records, data_root, condition),
            "confidence": evaluate_confidence(
                checkpoints[condition], records, data_root, condition,
                out / "confidence" / f"{condition}.json",
            ),
        }

    tensors = out / "tensors"
    probe = choose_probe(records, "normal")
    export_feature_map(checkpoints["normal"], data_root / probe.path, tensors / "baseline.tnsr")
    for condition in DISORDERS:
        probe_d = choose_probe(records, condition)
        export_feature_map(
            checkpoints[condition], data_root / probe_d.path, tensors / f"{condition}.tnsr"
        )

    print(json.dumps(summary, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brokeneyes-trainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one condition's model")
    p.add_argument("--manifest", required=True)
    p.add_argument("--data-root", required=True)
    p.add_argument("--condition", required=True, choices=CONDITIONS)
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="mean human-class confidence on the test split")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--data-root", required=True)
    p.add_argument("--condition", required=True, choices=CONDITIONS)
    p.add_argument("--out-json", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("export", help="write the probe image's feature map as TNSR")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--probe", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("pipeline", help="train all conditions, evaluate, export tensors")
    p.add_argument("--manifest", required=True)
    p.add_argument("--data-root", required=True)
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
