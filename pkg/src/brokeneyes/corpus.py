"""Corpus curation and six-condition dataset generation.

The pipeline is scan -> resolution filter -> dedup -> class balance ->
stratified split -> fan out over the six conditions. Every stage is
deterministic: directory scans are path-sorted, shuffles run on the
package's own SplitMix64 generator, and each generated image gets a seed
derived from its class-qualified relative path, so a thread pool can
process records in any order and still reproduce the single-threaded
bytes.

Manifest records store POSIX-style paths relative to their root (the
scan directory for sources, the output directory for generated sets);
that keeps reruns into different directories byte-identical.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, NamedTuple

from PIL import Image, UnidentifiedImageError

from . import kernels, raster
from .errors import (
    BrokenEyesError,
    EmptyClassError,
    InvalidParameterError,
    ManifestParseError,
    NotFoundError,
)
from .filters import Condition, FilterParams, apply_condition
from .rng import Rng64, derive_seed

CLASS_LABELS = ("human", "non_human")
SPLITS = ("train", "val", "test", "unassigned")

_MANIFEST_FIELDS = ("path", "class", "condition", "split", "sha256", "width", "height")

#: Counters the decimal-fraction representation error in e.g. 0.7 * 10,
#: which lands at 6.999999999999999 and would floor to the wrong bucket.
_RATIO_EPS = 1e-9


@dataclass(frozen=True)
class ImageRecord:
    """One image file: identity, labels, split and content hash."""

    path: str
    class_label: str
    condition: Condition = Condition.NORMAL
    split: str = "unassigned"
    sha256: str = ""
    width: int = 0
    height: int = 0


@dataclass
class Manifest:
    """Ordered dataset ledger. Timestamp and config digest are run
    metadata: they are not serialized and do not take part in equality."""

    records: list[ImageRecord]
    created_at: str | None = field(default=None, compare=False)
    config_digest: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class CurationConfig:
    min_resolution: int = 64
    target_size: int = 224
    split_ratios: tuple[float, float, float] = (0.70, 0.15, 0.15)
    balance_tolerance: float = 0.10
    global_seed: int = 0

    def __post_init__(self):
        if self.min_resolution < 0:
            raise InvalidParameterError("min_resolution must be >= 0")
        if self.target_size < 1:
            raise InvalidParameterError("target_size must be >= 1")
        if len(self.split_ratios) != 3 or any(r <= 0 for r in self.split_ratios):
            raise InvalidParameterError("split_ratios must be three positive fractions")
        if abs(sum(self.split_ratios) - 1.0) > 1e-9:
            raise InvalidParameterError(
                f"split_ratios must sum to 1.0, got {sum(self.split_ratios)}"
            )
        if not 0 <= self.balance_tolerance <= 1:
            raise InvalidParameterError("balance_tolerance must be in [0, 1]")

    def digest(self) -> str:
        blob = json.dumps(
            {
                "min_resolution": self.min_resolution,
                "target_size": self.target_size,
                "split_ratios": list(self.split_ratios),
                "balance_tolerance": self.balance_tolerance,
                "global_seed": self.global_seed,
            },
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class SourceCorpus(NamedTuple):
    """Curated records of one class together with the directory they
    are relative to."""

    root: Path
    records: list[ImageRecord]


def scan_directory(
    directory: str | Path,
    class_label: str,
    on_warning: Callable[[str], None] | None = None,
) -> list[ImageRecord]:
    """One record per decodable image under `directory`, path-sorted.

    Undecodable files are reported through `on_warning` and skipped;
    a missing directory is fatal.
    """
    root = Path(directory)
    if not root.is_dir():
        raise NotFoundError(f"no such directory: {root}")
    if class_label not in CLASS_LABELS:
        raise InvalidParameterError(f"unknown class label {class_label!r}")
    candidates = sorted(
        (p for p in root.rglob("*") if p.is_file() and p.suffix.lower() in raster.IMAGE_SUFFIXES),
        key=lambda p: p.relative_to(root).as_posix(),
    )
    records = []
    for path in candidates:
        data = path.read_bytes()
        try:
            with Image.open(io.BytesIO(data)) as im:
                im.load()
                width, height = im.size
        except (UnidentifiedImageError, OSError) as exc:
            if on_warning is not None:
                on_warning(f"skipping undecodable file {path}: {exc}")
            continue
        records.append(
            ImageRecord(
                path=path.relative_to(root).as_posix(),
                class_label=class_label,
                sha256=hashlib.sha256(data).hexdigest(),
                width=width,
                height=height,
            )
        )
    return records


def filter_min_resolution(records: list[ImageRecord], min_resolution: int) -> list[ImageRecord]:
    """Keep records whose smaller side is at least `min_resolution`."""
    return [r for r in records if min(r.width, r.height) >= min_resolution]


def dedup_by_hash(records: list[ImageRecord]) -> list[ImageRecord]:
    """Drop records repeating an earlier record's content hash."""
    seen: set[str] = set()
    kept = []
    for rec in records:
        if rec.sha256 in seen:
            continue
        seen.add(rec.sha256)
        kept.append(rec)
    return kept


def _shuffled(records: list[ImageRecord], seed: int) -> list[ImageRecord]:
    """Fisher-Yates on the package RNG: identical order on every platform."""
    rng = Rng64(seed)
    out = list(records)
    for i in range(len(out) - 1, 0, -1):
        j = int(math.floor(rng.next_uniform(0.0, i + 1.0)))
        out[i], out[j] = out[j], out[i]
    return out


def balance_classes(
    human: list[ImageRecord],
    non_human: list[ImageRecord],
    tolerance: float,
    seed: int = 0,
) -> tuple[list[ImageRecord], list[ImageRecord]]:
    """Truncate the larger class once it exceeds the smaller by more than
    `tolerance`, to ceil(smaller * (1 + tolerance)).

    The cut drops a deterministic random subset (shuffle by seed, keep
    the head, restore path order).
    """
    if not human or not non_human:
        raise EmptyClassError("both classes must be non-empty to balance")
    smaller, larger = sorted((human, non_human), key=len)
    cap = math.ceil(len(smaller) * (1.0 + tolerance) - _RATIO_EPS)
    if len(larger) <= cap:
        return human, non_human
    kept = _shuffled(larger, seed)[:cap]
    kept.sort(key=lambda r: r.path)
    if larger is human:
        return kept, non_human
    return human, kept


def stratified_split(
    records: list[ImageRecord],
    ratios: tuple[float, float, float],
    seed: int,
) -> list[ImageRecord]:
    """Assign train/val/test within each class.

    Per class of size N: shuffle by a class-derived seed, then
    floor(train_ratio * N) to train, floor(val_ratio * N) to val, and the
    remainder to test. Record order is preserved; only `split` changes.
    """
    split_of: dict[tuple[str, str], str] = {}
    labels = sorted({r.class_label for r in records})
    if not labels:
        raise EmptyClassError("no records to split")
    for label in labels:
        group = [r for r in records if r.class_label == label]
        shuffled = _shuffled(group, derive_seed(seed, label))
        n = len(group)
        n_train = int(math.floor(ratios[0] * n + _RATIO_EPS))
        n_val = int(math.floor(ratios[1] * n + _RATIO_EPS))
        for idx, rec in enumerate(shuffled):
            if idx < n_train:
                split = "train"
            elif idx < n_train + n_val:
                split = "val"
            else:
                split = "test"
            split_of[(label, rec.path)] = split
    return [replace(r, split=split_of[(r.class_label, r.path)]) for r in records]


def resize_image(img, target: int):
    """Square bilinear resize; aspect ratio is intentionally not kept so
    peripheral filters always see the full frame."""
    return kernels.resize_bilinear(img, target, target)


def _output_rel_path(condition: Condition, class_label: str, source_rel: str) -> str:
    stem = source_rel.rsplit(".", 1)[0] if "." in source_rel else source_rel
    return f"{condition.value}/{class_label}/{stem}.png"


def generate_dataset(
    human: SourceCorpus,
    non_human: SourceCorpus,
    params: FilterParams,
    seed: int,
    out_dir: str | Path,
    *,
    target_size: int = 224,
    threads: int = 0,
    config_digest: str | None = None,
    on_progress: Callable[[str], None] | None = None,
) -> Manifest:
    """Fan each curated source image out over the six conditions.

    Every source is resized to target_size, filtered once per condition
    with seed derive_seed(seed, "<class>/<relpath>"), and written as PNG
    under out_dir/<condition>/<class>/. Work parallelizes over source
    images; the manifest is assembled in fixed order afterwards, so the
    thread count never changes the output.
    """
    out_root = Path(out_dir)
    sources = [("human", human.root, r) for r in human.records] + [
        ("non_human", non_human.root, r) for r in non_human.records
    ]

    targets: dict[str, str] = {}
    for class_label, _, rec in sources:
        for condition in Condition:
            rel = _output_rel_path(condition, class_label, rec.path)
            if rel in targets:
                raise BrokenEyesError(
                    f"output name collision: {rec.path!r} and {targets[rel]!r} "
                    f"both map to {rel!r}; rename one source file"
                )
            targets[rel] = rec.path

    def process(task: tuple[str, Path, ImageRecord]) -> list[tuple[str, str, ImageRecord]]:
        class_label, root, rec = task
        img = raster.load_image(root / rec.path)
        img = resize_image(img, target_size)
        image_seed = derive_seed(seed, f"{class_label}/{rec.path}")
        out = []
        for condition in Condition:
            filtered = apply_condition(img, condition, params, image_seed)
            rel = _output_rel_path(condition, class_label, rec.path)
            data = raster.save_png(filtered, out_root / rel)
            out.append(
                (
                    class_label,
                    rec.path,
                    ImageRecord(
                        path=rel,
                        class_label=class_label,
                        condition=condition,
                        split=rec.split,
                        sha256=hashlib.sha256(data).hexdigest(),
                        width=target_size,
                        height=target_size,
                    ),
                )
            )
        if on_progress is not None:
            on_progress(f"{class_label}/{rec.path}")
        return out

    workers = threads if threads > 0 else (os.cpu_count() or 1)
    try:
        if workers == 1:
            results = [process(t) for t in sources]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(process, sources))
    except OSError as exc:
        raise BrokenEyesError(f"cannot write dataset under {out_root}: {exc}") from None

    by_source: dict[tuple[str, str], dict[Condition, ImageRecord]] = {}
    for produced in results:
        for class_label, src_path, rec in produced:
            by_source.setdefault((class_label, src_path), {})[rec.condition] = rec
    records = []
    for condition in Condition:
        for class_label, corpus in (("human", human), ("non_human", non_human)):
            for rec in corpus.records:
                records.append(by_source[(class_label, rec.path)][condition])
    return Manifest(
        records=records,
        created_at=datetime.now(timezone.utc).isoformat(),
        config_digest=config_digest,
    )


def condition_counts(records: list[ImageRecord]) -> dict[Condition, dict[str, int]]:
    """Per-condition class counts, the shape of the dataset summary table."""
    counts = {c: {label: 0 for label in CLASS_LABELS} for c in Condition}
    for rec in records:
        counts[rec.condition][rec.class_label] += 1
    return counts


def format_count_summary(records: list[ImageRecord]) -> str:
    """Human/non-human counts per condition plus totals, as a text table."""
    counts = condition_counts(records)
    lines = [f"{'condition':<12} {'human':>8} {'non_human':>10}"]
    total = {label: 0 for label in CLASS_LABELS}
    for condition in Condition:
        row = counts[condition]
        lines.append(f"{condition.value:<12} {row['human']:>8} {row['non_human']:>10}")
        for label in CLASS_LABELS:
            total[label] += row[label]
    lines.append(f"{'total':<12} {total['human']:>8} {total['non_human']:>10}")
    return "\n".join(lines)


def write_manifest(manifest: Manifest, path: str | Path) -> None:
    """JSON-Lines, one record per line, fields in fixed order."""
    lines = []
    for rec in manifest.records:
        lines.append(
            json.dumps(
                {
                    "path": rec.path,
                    "class": rec.class_label,
                    "condition": rec.condition.value,
                    "split": rec.split,
                    "sha256": rec.sha256,
                    "width": rec.width,
                    "height": rec.height,
                },
                separators=(",", ":"),
            )
        )
    text = "".join(line + "\n" for line in lines)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def read_manifest(path: str | Path) -> Manifest:
    """Parse a JSON-Lines manifest; malformed lines name their line number."""
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"no such manifest: {path}")
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestParseError(lineno, f"invalid JSON: {exc}") from None
            if not isinstance(obj, dict):
                raise ManifestParseError(lineno, "record must be a JSON object")
            missing = [f for f in _MANIFEST_FIELDS if f not in obj]
            if missing:
                raise ManifestParseError(lineno, f"missing field {missing[0]!r}")
            unknown = [k for k in obj if k not in _MANIFEST_FIELDS]
            if unknown:
                raise ManifestParseError(lineno, f"unknown field {unknown[0]!r}")
            if obj["class"] not in CLASS_LABELS:
                raise ManifestParseError(lineno, f"unknown class {obj['class']!r}")
            if obj["split"] not in SPLITS:
                raise ManifestParseError(lineno, f"unknown split {obj['split']!r}")
            try:
                condition = Condition(obj["condition"])
            except ValueError:
                raise ManifestParseError(
                    lineno, f"unknown condition {obj['condition']!r}"
                ) from None
            records.append(
                ImageRecord(
                    path=obj["path"],
                    class_label=obj["class"],
                    condition=condition,
                    split=obj["split"],
                    sha256=obj["sha256"],
                    width=int(obj["width"]),
                    height=int(obj["height"]),
                )
            )
    return Manifest(records=records)


def run_curation(
    human_dir: str | Path,
    non_human_dir: str | Path,
    out_dir: str | Path,
    config: CurationConfig,
    params: FilterParams,
    *,
    threads: int = 0,
    on_progress: Callable[[str], None] | None = None,
) -> Manifest:
    """The full curate-and-generate pipeline behind the curate command."""
    warn = on_progress if on_progress is not None else (lambda msg: None)
    corpora = {}
    for label, directory in (("human", human_dir), ("non_human", non_human_dir)):
        recs = scan_directory(directory, label, on_warning=warn)
        recs = filter_min_resolution(recs, config.min_resolution)
        recs = dedup_by_hash(recs)
        if not recs:
            raise EmptyClassError(f"class {label!r} has no usable images in {directory}")
        corpora[label] = recs
    human_recs, non_human_recs = balance_classes(
        corpora["human"], corpora["non_human"], config.balance_tolerance, config.global_seed
    )
    split_recs = stratified_split(
        human_recs + non_human_recs, config.split_ratios, config.global_seed
    )
    human_split = [r for r in split_recs if r.class_label == "human"]
    non_human_split = [r for r in split_recs if r.class_label == "non_human"]
    return generate_dataset(
        SourceCorpus(Path(human_dir), human_split),
        SourceCorpus(Path(non_human_dir), non_human_split),
        params,
        config.global_seed,
        out_dir,
        target_size=config.target_size,
        threads=threads,
        config_digest=config.digest(),
        on_progress=on_progress,
    )
