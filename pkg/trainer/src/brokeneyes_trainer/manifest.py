"""Reader for the dataset manifest (JSON-Lines, one record per line).

This package talks to the dataset toolkit purely through its file
formats, so the manifest schema is parsed here independently: path,
class, condition, split, sha256, width, height. Paths are relative to
the directory the manifest sits in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

CONDITIONS = ("normal", "amd", "cataract", "glaucoma", "refractive", "retinopathy")
DISORDERS = CONDITIONS[1:]
CLASS_TO_INDEX = {"human": 0, "non_human": 1}


@dataclass(frozen=True)
class ManifestRecord:
    path: str
    class_label: str
    condition: str
    split: str
    sha256: str
    width: int
    height: int


def read_manifest(path: str | Path) -> list[ManifestRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: invalid JSON: {exc}") from None
            try:
                records.append(
                    ManifestRecord(
                        path=obj["path"],
                        class_label=obj["class"],
                        condition=obj["condition"],
                        split=obj["split"],
                        sha256=obj["sha256"],
                        width=int(obj["width"]),
                        height=int(obj["height"]),
                    )
                )
            except KeyError as exc:
                raise ValueError(f"{path}: line {lineno}: missing field {exc}") from None
    return records


def select(
    records: list[ManifestRecord],
    *,
    condition: str | None = None,
    split: str | None = None,
    class_label: str | None = None,
) -> list[ManifestRecord]:
    """Filter records, preserving manifest order."""
    out = records
    if condition is not None:
        out = [r for r in out if r.condition == condition]
    if split is not None:
        out = [r for r in out if r.split == split]
    if class_label is not None:
        out = [r for r in out if r.class_label == class_label]
    return out
