"""Feature-map comparison metrics and difference heatmaps.

Activation energy is the sum of absolute values over all channels and
positions; cosine similarity is the dot product of the flattened tensors
over the product of their Euclidean norms. Both accumulate in f64:
typical tensors (512x7x7 = 25088 elements) make f32 accumulation drift
measurable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BrokenEyesError, DegenerateInputError, ShapeMismatchError
from .filters import DISORDERS, Condition
from .kernels import store_u8
from .tensorio import read_tensor


@dataclass(frozen=True)
class MetricsRecord:
    """One row of a per-condition comparison report."""

    condition: Condition
    activation_energy: float
    cosine_similarity: float


def activation_energy(values: np.ndarray) -> float:
    """Sum of absolute activations across all positions and channels."""
    return float(np.sum(np.abs(values), dtype=np.float64))


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Angular similarity of the flattened tensors, clamped to [-1, 1].

    An all-zero vector has no direction; that is an error rather than a
    silent 0, which would fake orthogonality.
    """
    if a.shape != b.shape:
        raise ShapeMismatchError(f"tensor shapes differ: {a.shape} vs {b.shape}")
    af = a.reshape(-1).astype(np.float64)
    bf = b.reshape(-1).astype(np.float64)
    na = float(np.sqrt(af @ af))
    nb = float(np.sqrt(bf @ bf))
    if na == 0.0 or nb == 0.0:
        raise DegenerateInputError("cosine similarity of an all-zero tensor is undefined")
    sim = float(af @ bf) / (na * nb)
    return min(1.0, max(-1.0, sim))


def diff_heatmap(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Render the channel-mean absolute difference as an (H, W, 3) image.

    The scalar field is min-max normalized to [0, 1] (an all-equal field
    maps to 0) and colored with a linear blue-to-red map:
    v -> (round(255 v), 0, round(255 (1 - v))).
    """
    if a.shape != b.shape:
        raise ShapeMismatchError(f"tensor shapes differ: {a.shape} vs {b.shape}")
    d = np.mean(np.abs(a.astype(np.float64) - b.astype(np.float64)), axis=0)
    lo = float(d.min())
    hi = float(d.max())
    if hi > lo:
        v = (d - lo) / (hi - lo)
    else:
        v = np.zeros_like(d)
    h, w = v.shape
    out = np.zeros((h, w, 3), dtype=np.uint8)
    out[:, :, 0] = store_u8(255.0 * v)
    out[:, :, 2] = store_u8(255.0 * (1.0 - v))
    return out


def compare_conditions(
    baseline_path: str | Path,
    disorder_tensors: dict[Condition, str | Path],
    threads: int = 0,
) -> list[MetricsRecord]:
    """Energy of each disorder tensor plus its similarity to the baseline.

    Records come back in the fixed disorder order regardless of the
    mapping's iteration order and of the worker count; a failing load is
    re-raised naming the offending condition.
    """
    baseline = read_tensor(baseline_path)
    for condition in DISORDERS:
        if condition not in disorder_tensors:
            raise BrokenEyesError(f"no tensor supplied for condition '{condition.value}'")

    def compare(condition: Condition) -> MetricsRecord:
        try:
            tensor = read_tensor(disorder_tensors[condition])
            return MetricsRecord(
                condition=condition,
                activation_energy=activation_energy(tensor),
                cosine_similarity=cosine_similarity(baseline, tensor),
            )
        except BrokenEyesError as exc:
            raise type(exc)(f"condition '{condition.value}': {exc}") from None

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(compare, DISORDERS))
    return [compare(condition) for condition in DISORDERS]


def _fmt(value: float) -> str:
    """Floats in reports carry 6 significant digits."""
    return format(value, ".6g")


def render_report(records: list[MetricsRecord], fmt: str) -> str:
    """Serialize records as a JSON array or a CSV table."""
    if fmt == "json":
        rows = [
            "{"
            + f'"condition":{json.dumps(r.condition.value)},'
            + f'"activation_energy":{_fmt(r.activation_energy)},'
            + f'"cosine_similarity":{_fmt(r.cosine_similarity)}'
            + "}"
            for r in records
        ]
        return "[" + ",".join(rows) + "]\n"
    if fmt == "csv":
        lines = ["condition,activation_energy,cosine_similarity"]
        for r in records:
            lines.append(
                f"{r.condition.value},{_fmt(r.activation_energy)},{_fmt(r.cosine_similarity)}"
            )
        return "\n".join(lines) + "\n"
    raise BrokenEyesError(f"unknown report format {fmt!r}; expected json or csv")


def write_report(records: list[MetricsRecord], path: str | Path, fmt: str) -> None:
    """Write the serialized report to `path`."""
    text = render_report(records, fmt)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise BrokenEyesError(f"cannot write report {path}: {exc}") from None
