"""JSON tool configuration.

Schema (all sections optional, unknown keys rejected):

    {
      "filters": {
        "glaucoma":    {"clear_radius_frac": ..., "fade_radius_frac": ...,
                        "mask_blur_sigma_frac": ...},
        "refractive":  {"sigma_min": ..., "sigma_max": ...},
        "amd":         {"opaque_radius_frac": ..., "fade_radius_frac": ...,
                        "mask_blur_sigma_frac": ...},
        "retinopathy": {"count_min": ..., "count_max": ...,
                        "axis_min_frac": ..., "axis_max_frac": ...},
        "cataract":    {"saturation_scale": ..., "haze_strength": ...,
                        "blur_sigma": ...}
      },
      "curation": {"min_resolution": ..., "target_size": ...,
                   "split_ratios": [0.70, 0.15, 0.15],
                   "balance_tolerance": ..., "global_seed": ...},
      "seed": 0,
      "threads": 0
    }

Precedence everywhere: command-line flag > config file > built-in default.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import CurationConfig
from .errors import ConfigError, InvalidParameterError
from .filters import (
    AmdParams,
    CataractParams,
    FilterParams,
    GlaucomaParams,
    RefractiveParams,
    RetinopathyParams,
)

_FILTER_SECTIONS = {
    "glaucoma": GlaucomaParams,
    "refractive": RefractiveParams,
    "amd": AmdParams,
    "retinopathy": RetinopathyParams,
    "cataract": CataractParams,
}


@dataclass
class ToolConfig:
    filters: FilterParams = field(default_factory=FilterParams)
    curation: CurationConfig = field(default_factory=CurationConfig)
    seed: int | None = None
    threads: int | None = None


def _build_section(cls, section: dict, context: str):
    if not isinstance(section, dict):
        raise ConfigError(f"config section {context!r} must be an object")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(section) - known)
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r} in config section {context!r}")
    try:
        if "split_ratios" in section:
            section = dict(section, split_ratios=tuple(section["split_ratios"]))
        return cls(**section)
    except InvalidParameterError as exc:
        raise ConfigError(f"config section {context!r}: {exc}") from None


def parse_config(doc: dict) -> ToolConfig:
    """Validate a parsed JSON document into a ToolConfig."""
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = sorted(set(doc) - {"filters", "curation", "seed", "threads"})
    if unknown:
        raise ConfigError(f"unknown top-level config key {unknown[0]!r}")
    filters_doc = doc.get("filters", {})
    if not isinstance(filters_doc, dict):
        raise ConfigError("config section 'filters' must be an object")
    unknown = sorted(set(filters_doc) - set(_FILTER_SECTIONS))
    if unknown:
        raise ConfigError(f"unknown filter section {unknown[0]!r}")
    filter_kwargs = {
        name: _build_section(cls, filters_doc[name], f"filters.{name}")
        for name, cls in _FILTER_SECTIONS.items()
        if name in filters_doc
    }
    curation = _build_section(CurationConfig, doc.get("curation", {}), "curation")
    seed = doc.get("seed")
    threads = doc.get("threads")
    for name, value in (("seed", seed), ("threads", threads)):
        if value is not None and (not isinstance(value, int) or isinstance(value, bool)):
            raise ConfigError(f"config key {name!r} must be an integer")
    if seed is not None and not 0 <= seed < 2**64:
        raise ConfigError("config key 'seed' must fit in an unsigned 64-bit integer")
    if threads is not None and threads < 0:
        raise ConfigError("config key 'threads' must be >= 0")
    return ToolConfig(
        filters=FilterParams(**filter_kwargs),
        curation=curation,
        seed=seed,
        threads=threads,
    )


def load_config(path: str | Path | None) -> ToolConfig:
    """Read and validate a config file; None means all defaults."""
    if path is None:
        return ToolConfig()
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"no such config file: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return parse_config(doc)
