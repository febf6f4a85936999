"""Deterministic eye-disorder image filters, corpus curation, and
feature-map comparison metrics."""

from .corpus import (
    CurationConfig,
    ImageRecord,
    Manifest,
    balance_classes,
    dedup_by_hash,
    filter_min_resolution,
    generate_dataset,
    read_manifest,
    resize_image,
    scan_directory,
    stratified_split,
    write_manifest,
)
from .filters import (
    AmdParams,
    CataractParams,
    Condition,
    DISORDERS,
    FilterParams,
    GlaucomaParams,
    RefractiveParams,
    RetinopathyParams,
    apply_amd,
    apply_cataract,
    apply_condition,
    apply_glaucoma,
    apply_refractive,
    apply_retinopathy,
    gaussian_blur,
    hsv_to_rgb,
    parse_condition,
    rgb_to_hsv,
)
from .kernels import BACKEND
from .metrics import (
    MetricsRecord,
    activation_energy,
    compare_conditions,
    cosine_similarity,
    diff_heatmap,
    write_report,
)
from .rng import Rng64, derive_seed, fnv1a_64
from .tensorio import read_tensor, write_tensor

__version__ = "0.1.0"

__all__ = [
    "AmdParams",
    "BACKEND",
    "CataractParams",
    "Condition",
    "CurationConfig",
    "DISORDERS",
    "FilterParams",
    "GlaucomaParams",
    "ImageRecord",
    "Manifest",
    "MetricsRecord",
    "RefractiveParams",
    "RetinopathyParams",
    "Rng64",
    "activation_energy",
    "apply_amd",
    "apply_cataract",
    "apply_condition",
    "apply_glaucoma",
    "apply_refractive",
    "apply_retinopathy",
    "balance_classes",
    "compare_conditions",
    "cosine_similarity",
    "dedup_by_hash",
    "derive_seed",
    "diff_heatmap",
    "filter_min_resolution",
    "fnv1a_64",
    "gaussian_blur",
    "generate_dataset",
    "hsv_to_rgb",
    "parse_condition",
    "read_manifest",
    "read_tensor",
    "resize_image",
    "rgb_to_hsv",
    "scan_directory",
    "stratified_split",
    "write_manifest",
    "write_report",
    "write_tensor",
]
