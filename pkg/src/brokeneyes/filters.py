"""Five eye-disorder image degradations plus the Normal identity.

Each filter is a pure function of (image, params, seed): glaucoma, AMD
and cataract carry no randomness at all, refractive blur and retinopathy
derive every draw from a SplitMix64 stream seeded by the caller. Masks
and blends are computed in f64 and rounded half away from zero at the
final store of each stage, so output bytes are reproducible across
platforms, thread counts and processing order.

Images are (H, W, 3) uint8 arrays.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InvalidParameterError
from .rng import Rng64


class Condition(enum.Enum):
    """The six visual conditions; NORMAL is the identity."""

    NORMAL = "normal"
    AMD = "amd"
    CATARACT = "cataract"
    GLAUCOMA = "glaucoma"
    REFRACTIVE_ERROR = "refractive"
    RETINOPATHY = "retinopathy"


#: Fixed order for reports and per-condition comparisons.
DISORDERS = (
    Condition.AMD,
    Condition.CATARACT,
    Condition.GLAUCOMA,
    Condition.REFRACTIVE_ERROR,
    Condition.RETINOPATHY,
)

_BY_SLUG = {c.value: c for c in Condition}


def parse_condition(name: str) -> Condition:
    """Case-insensitive condition lookup by slug name."""
    slug = name.strip().lower()
    if slug not in _BY_SLUG:
        valid = "|".join(c.value for c in Condition)
        raise InvalidParameterError(f"unknown condition {name!r}; expected one of {valid}")
    return _BY_SLUG[slug]


@dataclass(frozen=True)
class GlaucomaParams:
    """Tunnel-vision vignette: clear disc, linear fade ring, black beyond.

    Radii are fractions of min(W, H); the mask is smoothed with a
    Gaussian of sigma mask_blur_sigma_frac * min(W, H).
    """

    clear_radius_frac: float = 0.30
    fade_radius_frac: float = 0.55
    mask_blur_sigma_frac: float = 0.05

    def __post_init__(self):
        if not 0 < self.clear_radius_frac < self.fade_radius_frac <= 1.0:
            raise InvalidParameterError(
                "glaucoma radii must satisfy 0 < clear < fade <= 1, got "
                f"clear={self.clear_radius_frac} fade={self.fade_radius_frac}"
            )
        if self.mask_blur_sigma_frac < 0:
            raise InvalidParameterError("glaucoma mask blur sigma must be >= 0")


@dataclass(frozen=True)
class RefractiveParams:
    """Out-of-focus vision: one blur sigma drawn uniformly per image."""

    sigma_min: float = 2.0
    sigma_max: float = 6.0

    def __post_init__(self):
        if not 0 < self.sigma_min <= self.sigma_max:
            raise InvalidParameterError(
                f"refractive sigmas must satisfy 0 < min <= max, got "
                f"min={self.sigma_min} max={self.sigma_max}"
            )


@dataclass(frozen=True)
class AmdParams:
    """Central scotoma: opaque dark center fading out by fade_radius_frac."""

    opaque_radius_frac: float = 0.18
    fade_radius_frac: float = 0.35
    mask_blur_sigma_frac: float = 0.04

    def __post_init__(self):
        if not 0 < self.opaque_radius_frac < self.fade_radius_frac <= 1.0:
            raise InvalidParameterError(
                "amd radii must satisfy 0 < opaque < fade <= 1, got "
                f"opaque={self.opaque_radius_frac} fade={self.fade_radius_frac}"
            )
        if self.mask_blur_sigma_frac < 0:
            raise InvalidParameterError("amd mask blur sigma must be >= 0")


@dataclass(frozen=True)
class RetinopathyParams:
    """Scattered occlusions: random rotated black ellipses."""

    count_min: int = 5
    count_max: int = 15
    axis_min_frac: float = 0.02
    axis_max_frac: float = 0.08

    def __post_init__(self):
        if not 1 <= self.count_min <= self.count_max:
            raise InvalidParameterError(
                f"retinopathy counts must satisfy 1 <= min <= max, got "
                f"min={self.count_min} max={self.count_max}"
            )
        if not 0 < self.axis_min_frac <= self.axis_max_frac < 0.5:
            raise InvalidParameterError(
                "retinopathy axis fractions must satisfy 0 < min <= max < 0.5, got "
                f"min={self.axis_min_frac} max={self.axis_max_frac}"
            )


@dataclass(frozen=True)
class CataractParams:
    """Clouded lens: desaturation, blend toward white, then heavy blur."""

    saturation_scale: float = 0.35
    haze_strength: float = 0.15
    blur_sigma: float = 4.0

    def __post_init__(self):
        if not 0 <= self.saturation_scale <= 1:
            raise InvalidParameterError("cataract saturation_scale must be in [0, 1]")
        if not 0 <= self.haze_strength <= 1:
            raise InvalidParameterError("cataract haze_strength must be in [0, 1]")
        if self.blur_sigma < 0:
            raise InvalidParameterError("cataract blur_sigma must be >= 0")


@dataclass(frozen=True)
class FilterParams:
    """Bundle of per-disorder parameters, all defaulted."""

    glaucoma: GlaucomaParams = field(default_factory=GlaucomaParams)
    refractive: RefractiveParams = field(default_factory=RefractiveParams)
    amd: AmdParams = field(default_factory=AmdParams)
    retinopathy: RetinopathyParams = field(default_factory=RetinopathyParams)
    cataract: CataractParams = field(default_factory=CataractParams)


def rgb_to_hsv(r: int, g: int, b: int) -> tuple[float, float, float]:
    """Hexcone conversion of one 8-bit pixel to (h degrees, s, v)."""
    rf, gf, bf = float(r), float(g), float(b)
    mx = max(rf, gf, bf)
    mn = min(rf, gf, bf)
    c = mx - mn
    if c == 0.0:
        hp = 0.0
    elif rf >= gf and rf >= bf:
        hp = math.fmod((gf - bf) / c, 6.0)
        if hp < 0.0:
            hp += 6.0
    elif gf >= bf:
        hp = (bf - rf) / c + 2.0
    else:
        hp = (rf - gf) / c + 4.0
    s = c / mx if mx > 0.0 else 0.0
    return hp * 60.0, s, mx / 255.0


def hsv_to_rgb(h: float, s: float, v: float) -> tuple[int, int, int]:
    """Inverse hexcone conversion back to an 8-bit pixel."""
    hp = math.fmod(h / 60.0, 6.0)
    if hp < 0.0:
        hp += 6.0
    c = v * s
    xx = c * (1.0 - abs(math.fmod(hp, 2.0) - 1.0))
    m = v - c
    table = [(c, xx, 0.0), (xx, c, 0.0), (0.0, c, xx), (0.0, xx, c), (xx, 0.0, c), (c, 0.0, xx)]
    cr, cg, cb = table[min(int(hp), 5)]

    def store(x: float) -> int:
        return int(min(max(math.floor(x * 255.0 + 0.5), 0.0), 255.0))

    return store(cr + m), store(cg + m), store(cb + m)


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian blur with radius ceil(3 sigma); sigma 0 returns the input."""
    return kernels.gaussian_blur_rgb(img, sigma)


def _masked_scale(img: np.ndarray, factor: np.ndarray) -> np.ndarray:
    """Per-pixel brightness scale by an (H, W) field in [0, 1]."""
    scaled = img.astype(np.float64) * factor[:, :, None]
    return kernels.store_u8(scaled)


def apply_glaucoma(img: np.ndarray, p: GlaucomaParams = GlaucomaParams()) -> np.ndarray:
    """Peripheral vision loss: keep a clear central disc, fade to black."""
    img = kernels._as_rgb(img)
    h, w, _ = img.shape
    m = min(w, h)
    alpha = kernels.radial_alpha(w, h, p.clear_radius_frac * m, p.fade_radius_frac * m)
    sigma = p.mask_blur_sigma_frac * m
    if sigma > 0:
        alpha = kernels.gaussian_blur_field(alpha, sigma)
    return _masked_scale(img, alpha)


def apply_refractive(
    img: np.ndarray, p: RefractiveParams = RefractiveParams(), seed: int = 0
) -> np.ndarray:
    """Defocus: one Gaussian blur whose sigma is drawn from [min, max)."""
    img = kernels._as_rgb(img)
    sigma = Rng64(seed).next_uniform(p.sigma_min, p.sigma_max)
    return kernels.gaussian_blur_rgb(img, sigma)


def apply_amd(img: np.ndarray, p: AmdParams = AmdParams()) -> np.ndarray:
    """Central scotoma: darken the center, untouched periphery."""
    img = kernels._as_rgb(img)
    h, w, _ = img.shape
    m = min(w, h)
    beta = kernels.radial_alpha(w, h, p.opaque_radius_frac * m, p.fade_radius_frac * m)
    sigma = p.mask_blur_sigma_frac * m
    if sigma > 0:
        beta = kernels.gaussian_blur_field(beta, sigma)
    return _masked_scale(img, 1.0 - beta)


def plan_ellipses(
    width: int, height: int, p: RetinopathyParams, seed: int
) -> np.ndarray:
    """Draw the occlusion plan for one image: (n, 6) rows of
    (cx, cy, a, b, cos_t, sin_t).

    The draw order per ellipse is fixed (center_x, center_y, a, b, theta)
    so a seed reproduces the exact same plan forever. Rotations go
    through math.cos/math.sin here so both kernel backends consume
    identical doubles.
    """
    rng = Rng64(seed)
    m = min(width, height)
    n = int(math.floor(rng.next_uniform(p.count_min, p.count_max + 1)))
    rows = np.empty((n, 6), dtype=np.float64)
    for i in range(n):
        cx = rng.next_uniform(0.0, float(width))
        cy = rng.next_uniform(0.0, float(height))
        a = rng.next_uniform(p.axis_min_frac * m, p.axis_max_frac * m)
        b = rng.next_uniform(p.axis_min_frac * m, p.axis_max_frac * m)
        theta = rng.next_uniform(0.0, math.pi)
        rows[i] = (cx, cy, a, b, math.cos(theta), math.sin(theta))
    return rows


def apply_retinopathy(
    img: np.ndarray, p: RetinopathyParams = RetinopathyParams(), seed: int = 0
) -> np.ndarray:
    """Scattered retinal damage: fill random rotated ellipses with black."""
    img = kernels._as_rgb(img)
    h, w, _ = img.shape
    return kernels.fill_ellipses(img, plan_ellipses(w, h, p, seed))


def apply_cataract(img: np.ndarray, p: CataractParams = CataractParams()) -> np.ndarray:
    """Clouded lens: desaturate, blend toward white, blur heavily.

    Each stage stores to uint8 before the next, per the fixed rounding
    contract.
    """
    img = kernels._as_rgb(img)
    out = kernels.desaturate(img, p.saturation_scale)
    hazed = (1.0 - p.haze_strength) * out.astype(np.float64) + p.haze_strength * 255.0
    out = kernels.store_u8(hazed)
    return kernels.gaussian_blur_rgb(out, p.blur_sigma)


def apply_condition(
    img: np.ndarray,
    condition: Condition,
    params: FilterParams = FilterParams(),
    seed: int = 0,
) -> np.ndarray:
    """Dispatch to the filter for `condition`; NORMAL copies the input."""
    if condition is Condition.NORMAL:
        return kernels._as_rgb(img).copy()
    if condition is Condition.GLAUCOMA:
        return apply_glaucoma(img, params.glaucoma)
    if condition is Condition.REFRACTIVE_ERROR:
        return apply_refractive(img, params.refractive, seed)
    if condition is Condition.AMD:
        return apply_amd(img, params.amd)
    if condition is Condition.RETINOPATHY:
        return apply_retinopathy(img, params.retinopathy, seed)
    if condition is Condition.CATARACT:
        return apply_cataract(img, params.cataract)
    raise InvalidParameterError(f"unhandled condition {condition!r}")
