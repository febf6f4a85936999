"""Deterministic randomness primitives.

Filters must produce byte-identical output for a given (image, params,
seed) on every platform and regardless of batch processing order, so the
usual library RNGs are replaced by two fixed integer recurrences:

* SplitMix64 supplies the per-filter random draws.
* FNV-1a (64-bit) hashes an image path into a per-image seed, which makes
  parallel batch runs order-independent: each image's stream depends only
  on the global seed and its own path.
"""

from __future__ import annotations

from .errors import InvalidParameterError

_MASK64 = (1 << 64) - 1

_FNV_OFFSET_BASIS = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

_SPLITMIX_GOLDEN = 0x9E3779B97F4A7C15


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a hash of a byte string."""
    h = _FNV_OFFSET_BASIS
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & _MASK64
    return h


def derive_seed(global_seed: int, image_path: bytes | str) -> int:
    """Per-image seed: global seed XORed with the FNV-1a hash of the path.

    Pure function of its inputs, so any number of workers can process a
    batch in any order and still reproduce the single-threaded result.
    """
    if isinstance(image_path, str):
        image_path = image_path.encode("utf-8")
    return (global_seed & _MASK64) ^ fnv1a_64(image_path)


class Rng64:
    """SplitMix64 generator with a 64-bit state.

    The recurrence (golden-ratio increment followed by two xorshift
    multiply finalization steps) is integer-only, so identical seeds give
    identical streams on every platform.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _SPLITMIX_GOLDEN) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_uniform(self, lo: float, hi: float) -> float:
        """Uniform draw in [lo, hi) from the top 53 bits of the next output."""
        if lo > hi:
            raise InvalidParameterError(f"invalid range: lo={lo} > hi={hi}")
        u = (self.next_u64() >> 11) * 2.0**-53
        return lo + u * (hi - lo)
