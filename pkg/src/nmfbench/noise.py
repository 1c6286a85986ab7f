"""Synthetic image corruption: block occlusion and salt-and-pepper noise.

Corruption happens after normalization, in [0, 1] space, and uses exact
per-column pixel counts rather than Bernoulli trials, so corruption rates
are deterministic.  Every operation returns the corrupted matrix together
with a boolean mask of the pixels it touched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import Dataset

BLOCK_OCCLUSION = "block_occlusion"
SALT_PEPPER = "salt_pepper"
NO_NOISE = "none"

NOISE_KINDS = (BLOCK_OCCLUSION, SALT_PEPPER, NO_NOISE)


@dataclass(frozen=True)
class NoiseSpec:
    """One noise model and its parameters.

    block_size/fill_value apply to block occlusion, fraction/salt_ratio to
    salt-and-pepper.  Defaults mirror the benchmark protocol: a 10x10
    block filled with 0.5, or 40% of pixels at a 0.45 salt share.
    """

    kind: str = NO_NOISE
    block_size: int = 10
    fill_value: float = 0.5
    fraction: float = 0.4
    salt_ratio: float = 0.45
    seed: int = 0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError("fraction must lie in [0, 1]")
        if not 0.0 <= self.salt_ratio <= 1.0:
            raise ValueError("salt_ratio must lie in [0, 1]")
        if not 0.0 <= self.fill_value <= 1.0:
            raise ValueError("fill_value must lie in [0, 1]")
        if self.block_size < 1:
            raise ValueError("block_size must be positive")


def add_block_occlusion(ds: Dataset, spec: NoiseSpec) -> tuple[np.ndarray, np.ndarray]:
    """Occlude one square block per sample at a random position.

    For every column independently, a block_size x block_size region at a
    uniform-random valid top-left corner is set to fill_value.  Returns
    (corrupted matrix, boolean mask); exactly block_size**2 mask entries
    are set per column, and unmasked pixels are bit-identical to the
    input.
    """
    b = spec.block_size
    if b > min(ds.height, ds.width):
        raise ValueError(
            f"block_size {b} exceeds image dimensions {ds.height}x{ds.width}"
        )
    rng = np.random.default_rng(spec.seed)
    X = ds.X.copy()
    mask = np.zeros(X.shape, dtype=bool)
    offsets = np.arange(b)
    # images live in columns, flattened row-major: pixel (r, c) -> r*width + c
    for j in range(X.shape[1]):
        top = rng.integers(0, ds.height - b + 1)
        left = rng.integers(0, ds.width - b + 1)
        flat = ((top + offsets)[:, None] * ds.width + (left + offsets)[None, :]).ravel()
        X[flat, j] = spec.fill_value
        mask[flat, j] = True
    return X, mask


def add_salt_pepper(ds: Dataset, spec: NoiseSpec) -> tuple[np.ndarray, np.ndarray]:
    """Replace an exact count of random pixels per sample with 1.0 or 0.0.

    Per column, round(fraction*m) distinct pixels are drawn without
    replacement; the first round(salt_ratio*count) of them become salt
    (1.0, the normalized maximum) and the remainder pepper (0.0).  Returns
    (corrupted matrix, boolean mask).
    """
    rng = np.random.default_rng(spec.seed)
    m, n = ds.X.shape
    count = int(round(spec.fraction * m))
    n_salt = int(round(spec.salt_ratio * count))
    X = ds.X.copy()
    mask = np.zeros((m, n), dtype=bool)
    if count == 0:
        return X, mask
    for j in range(n):
        pixels = rng.choice(m, size=count, replace=False)
        X[pixels[:n_salt], j] = 1.0
        X[pixels[n_salt:], j] = 0.0
        mask[pixels, j] = True
    return X, mask


def apply_noise(ds: Dataset, spec: NoiseSpec) -> tuple[np.ndarray, np.ndarray]:
    """Dispatch on spec.kind; kind "none" returns an untouched copy."""
    if spec.kind == BLOCK_OCCLUSION:
        return add_block_occlusion(ds, spec)
    if spec.kind == SALT_PEPPER:
        return add_salt_pepper(ds, spec)
    if spec.kind == NO_NOISE:
        return ds.X.copy(), np.zeros(ds.X.shape, dtype=bool)
    raise ValueError(f"unknown noise kind {spec.kind!r}")
