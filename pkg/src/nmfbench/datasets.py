"""Face-image dataset loading, normalization, synthesis and subsampling.

Data matrices use the pixels-by-samples convention: each image is
flattened in row-major (C) order into one column of ``X``.  Every loader
returns values scaled to [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass
class Dataset:
    """A labeled image collection as a pixels x samples matrix.

    X       (height*width, n_samples) array with entries in [0, 1]
    labels  (n_samples,) integer subject ids
    height, width  image dimensions after any downsampling
    """

    X: np.ndarray
    labels: np.ndarray
    height: int
    width: int

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.X.ndim != 2:
            raise ValueError("X must be a 2-D matrix")
        if self.height * self.width != self.X.shape[0]:
            raise ValueError(
                f"height*width = {self.height * self.width} does not match "
                f"pixel count {self.X.shape[0]}"
            )
        if self.labels.shape != (self.X.shape[1],):
            raise ValueError(
                f"got {self.labels.shape[0] if self.labels.ndim == 1 else '?'} "
                f"labels for {self.X.shape[1]} samples"
            )
        if not np.isfinite(self.X).all():
            raise ValueError("X contains non-finite entries")
        if self.X.size and (self.X.min() < 0.0 or self.X.max() > 1.0):
            raise ValueError("X entries must lie in [0, 1]")
        if self.labels.size and self.labels.min() < 0:
            raise ValueError("labels must be non-negative integers")

    @property
    def n_pixels(self) -> int:
        return self.X.shape[0]

    @property
    def n_samples(self) -> int:
        return self.X.shape[1]


def normalize(X: np.ndarray) -> np.ndarray:
    """Scale a non-negative matrix into [0, 1] by its global maximum.

    The single scalar divisor preserves the relative intensity of every
    entry (and of one image against another).  An all-zero matrix is
    returned unchanged; negative entries are rejected.
    """
    X = np.asarray(X, dtype=float)
    if not np.isfinite(X).all():
        raise ValueError("matrix contains non-finite entries")
    if X.size and X.min() < 0.0:
        raise ValueError("matrix contains negative entries; input must be non-negative")
    peak = X.max() if X.size else 0.0
    if peak > 0.0:
        return X / peak
    return X.copy()


def _read_pgm(path: Path) -> np.ndarray:
    """Read one 8-bit grayscale PGM image (ASCII "P2" or binary "P5").

    Only maxval 255 is accepted.  Header comments (``#`` to end of line)
    are allowed.  Returns a (height, width) uint8 array.
    """
    data = path.read_bytes()
    pos = 0

    def next_token() -> bytes:
        nonlocal pos
        while pos < len(data):
            ch = data[pos:pos + 1]
            if ch == b"#":
                while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif ch.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"{path}: truncated PGM header")
        return data[start:pos]

    magic = next_token()
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"{path}: unsupported image format (expected PGM P2 or P5)")
    try:
        width = int(next_token())
        height = int(next_token())
        maxval = int(next_token())
    except ValueError as exc:
        raise ValueError(f"{path}: malformed PGM header") from exc
    if width < 1 or height < 1:
        raise ValueError(f"{path}: invalid PGM dimensions {width}x{height}")
    if maxval != 255:
        raise ValueError(f"{path}: unsupported PGM maxval {maxval} (only 255 is accepted)")

    if magic == b"P5":
        pos += 1  # exactly one whitespace byte separates maxval from the raster
        raster = data[pos:pos + width * height]
        if len(raster) < width * height:
            raise ValueError(f"{path}: truncated pixel data")
        return np.frombuffer(raster, dtype=np.uint8).reshape(height, width)

    tokens = data[pos:].split()
    if len(tokens) < width * height:
        raise ValueError(f"{path}: truncated pixel data")
    try:
        values = [int(t) for t in tokens[: width * height]]
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric pixel data") from exc
    img = np.array(values, dtype=np.int64)
    if img.min() < 0 or img.max() > 255:
        raise ValueError(f"{path}: pixel values outside [0, 255]")
    return img.astype(np.uint8).reshape(height, width)


def load_image_dataset(root_path: str | Path, reduce: int = 1) -> Dataset:
    """Load a ``root/<subject_dir>/<image>.pgm`` tree into a Dataset.

    Images are decimated by keeping every ``reduce``-th pixel along both
    axes (so the output is height//reduce x width//reduce), flattened in
    row-major order into columns of X, and globally normalized to [0, 1].
    Subjects are labeled 0..n_subjects-1 in lexicographic directory order.

    All images in the tree must share identical dimensions; any file that
    is not an 8-bit maxval-255 PGM is rejected with an error naming it.
    """
    if reduce < 1:
        raise ValueError("reduce must be a positive integer")
    root = Path(root_path)
    if not root.is_dir():
        raise FileNotFoundError(f"dataset root {root} is not a readable directory")
    subject_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if not subject_dirs:
        raise ValueError(f"{root} contains no subject subdirectories")

    columns: list[np.ndarray] = []
    labels: list[int] = []
    full_shape: tuple[int, int] | None = None
    for label, subject_dir in enumerate(subject_dirs):
        files = sorted(subject_dir.glob("*.pgm"))
        if not files:
            raise ValueError(f"{subject_dir} contains no .pgm images")
        for f in files:
            img = _read_pgm(f)
            if full_shape is None:
                full_shape = img.shape
            elif img.shape != full_shape:
                raise ValueError(
                    f"{f}: image dimensions {img.shape[0]}x{img.shape[1]} differ "
                    f"from {full_shape[0]}x{full_shape[1]}"
                )
            new_h, new_w = img.shape[0] // reduce, img.shape[1] // reduce
            if new_h < 1 or new_w < 1:
                raise ValueError(f"{f}: reduce={reduce} leaves no pixels")
            small = img[::reduce, ::reduce][:new_h, :new_w]
            columns.append(small.astype(float).reshape(-1))
            labels.append(label)

    assert full_shape is not None
    height, width = full_shape[0] // reduce, full_shape[1] // reduce
    X = normalize(np.stack(columns, axis=1))
    return Dataset(X=X, labels=np.array(labels, dtype=int), height=height, width=width)


def synthesize_dataset(
    n_subjects: int,
    per_subject: int,
    height: int,
    width: int,
    noise_scale: float = 0.1,
    seed: int = 0,
) -> Dataset:
    """Generate a labeled dataset from per-subject uniform prototypes.

    Each subject gets one prototype image drawn uniformly from [0, 1];
    each of its samples is the prototype plus an independent uniform
    perturbation in [-noise_scale, noise_scale], clipped back to [0, 1].
    Deterministic for a fixed seed.
    """
    if min(n_subjects, per_subject, height, width) < 1:
        raise ValueError("all counts and dimensions must be positive")
    if not 0.0 <= noise_scale < 1.0:
        raise ValueError("noise_scale must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    m = height * width
    columns = []
    labels = []
    for subject in range(n_subjects):
        prototype = rng.random(m)
        for _ in range(per_subject):
            sample = prototype + rng.uniform(-noise_scale, noise_scale, size=m)
            columns.append(np.clip(sample, 0.0, 1.0))
            labels.append(subject)
    X = np.stack(columns, axis=1)
    return Dataset(X=X, labels=np.array(labels, dtype=int), height=height, width=width)


def subsample(ds: Dataset, fraction: float, seed: int) -> Dataset:
    """Keep floor(fraction*n) columns chosen uniformly without replacement.

    Labels follow their columns, so column i of the output and label i of
    the output come from the same input sample.  Deterministic per seed.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must lie in (0, 1]")
    n = ds.n_samples
    # tiny slack keeps exact products like 0.7*10 from flooring one short
    size = int(n * fraction + 1e-9)
    if size < 1:
        raise ValueError(f"fraction {fraction} keeps no samples of {n}")
    idx = np.random.default_rng(seed).permutation(n)[:size]
    return Dataset(
        X=ds.X[:, idx].copy(),
        labels=ds.labels[idx].copy(),
        height=ds.height,
        width=ds.width,
    )
