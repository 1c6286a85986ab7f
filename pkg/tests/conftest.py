"""Shared test helpers: PGM writers and the desk-scale benchmark dataset."""

from pathlib import Path

import numpy as np

from nmfbench.datasets import Dataset, normalize


def write_pgm_p5(path: Path, img: np.ndarray) -> None:
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode())
        f.write(np.asarray(img, dtype=np.uint8).tobytes())


def write_pgm_p2(path: Path, img: np.ndarray, maxval: int = 255) -> None:
    h, w = img.shape
    rows = "\n".join(" ".join(str(int(v)) for v in row) for row in img)
    path.write_text(f"P2\n# ascii variant\n{w} {h}\n{maxval}\n{rows}\n")


def make_pgm_tree(root: Path, n_subjects: int, per_subject: int,
                  height: int, width: int, seed: int = 0, binary: bool = True) -> None:
    """Write a root/<subject>/<image>.pgm tree of random images."""
    rng = np.random.default_rng(seed)
    for s in range(n_subjects):
        sdir = root / f"s{s:02d}"
        sdir.mkdir(parents=True)
        for i in range(per_subject):
            img = rng.integers(0, 256, size=(height, width))
            target = sdir / f"{i}.pgm"
            if binary:
                write_pgm_p5(target, img)
            else:
                write_pgm_p2(target, img)


def outlier_shot_dataset(seed: int, n_subjects: int = 20, per_subject: int = 10,
                         height: int = 16, width: int = 14, n_outliers: int = 3,
                         wobble: float = 0.05, spike_p: float = 0.5) -> Dataset:
    """Desk-scale stand-in for a face corpus with damaged shots.

    Most samples of a subject are small perturbations of its prototype;
    the last ``n_outliers`` shots per subject are saturated random-spike
    images (think overexposed or occluded photographs).  Those outlier
    columns carry little subject information and are what a column-robust
    factorization is expected to discount.
    """
    rng = np.random.default_rng(seed)
    m = height * width
    columns, labels = [], []
    for subject in range(n_subjects):
        prototype = rng.random(m)
        for shot in range(per_subject):
            if shot < per_subject - n_outliers:
                columns.append(np.clip(prototype + rng.uniform(-wobble, wobble, m), 0.0, 1.0))
            else:
                columns.append((rng.random(m) < spike_p).astype(float))
            labels.append(subject)
    X = normalize(np.stack(columns, axis=1))
    return Dataset(X=X, labels=np.array(labels), height=height, width=width)
