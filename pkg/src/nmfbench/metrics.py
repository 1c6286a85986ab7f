"""Clustering-quality metrics and the seeded k-means used to produce them.

Accuracy relabels predictions through an optimal one-to-one assignment
(Hungarian method on the contingency table) before counting matches, so
it is invariant under any renaming of cluster ids.  NMI uses natural-log
entropies; the base cancels in the 2*I / (H(a)+H(b)) ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass(frozen=True)
class MetricsReport:
    """Metric values from one benchmark trial.

    rmse_clean compares the reconstruction against the clean (pre-noise)
    matrix, rmse_noisy against the corrupted input the solver saw.
    input_digest identifies the corrupted matrix so that paired trials
    can be verified; it is not serialized to CSV.
    """

    dataset: str
    noise: str
    solver: str
    k: int
    trial: int
    seed: int
    rmse_clean: float
    rmse_noisy: float
    acc: float
    nmi: float
    runtime_ms: int
    input_digest: str = ""


def rmse(A: np.ndarray, B: np.ndarray) -> float:
    """Root mean square error over all entries of two same-shape matrices."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    diff = A - B
    return float(np.sqrt((diff * diff).mean()))


def _squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # |p|^2 - 2 p.c + |c|^2; clamp the tiny negatives the expansion can produce
    d2 = (
        (points * points).sum(axis=1)[:, None]
        - 2.0 * points @ centers.T
        + (centers * centers).sum(axis=1)[None, :]
    )
    return np.maximum(d2, 0.0)


def _plus_plus_init(points: np.ndarray, n_clusters: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((n_clusters, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = ((points - centers[0]) ** 2).sum(axis=1)
    for i in range(1, n_clusters):
        total = d2.sum()
        if total > 0.0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers[i] = points[idx]
        d2 = np.minimum(d2, ((points - centers[i]) ** 2).sum(axis=1))
    return centers


def kmeans(points: np.ndarray, n_clusters: int, seed: int = 0, max_iters: int = 300) -> np.ndarray:
    """Lloyd's algorithm with k-means++ seeding; returns (n,) labels.

    Seeding draws the first center uniformly and the rest proportionally
    to the squared distance from the nearest chosen center.  Iterates
    until the assignment reaches a fixpoint or max_iters; a cluster that
    comes up empty is reseeded to the point currently farthest from its
    assigned center.  Deterministic per seed.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-D (n_samples, n_features) array")
    n = pts.shape[0]
    if not 1 <= n_clusters <= n:
        raise ValueError(f"n_clusters={n_clusters} must lie in [1, {n}]")
    rng = np.random.default_rng(seed)
    centers = _plus_plus_init(pts, n_clusters, rng)
    labels: np.ndarray | None = None
    for _ in range(max_iters):
        d2 = _squared_distances(pts, centers)
        new_labels = d2.argmin(axis=1)
        assigned = d2[np.arange(n), new_labels]
        for c in range(n_clusters):
            if not (new_labels == c).any():
                far = int(assigned.argmax())
                centers[c] = pts[far]
                new_labels[far] = c
                assigned[far] = 0.0
        if labels is not None and np.array_equal(labels, new_labels):
            break
        labels = new_labels
        for c in range(n_clusters):
            members = labels == c
            if members.any():
                centers[c] = pts[members].mean(axis=0)
    assert labels is not None
    return labels


def within_cluster_ss(points: np.ndarray, labels: np.ndarray) -> float:
    """Sum of squared distances of points to their cluster means."""
    pts = np.asarray(points, dtype=float)
    total = 0.0
    for c in np.unique(labels):
        members = pts[labels == c]
        diff = members - members.mean(axis=0)
        total += float((diff * diff).sum())
    return total


def kmeans_best_of(points: np.ndarray, n_clusters: int, seed: int = 0,
                   restarts: int = 10, max_iters: int = 300) -> np.ndarray:
    """Best of several seeded k-means runs by within-cluster sum of squares.

    Restart seeds derive deterministically from ``seed``; ties keep the
    earliest run, so the result is reproducible.
    """
    best_labels: np.ndarray | None = None
    best_wcss = np.inf
    for r in range(restarts):
        labels = kmeans(points, n_clusters, seed=seed * 1000003 + r, max_iters=max_iters)
        wcss = within_cluster_ss(points, labels)
        if wcss < best_wcss:
            best_wcss = wcss
            best_labels = labels
    assert best_labels is not None
    return best_labels


def _as_labels(seq) -> np.ndarray:
    arr = np.asarray(seq, dtype=int)
    if arr.ndim != 1:
        raise ValueError("labels must be a 1-D sequence")
    return arr


def align_labels(pred, truth) -> np.ndarray:
    """Relabel pred by the truth-label bijection that maximizes matches.

    The mapping comes from an optimal assignment on the contingency
    table.  Predicted labels left unmatched (possible when pred has more
    distinct labels than truth) map to fresh labels that never equal any
    truth label.
    """
    pred = _as_labels(pred)
    truth = _as_labels(truth)
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.shape[0]} vs {truth.shape[0]}")
    t_values, t_idx = np.unique(truth, return_inverse=True)
    p_values, p_idx = np.unique(pred, return_inverse=True)
    contingency = np.zeros((t_values.size, p_values.size), dtype=np.int64)
    np.add.at(contingency, (t_idx, p_idx), 1)
    rows, cols = linear_sum_assignment(contingency, maximize=True)
    mapping = {p_values[c]: t_values[r] for r, c in zip(rows, cols)}
    fresh = int(t_values.max()) + 1
    out = np.empty_like(pred)
    for i, p in enumerate(pred):
        if p not in mapping:
            mapping[p] = fresh
            fresh += 1
        out[i] = mapping[p]
    return out


def accuracy(truth, pred) -> float:
    """Fraction of samples whose optimally-relabeled prediction matches."""
    truth = _as_labels(truth)
    aligned = align_labels(pred, truth)
    return float((aligned == truth).mean())


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts / n
    return float(-(p * np.log(p)).sum())


def nmi(truth, pred) -> float:
    """Normalized mutual information 2*I(a,b) / (H(a)+H(b)) in [0, 1].

    Entropies use the natural log and come from the empirical joint
    distribution (0*log 0 := 0 via omission).  Two constant labelings
    agree perfectly (1.0); exactly one constant labeling shares no
    information (0.0).
    """
    truth = _as_labels(truth)
    pred = _as_labels(pred)
    if truth.shape != pred.shape:
        raise ValueError(f"length mismatch: {truth.shape[0]} vs {pred.shape[0]}")
    n = truth.size
    if n == 0:
        raise ValueError("labelings must be non-empty")
    h_t = _entropy(np.unique(truth, return_counts=True)[1], n)
    h_p = _entropy(np.unique(pred, return_counts=True)[1], n)
    if h_t == 0.0 and h_p == 0.0:
        return 1.0
    if h_t == 0.0 or h_p == 0.0:
        return 0.0
    joint_counts = np.unique(np.stack([truth, pred], axis=1), axis=0, return_counts=True)[1]
    h_joint = _entropy(joint_counts, n)
    mutual = max(h_t + h_p - h_joint, 0.0)
    return min(2.0 * mutual / (h_t + h_p), 1.0)
