"""Independent brute-force oracles for the clustering metrics.

These deliberately avoid the library implementations: accuracy comes from
exhaustive enumeration of label bijections on a zero-padded square
contingency table, NMI from direct summation of the joint-distribution
formula.  Keep them slow and obvious.
"""

import math
from collections import Counter
from itertools import permutations


def brute_force_accuracy(truth, pred) -> float:
    truth = list(truth)
    pred = list(pred)
    t_vals = sorted(set(truth))
    p_vals = sorted(set(pred))
    size = max(len(t_vals), len(p_vals))
    table = [[0] * size for _ in range(size)]
    for t, p in zip(truth, pred):
        table[t_vals.index(t)][p_vals.index(p)] += 1
    best = max(
        sum(table[perm[j]][j] for j in range(size))
        for perm in permutations(range(size))
    )
    return best / len(truth)


def brute_force_nmi(truth, pred) -> float:
    truth = list(truth)
    pred = list(pred)
    n = len(truth)
    count_t = Counter(truth)
    count_p = Counter(pred)
    count_joint = Counter(zip(truth, pred))
    h_t = -sum((c / n) * math.log(c / n) for c in count_t.values())
    h_p = -sum((c / n) * math.log(c / n) for c in count_p.values())
    if h_t == 0.0 and h_p == 0.0:
        return 1.0
    if h_t == 0.0 or h_p == 0.0:
        return 0.0
    mutual = sum(
        (c / n) * math.log((c / n) / ((count_t[t] / n) * (count_p[p] / n)))
        for (t, p), c in count_joint.items()
    )
    return 2.0 * mutual / (h_t + h_p)


def brute_force_min_wcss_2partition(points):
    """Exhaustively find the 2-partition minimizing within-cluster sum of
    squares; returns the best partition as a frozenset of frozensets."""
    import numpy as np

    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    best_cost = math.inf
    best_partition = None
    for mask in range(1, 2 ** n - 1):
        left = [i for i in range(n) if mask >> i & 1]
        right = [i for i in range(n) if not mask >> i & 1]
        cost = 0.0
        for side in (left, right):
            member = pts[side]
            center = member.mean(axis=0)
            cost += float(((member - center) ** 2).sum())
        if cost < best_cost:
            best_cost = cost
            best_partition = frozenset({frozenset(left), frozenset(right)})
    return best_partition, best_cost
