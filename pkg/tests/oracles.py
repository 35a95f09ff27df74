"""Independent brute-force oracles the implementation is checked against.

Everything here is deliberately written the slow, obvious way (plain Python
loops, no shared helpers from the package) so a bug in the implementation
cannot hide in its oracle.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def brute_knn_classify(train_x, train_y, query, k, mask):
    """All-pairs KNN: squared distances over selected features, neighbors by
    (distance, train index), vote ties to the smallest class label."""
    selected = [i for i, m in enumerate(mask) if m]
    dists = []
    for idx, row in enumerate(train_x):
        d = 0.0
        for f in selected:
            d += (float(query[f]) - float(row[f])) ** 2
        dists.append((d, idx))
    dists.sort()
    votes: dict[int, int] = {}
    for d, idx in dists[:k]:
        lab = int(train_y[idx])
        votes[lab] = votes.get(lab, 0) + 1
    top = max(votes.values())
    return min(lab for lab, c in votes.items() if c == top)


def brute_error_rate(train_x, train_y, test_x, test_y, k, mask):
    wrong = 0
    for query, truth in zip(test_x, test_y):
        if brute_knn_classify(train_x, train_y, query, k, mask) != int(truth):
            wrong += 1
    return wrong / len(test_y)


def wilcoxon_enum_p(sample_a, sample_b):
    """Exact two-sided signed-rank p-value by enumerating every sign pattern."""
    diffs = [a - b for a, b in zip(sample_a, sample_b) if a != b]
    if not diffs:
        return 1.0
    m = len(diffs)
    # average ranks of |d| with ties
    pairs = sorted((abs(d), i) for i, d in enumerate(diffs))
    ranks = [0.0] * m
    i = 0
    while i < m:
        j = i
        while j < m and pairs[j][0] == pairs[i][0]:
            j += 1
        avg = (i + 1 + j) / 2.0
        for t in range(i, j):
            ranks[pairs[t][1]] = avg
        i = j
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    w_minus = sum(r for r, d in zip(ranks, diffs) if d < 0)
    observed = min(w_plus, w_minus)
    total = sum(ranks)
    hits = 0
    for signs in itertools.product((0, 1), repeat=m):
        wp = sum(r for r, s in zip(ranks, signs) if s)
        if min(wp, total - wp) <= observed:
            hits += 1
    return hits / 2 ** m


def exhaustive_best_fitness(evaluate, n_features):
    """Minimum fitness over every non-empty mask, checked one by one."""
    best = math.inf
    best_mask = None
    for bits in itertools.product((0, 1), repeat=n_features):
        if not any(bits):
            continue
        fit = evaluate(np.asarray(bits, dtype=np.uint8))
        if fit < best:
            best = fit
            best_mask = bits
    return best, best_mask
