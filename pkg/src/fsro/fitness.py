"""Wrapper fitness: KNN error on a held-out split plus a subset-size penalty.

fitness(mask) = alpha * error_rate + (1 - alpha) * selected/total, both terms
in [0, 1]. The split is fixed per run, so fitness is a pure function of the
mask and is cached by mask bytes; cache hits are bit-identical to fresh
evaluations.

Tie rules are pinned for cross-platform determinism: a vote tie goes to the
smallest class index, and a distance tie at the k-th neighbor goes to the
smaller training-instance index. Neighbors are taken by k argmin-extraction
passes, which realizes exactly that (distance, index) lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConfigError, mask_key
from .data import Dataset, Split


@dataclass(frozen=True)
class FitnessParams:
    alpha: float = 0.9
    k_neighbors: int = 5
    train_fraction: float = 0.8

    @property
    def beta(self) -> float:
        return 1.0 - self.alpha

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in [0,1], got {self.alpha}")
        if self.k_neighbors < 1:
            raise ConfigError(f"k_neighbors must be >= 1, got {self.k_neighbors}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(f"train_fraction must be in (0,1), got {self.train_fraction}")


def minmax_normalize(train: np.ndarray, apply_to: np.ndarray) -> np.ndarray:
    """Scale columns of apply_to by (x - min)/(max - min) of the training data.

    Constant training columns map to 0. Values outside the training range are
    not clamped, so test features may fall outside [0, 1].
    """
    lo = train.min(axis=0)
    span = train.max(axis=0) - lo
    safe = np.where(span == 0.0, 1.0, span)
    out = (apply_to - lo) / safe
    out[:, span == 0.0] = 0.0
    return out


def _masked_dist2(a: np.ndarray, b: np.ndarray, selected: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances over selected features only, (len(a), len(b)).

    Accumulated feature by feature in index order so every code path that
    computes distances produces bit-identical values.
    """
    d2 = np.zeros((a.shape[0], b.shape[0]))
    for f in selected:
        d2 += (a[:, f, None] - b[None, :, f]) ** 2
    return d2


def _nearest_indices(d2: np.ndarray, k: int) -> np.ndarray:
    """Row-wise indices of the k nearest columns in (value, index) order.

    Each pass takes the first (lowest-index) minimum of every row, which is
    the documented distance tie rule. The input matrix is consumed.
    """
    rows = np.arange(d2.shape[0])
    cols = np.empty((d2.shape[0], k), dtype=np.int64)
    for j in range(k):
        nearest = d2.argmin(axis=1)
        cols[:, j] = nearest
        if j + 1 < k:
            d2[rows, nearest] = np.inf
    return cols


def _vote(neighbor_labels: np.ndarray, n_classes: int) -> np.ndarray:
    """Majority vote per row; ties go to the smallest class index."""
    counts = np.zeros((neighbor_labels.shape[0], n_classes), dtype=np.int64)
    rows = np.repeat(np.arange(neighbor_labels.shape[0]), neighbor_labels.shape[1])
    np.add.at(counts, (rows, neighbor_labels.ravel()), 1)
    return counts.argmax(axis=1)


def knn_predict(train_x: np.ndarray, train_y: np.ndarray, queries: np.ndarray,
                k: int, mask: np.ndarray) -> np.ndarray:
    """Predict class labels for each query row using masked Euclidean KNN."""
    selected = np.flatnonzero(mask)
    if selected.size == 0:
        raise ValueError("mask selects no features; repair masks before evaluating")
    if k > train_x.shape[0]:
        raise ValueError(f"k={k} exceeds training-set size {train_x.shape[0]}")
    d2 = _masked_dist2(queries, train_x, selected)
    neighbors = _nearest_indices(d2, k)
    n_classes = int(train_y.max()) + 1
    return _vote(train_y[neighbors], n_classes)


def knn_classify(train_x: np.ndarray, train_y: np.ndarray, query: np.ndarray,
                 k: int, mask: np.ndarray) -> int:
    """Single-query form of knn_predict."""
    return int(knn_predict(train_x, train_y, np.asarray(query)[None, :], k, mask)[0])


def error_rate(train_x: np.ndarray, train_y: np.ndarray, test_x: np.ndarray,
               test_y: np.ndarray, k: int, mask: np.ndarray) -> float:
    """Fraction of test instances misclassified by masked KNN."""
    pred = knn_predict(train_x, train_y, test_x, k, mask)
    return float(np.mean(pred != test_y))


def fitness_value(err: float, selected_count: int, total_features: int, alpha: float) -> float:
    return alpha * err + (1.0 - alpha) * (selected_count / total_features)


class FitnessEvaluator:
    """Cached mask -> fitness function over one normalized train/test split.

    Per-feature squared-difference matrices are precomputed once (skipped for
    very large splits, where per-mask recomputation with the same accumulation
    order gives bit-identical values), so each new mask costs one masked
    accumulation plus k argmin passes. Evaluation is pure; the per-run cache
    is a plain dict, safe under the GIL for concurrent reads with the writes
    serialized by the single-run ownership contract.
    """

    def __init__(self, dataset: Dataset, split: Split, params: FitnessParams):
        self.dataset = dataset
        self.split = split
        self.params = params
        train_raw = dataset.features[split.train_indices]
        test_raw = dataset.features[split.test_indices]
        self.train_x = minmax_normalize(train_raw, train_raw)
        self.test_x = minmax_normalize(train_raw, test_raw)
        self.train_y = dataset.labels[split.train_indices]
        self.test_y = dataset.labels[split.test_indices]
        if params.k_neighbors > self.train_x.shape[0]:
            raise ConfigError(
                f"k_neighbors={params.k_neighbors} exceeds training size {self.train_x.shape[0]}"
            )
        self.n_features = dataset.n_features
        self.n_classes = dataset.n_classes
        stack_bytes = 8 * self.n_features * len(self.test_y) * len(self.train_y)
        if stack_bytes <= 200_000_000:
            self._dist2_stack = (
                self.test_x.T[:, :, None] - self.train_x.T[:, None, :]
            ) ** 2
            self._buf = np.empty_like(self._dist2_stack[0])
        else:
            self._dist2_stack = None
        self._cache: dict[bytes, tuple[float, float]] = {}

    def _error(self, mask: np.ndarray) -> float:
        selected = np.flatnonzero(mask)
        if self._dist2_stack is not None:
            # 0 + x == x exactly, so seeding the buffer with the first plane
            # matches _masked_dist2's zeros-plus-accumulate bit for bit
            d2 = self._buf
            np.copyto(d2, self._dist2_stack[selected[0]])
            for f in selected[1:]:
                d2 += self._dist2_stack[f]
        else:
            d2 = _masked_dist2(self.test_x, self.train_x, selected)
        neighbors = _nearest_indices(d2, self.params.k_neighbors)
        pred = _vote(self.train_y[neighbors], self.n_classes)
        return float(np.mean(pred != self.test_y))

    def evaluate(self, mask: np.ndarray) -> float:
        return self.error_and_fitness(mask)[1]

    __call__ = evaluate

    def error_and_fitness(self, mask: np.ndarray) -> tuple[float, float]:
        key = mask_key(mask)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        selected_count = int(mask.sum())
        if selected_count == 0:
            raise ValueError("all-zero mask reached the evaluator; repair is missing upstream")
        err = self._error(mask)
        fit = fitness_value(err, selected_count, self.n_features, self.params.alpha)
        result = (err, fit)
        self._cache[key] = result
        return result

    def accuracy(self, mask: np.ndarray) -> float:
        return 1.0 - self.error_and_fitness(mask)[0]
