"""Dataset ingestion, stratified splitting, and synthetic data generation.

Datasets are immutable after load: a float64 feature matrix plus dense 0-based
integer class labels. CSV is the only on-disk format (comma separator,
optional single header row, '.' decimal point); the label column may hold
arbitrary tokens, which are mapped to dense indexes in first-appearance order
so that reloading a re-serialized file reproduces the same labels.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import ConfigError, DataError
from .rng import RngStream

MISSING_TOKENS = {"", "?", "na", "nan", "n/a"}


@dataclass
class Dataset:
    name: str
    features: np.ndarray  # (n_instances, n_features) float64
    labels: np.ndarray  # (n_instances,) int64, dense 0..n_classes-1
    feature_names: list[str] | None = None

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0


@dataclass(frozen=True)
class Split:
    """Disjoint train/test index sets covering every instance exactly once."""

    train_indices: np.ndarray
    test_indices: np.ndarray


def _validate_classes(labels: np.ndarray, name: str) -> None:
    counts = np.bincount(labels)
    if len(counts) < 2:
        raise DataError(f"{name}: dataset has a single class; nothing to classify")
    thin = np.flatnonzero(counts < 2)
    if thin.size:
        raise DataError(
            f"{name}: class index {thin[0]} has {counts[thin[0]]} instance(s); "
            "every class needs at least 2 for a stratified split"
        )


def load_csv(path, label_column: int | str = -1, has_header: bool = True,
             name: str | None = None) -> Dataset:
    """Load a numeric-feature CSV with one label column.

    Rows containing missing cells (empty, '?', 'NA', 'NaN') are an error, as
    are non-numeric feature cells; the error names the offending position and
    counts how many rows were affected.
    """
    path = str(path)
    with open(path, newline="", encoding="utf-8") as f:
        rows = [row for row in csv.reader(f) if row]
    if not rows:
        raise DataError(f"{path}: file is empty")

    header: list[str] | None = None
    if has_header:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        if not rows:
            raise DataError(f"{path}: no data rows after the header")

    n_cols = len(rows[0])
    if isinstance(label_column, str):
        if header is None:
            raise ConfigError("label column given by name requires a header row")
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise ConfigError(f"label column {label_column!r} not in header {header}")
    else:
        label_idx = label_column % n_cols

    missing: list[tuple[int, int]] = []
    bad_rows: set[int] = set()
    features: list[list[float]] = []
    label_tokens: list[str] = []
    for r, row in enumerate(rows):
        if len(row) != n_cols:
            raise DataError(f"{path}: row {r} has {len(row)} columns, expected {n_cols}")
        for c, cell in enumerate(row):
            if cell.strip().lower() in MISSING_TOKENS:
                missing.append((r, c))
                bad_rows.add(r)
        if r in bad_rows:
            continue
        vals = []
        for c, cell in enumerate(row):
            if c == label_idx:
                continue
            try:
                vals.append(float(cell))
            except ValueError:
                raise DataError(f"{path}: unparseable cell at row {r}, column {c}: {cell!r}")
        features.append(vals)
        label_tokens.append(row[label_idx].strip())

    if missing:
        r, c = missing[0]
        raise DataError(
            f"{path}: {len(bad_rows)} row(s) contain missing values "
            f"(first at row {r}, column {c}); clean the file before loading"
        )

    # dense label mapping, first-appearance order
    mapping: dict[str, int] = {}
    labels = []
    for tok in label_tokens:
        if tok not in mapping:
            mapping[tok] = len(mapping)
        labels.append(mapping[tok])

    ds = Dataset(
        name=name or path,
        features=np.asarray(features, dtype=np.float64),
        labels=np.asarray(labels, dtype=np.int64),
        feature_names=[h for i, h in enumerate(header) if i != label_idx] if header else None,
    )
    if ds.features.ndim != 2 or ds.n_features < 1:
        raise DataError(f"{path}: no feature columns found")
    _validate_classes(ds.labels, path)
    return ds


def save_csv(dataset: Dataset, path) -> None:
    """Write a dataset back to CSV (features then label, full float precision)."""
    names = dataset.feature_names or [f"f{i}" for i in range(dataset.n_features)]
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow([*names, "label"])
        for x, y in zip(dataset.features, dataset.labels):
            w.writerow([*(repr(float(v)) for v in x), int(y)])


def stratified_split(dataset: Dataset, train_fraction: float, rng: RngStream) -> Split:
    """Per-class random split hitting train_fraction, both partitions non-empty.

    Classes are processed in label order and each class's indices are shuffled
    with the stream, so the split is a pure function of (dataset, seed).
    """
    if not 0.0 < train_fraction < 1.0:
        raise ConfigError(f"train_fraction must be in (0,1), got {train_fraction}")
    _validate_classes(dataset.labels, dataset.name)
    train: list[int] = []
    test: list[int] = []
    for c in range(dataset.n_classes):
        idx = [int(i) for i in np.flatnonzero(dataset.labels == c)]
        rng.shuffle(idx)
        n_c = len(idx)
        # round half up, then clamp so both sides keep at least one instance
        n_train = int(np.floor(train_fraction * n_c + 0.5))
        n_train = min(max(n_train, 1), n_c - 1)
        train.extend(idx[:n_train])
        test.extend(idx[n_train:])
    return Split(
        train_indices=np.asarray(sorted(train), dtype=np.int64),
        test_indices=np.asarray(sorted(test), dtype=np.int64),
    )


def generate_m_of_n(n_relevant: int, m: int, n_noise: int, n_instances: int,
                    rng: RngStream) -> Dataset:
    """Synthetic binary dataset whose label is 1 iff at least m of the first
    n_relevant bits are set; the remaining n_noise bits carry no information.

    The unique minimal optimal feature subset is the n_relevant relevant bits.
    """
    if m < 1 or m > n_relevant:
        raise ConfigError(f"m must satisfy 1 <= m <= n_relevant, got m={m}, n_relevant={n_relevant}")
    if n_noise < 0 or n_instances < 4:
        raise ConfigError("need n_noise >= 0 and at least 4 instances")
    d = n_relevant + n_noise
    features = np.empty((n_instances, d), dtype=np.float64)
    labels = np.empty(n_instances, dtype=np.int64)
    for i in range(n_instances):
        bits = [rng.bit() for _ in range(d)]
        features[i] = bits
        labels[i] = 1 if sum(bits[:n_relevant]) >= m else 0
    name = f"m-of-n-{n_relevant}-{m}-{n_noise}-{n_instances}"
    _validate_classes(labels, name)
    names = [f"rel{i}" for i in range(n_relevant)] + [f"noise{i}" for i in range(n_noise)]
    return Dataset(name=name, features=features, labels=labels, feature_names=names)
