"""Dataset ingestion, validation, and Monte Carlo train/test resampling.

A dataset is a dense feature matrix plus one integer class label per row.
Splitting is stratified per class so that every class keeps at least one
training instance even under aggressive train fractions, which several of
the small benchmark datasets require.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Raised for unparseable, inconsistent, or degenerate input data."""


@dataclass(frozen=True)
class Dataset:
    """Immutable feature matrix with integer class labels.

    ``source_rows`` tracks which rows of the originally loaded table each
    row of this (possibly sliced) dataset came from; leakage audits compare
    these provenance ids against held-out index sets.
    """

    features: np.ndarray
    labels: np.ndarray
    class_names: tuple[str, ...]
    name: str = "dataset"
    source_rows: np.ndarray = field(repr=False, default=None)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def subset(self, rows, name: str | None = None) -> "Dataset":
        """Slice rows into a new dataset, carrying provenance along.

        Slices are allowed to lose classes entirely (e.g. a 10% test split
        of a 6-instance class); only ingestion enforces full class coverage.
        """
        rows = np.asarray(rows, dtype=np.intp)
        return _build_dataset(
            self.features[rows],
            self.labels[rows],
            self.class_names,
            name or self.name,
            source_rows=self.source_rows[rows],
            require_all_classes=False,
        )


def _build_dataset(features, labels, class_names, name, source_rows=None,
                   require_all_classes=True) -> Dataset:
    features = np.ascontiguousarray(features, dtype=np.float64)
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    if features.ndim != 2:
        raise DataError(f"features must be 2-D, got shape {features.shape}")
    if features.shape[0] != labels.shape[0]:
        raise DataError(
            f"row count mismatch: {features.shape[0]} feature rows vs "
            f"{labels.shape[0]} labels")
    if not np.all(np.isfinite(features)):
        bad = np.argwhere(~np.isfinite(features))[0]
        raise DataError(
            f"non-finite feature value at row {bad[0] + 1}, column {bad[1] + 1}")
    n_classes = len(class_names)
    if len(set(class_names)) != n_classes:
        raise DataError("duplicate class names")
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise DataError("label index out of range")
    if require_all_classes:
        counts = np.bincount(labels, minlength=n_classes)
        missing = [class_names[i] for i in np.flatnonzero(counts == 0)]
        if missing:
            raise DataError(f"classes with zero instances: {missing}")
    if source_rows is None:
        source_rows = np.arange(features.shape[0], dtype=np.int64)
    else:
        source_rows = np.ascontiguousarray(source_rows, dtype=np.int64)
    features.setflags(write=False)
    labels.setflags(write=False)
    source_rows.setflags(write=False)
    return Dataset(features, labels, tuple(class_names), name, source_rows)


def from_arrays(features, labels, class_names=None, name="dataset") -> Dataset:
    """Build a validated Dataset from in-memory arrays.

    ``labels`` may be integer indices (requires ``class_names``) or raw
    label strings, which are registered sorted lexicographically.
    """
    labels = np.asarray(labels)
    if class_names is None:
        names = sorted({str(v) for v in labels.tolist()})
        index = {c: i for i, c in enumerate(names)}
        labels = np.array([index[str(v)] for v in labels.tolist()], dtype=np.int64)
        class_names = names
    return _build_dataset(features, labels, tuple(class_names), name)


def load_csv(path, label_column, header: bool = True, name: str | None = None) -> Dataset:
    """Load a comma-separated file into a Dataset.

    ``label_column`` selects the class column by name (requires ``header``)
    or by 0-based position.  Every other cell must parse as a finite real
    number; violations are reported with their row and column.  Class names
    are sorted lexicographically and labels remapped to indices.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows:
        raise DataError(f"empty file: {path}")

    if header:
        columns = [c.strip() for c in rows[0]]
        if len(set(columns)) != len(columns):
            dupes = sorted({c for c in columns if columns.count(c) > 1})
            raise DataError(f"duplicate column names: {dupes}")
        data_rows = rows[1:]
    else:
        columns = [str(i) for i in range(len(rows[0]))]
        data_rows = rows

    if isinstance(label_column, str):
        if not header:
            raise DataError("label column by name requires a header row")
        if label_column not in columns:
            raise DataError(f"label column {label_column!r} not found "
                            f"(columns: {columns})")
        label_idx = columns.index(label_column)
    else:
        label_idx = int(label_column)
        if not 0 <= label_idx < len(columns):
            raise DataError(f"label column index {label_idx} out of range")

    n_cols = len(columns)
    feat_cols = [j for j in range(n_cols) if j != label_idx]
    feats = np.empty((len(data_rows), len(feat_cols)), dtype=np.float64)
    raw_labels: list[str] = []
    for i, row in enumerate(data_rows):
        if len(row) != n_cols:
            raise DataError(f"row {i + 1}: expected {n_cols} cells, got {len(row)}")
        for out_j, j in enumerate(feat_cols):
            cell = row[j].strip()
            try:
                value = float(cell)
            except ValueError:
                raise DataError(
                    f"unparseable cell at row {i + 1}, column {columns[j]!r}: "
                    f"{cell!r}") from None
            if not math.isfinite(value):
                raise DataError(
                    f"non-finite value at row {i + 1}, column {columns[j]!r}: "
                    f"{cell!r}")
            feats[i, out_j] = value
        label = row[label_idx].strip()
        if not label:
            raise DataError(f"empty label at row {i + 1}")
        raw_labels.append(label)

    class_names = sorted(set(raw_labels))
    index = {c: k for k, c in enumerate(class_names)}
    labels = np.array([index[v] for v in raw_labels], dtype=np.int64)
    return _build_dataset(feats, labels, tuple(class_names),
                          name or path.stem)


def save_csv(ds: Dataset, path, label_column: str = "label") -> None:
    """Write a dataset back out so that ``load_csv`` round-trips exactly."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{j}" for j in range(ds.n_features)] + [label_column])
        for i in range(ds.n_rows):
            cells = [f"{v:.17g}" for v in ds.features[i]]
            cells.append(ds.class_names[ds.labels[i]])
            writer.writerow(cells)


@dataclass(frozen=True)
class SplitPlan:
    """Deterministic Monte Carlo resampling plan."""

    seed: int
    n_folds: int
    train_fraction: float

    def __post_init__(self):
        if self.n_folds < 1:
            raise ValueError("n_folds must be positive")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")


def _fold_rng(seed: int, fold: int) -> np.random.Generator:
    # Distinct stream per fold; pure function of (seed, fold).
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(fold,)))


def monte_carlo_splits(ds: Dataset, plan: SplitPlan):
    """Yield ``n_folds`` independent stratified (train, test) index pairs.

    Per class and fold the indices are shuffled with a fold-specific stream
    and the first ceil(train_fraction * count) go to training, so every
    class retains at least one training instance.  Index arrays are sorted,
    disjoint, and jointly cover all rows.
    """
    counts = ds.class_counts()
    if np.any(counts == 0):
        raise DataError("cannot split: a class has zero instances")
    per_class = [np.flatnonzero(ds.labels == c) for c in range(ds.n_classes)]
    splits = []
    for fold in range(plan.n_folds):
        rng = _fold_rng(plan.seed, fold)
        train_parts, test_parts = [], []
        for idx in per_class:
            perm = idx[rng.permutation(idx.size)]
            n_train = math.ceil(plan.train_fraction * idx.size)
            train_parts.append(perm[:n_train])
            test_parts.append(perm[n_train:])
        train = np.sort(np.concatenate(train_parts))
        test = np.sort(np.concatenate(test_parts)) if any(
            p.size for p in test_parts) else np.empty(0, dtype=np.intp)
        splits.append((train, test))
    return splits


def zscore_fit(X: np.ndarray):
    """Column means and stds for standardization; constant columns get std 1."""
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    return mean, std


def zscore_apply(X: np.ndarray, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    return (X - mean) / std


def make_two_level_gaussians(n_super: int = 4, n_sub: int = 4,
                             rows_per_class: int = 70, noise: float = 1.0,
                             seed: int = 0, name: str = "two_level") -> Dataset:
    """Synthetic benchmark with a planted two-level class structure.

    ``n_super`` well separated super-clusters sit along the x axis with
    growing gaps; each contains ``n_sub`` sub-classes offset along y with
    uneven spacing.  Class indices are assigned by a fixed permutation so
    that index order carries no spatial information.
    """
    n_classes = n_super * n_sub
    # super-cluster gaps keep both clustering styles balanced at the top;
    # sub-class gaps grow just enough that average link chains within a
    # super-cluster while 2-means still prefers the balanced split there
    if n_super <= 4:
        super_gaps = np.array([40.0, 48.0, 56.0])[:n_super - 1]
    else:
        super_gaps = 40.0 + 8.0 * np.arange(n_super - 1)
    super_x = np.concatenate([[0.0], np.cumsum(super_gaps)])
    if n_sub <= 4:
        sub_y = np.concatenate([[0.0], np.cumsum([4.0, 10.3, 13.0][:n_sub - 1])])
    else:
        sub_y = np.concatenate([[0.0], np.cumsum(4.0 + 3.0 * np.arange(n_sub - 1))])

    centers = np.array([(super_x[s], sub_y[b])
                        for s in range(n_super) for b in range(n_sub)])
    perm_rng = np.random.default_rng(np.random.SeedSequence(9172, spawn_key=(n_classes,)))
    perm = perm_rng.permutation(n_classes)

    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(77,)))
    feats = np.empty((n_classes * rows_per_class, 2))
    labels = np.empty(n_classes * rows_per_class, dtype=np.int64)
    for k in range(n_classes):
        lo = k * rows_per_class
        feats[lo:lo + rows_per_class] = centers[k] + noise * rng.standard_normal(
            (rows_per_class, 2))
        labels[lo:lo + rows_per_class] = perm[k]
    names = [f"c{k:02d}" for k in range(n_classes)]
    return _build_dataset(feats, labels, tuple(names), name)
