"""Class-pairwise dissimilarity measures.

Two families are implemented.  Representative-based measures (RBD) reduce
each class to its centroid and apply a point metric.  Classifier-based
measures (CBD) train an auxiliary classifier and read separability off its
held-out behaviour: pairwise accuracy within a confusion-matrix subset,
euclidean distance between normalized confusion rows, or an All-vs-All
proxy that restricts the classifier's probability vector to a class pair.

Separability-style values grow with discriminability, so a MORE separable
pair is MORE dissimilar; clustering consumes the matrices as-is.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataio import Dataset, SplitPlan, monte_carlo_splits
from .learners import ClassifierSpec, OvaEnsemble, fit_ova, fit_single_multiclass


class NoEvidenceError(ValueError):
    """No instances were available to score a class pair."""


@dataclass(frozen=True)
class DissimilarityMatrix:
    """Symmetric nonnegative class-pairwise dissimilarities, zero diagonal."""

    n: int
    values: np.ndarray = field(repr=False)
    method_tag: str = ""

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.shape != (self.n, self.n):
            raise ValueError(f"expected a {self.n}x{self.n} matrix, got {v.shape}")
        if not np.allclose(v, v.T, rtol=0.0, atol=1e-12):
            raise ValueError("matrix is not symmetric within 1e-12")
        if np.any(np.diag(v) != 0.0):
            raise ValueError("diagonal must be exactly zero")
        if np.any(v < 0.0):
            raise ValueError("dissimilarities must be nonnegative")
        v = 0.5 * (v + v.T)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def to_csv(self, class_names=None) -> str:
        names = class_names or [str(i) for i in range(self.n)]
        lines = [",".join(str(c) for c in names)]
        for row in self.values:
            lines.append(",".join(f"{x:.17g}" for x in row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with rows = true class, columns = predicted class."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(self.counts, dtype=np.int64)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("confusion matrix must be square")
        if np.any(c < 0):
            raise ValueError("confusion counts must be nonnegative")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def n(self) -> int:
        return self.counts.shape[0]


def class_centroids(ds: Dataset) -> np.ndarray:
    """Per-class feature means, one row per class."""
    counts = ds.class_counts()
    if np.any(counts == 0):
        raise ValueError("every class needs at least one instance")
    sums = np.zeros((ds.n_classes, ds.n_features))
    np.add.at(sums, ds.labels, ds.features)
    return sums / counts[:, None]


def rbd_matrix(ds: Dataset, metric: str = "euclidean") -> DissimilarityMatrix:
    """Distances between class centroids (euclidean or cosine)."""
    cent = class_centroids(ds)
    if metric == "euclidean":
        diff = cent[:, None, :] - cent[None, :, :]
        values = np.sqrt((diff ** 2).sum(axis=2))
    elif metric == "cosine":
        norms = np.linalg.norm(cent, axis=1)
        if np.any(norms == 0.0):
            bad = int(np.flatnonzero(norms == 0.0)[0])
            raise ValueError(f"zero-norm centroid for class "
                             f"{ds.class_names[bad]!r}; cosine undefined")
        sim = (cent @ cent.T) / np.outer(norms, norms)
        values = 1.0 - np.clip(sim, -1.0, 1.0)
    else:
        raise ValueError(f"unknown metric: {metric!r}")
    np.fill_diagonal(values, 0.0)
    values = np.maximum(values, 0.0)
    return DissimilarityMatrix(ds.n_classes, 0.5 * (values + values.T),
                               f"rbd_{metric}")


def confusion_matrix(true_labels, predicted_labels, n: int) -> ConfusionMatrix:
    t = np.asarray(true_labels, dtype=np.int64)
    p = np.asarray(predicted_labels, dtype=np.int64)
    if t.shape != p.shape:
        raise ValueError("label arrays differ in length")
    if t.size and (t.min() < 0 or t.max() >= n or p.min() < 0 or p.max() >= n):
        raise ValueError(f"labels must lie in 0..{n - 1}")
    counts = np.zeros((n, n), dtype=np.int64)
    np.add.at(counts, (t, p), 1)
    return ConfusionMatrix(counts)


def confusion_subset_dissimilarity(M: ConfusionMatrix, j: int, k: int) -> float:
    """Accuracy restricted to the (j, k) block of the confusion matrix.

    (m_jj + m_kk) / (m_jk + m_kj + m_jj + m_kk); symmetric in (j, k).
    """
    c = M.counts
    hits = int(c[j, j]) + int(c[k, k])
    denom = hits + int(c[j, k]) + int(c[k, j])
    if denom == 0:
        raise NoEvidenceError(f"no evidence for class pair ({j}, {k})")
    return hits / denom


def ava_proxy_dissimilarity(probas, true_labels, j: int, k: int) -> float:
    """Pairwise accuracy of the two-class argmax proxy.

    Rows whose true label is j or k are rescored by comparing only the
    probabilities of classes j and k (ties go to the lower index); the
    result is the fraction of those rows the proxy labels correctly.
    """
    probas = np.asarray(probas, dtype=np.float64)
    t = np.asarray(true_labels, dtype=np.int64)
    a, b = (j, k) if j < k else (k, j)
    mask = (t == a) | (t == b)
    if not mask.any():
        raise NoEvidenceError(f"no instances of classes {j} or {k}")
    proxy = np.where(probas[mask, a] >= probas[mask, b], a, b)
    return float(np.mean(proxy == t[mask]))


def confusion_row_matrix(M: ConfusionMatrix) -> DissimilarityMatrix:
    """Euclidean distances between row-normalized confusion rows.

    Rows are normalized to class-conditional prediction distributions
    first; raw counts would measure class imbalance, not behaviour.
    """
    c = M.counts.astype(np.float64)
    sums = c.sum(axis=1)
    if np.any(sums == 0):
        bad = int(np.flatnonzero(sums == 0)[0])
        raise NoEvidenceError(f"class {bad} has an all-zero confusion row")
    rows = c / sums[:, None]
    diff = rows[:, None, :] - rows[None, :, :]
    values = np.sqrt((diff ** 2).sum(axis=2))
    np.fill_diagonal(values, 0.0)
    return DissimilarityMatrix(M.n, 0.5 * (values + values.T),
                               "confusion_rows")


@dataclass(frozen=True)
class CbdPlan:
    """How to estimate a classifier-based dissimilarity matrix.

    The auxiliary classifier is refit on ``mc_folds`` internal 90/10 Monte
    Carlo splits of the data it is given; per-fold matrices from held-out
    predictions are averaged entrywise.
    """

    classifier: ClassifierSpec
    scheme: str = "single_multiclass"  # or "ova"
    mc_folds: int = 10
    variant: str = "ava_proxy"  # or "confusion_subset" / "confusion_rows"

    def __post_init__(self):
        if self.scheme not in ("single_multiclass", "ova"):
            raise ValueError(f"unknown scheme: {self.scheme!r}")
        if self.variant not in ("ava_proxy", "confusion_subset", "confusion_rows"):
            raise ValueError(f"unknown variant: {self.variant!r}")
        if self.mc_folds < 2:
            raise ValueError("mc_folds must be at least 2")


def _fold_matrix(probas, preds, y_test, n, variant) -> np.ndarray:
    """One fold's dissimilarity matrix; entries without evidence are NaN."""
    values = np.zeros((n, n))
    if variant == "confusion_rows":
        conf = confusion_matrix(y_test, preds, n)
        counts = conf.counts.astype(np.float64)
        sums = counts.sum(axis=1)
        seen = sums > 0
        rows = np.divide(counts, np.where(seen, sums, 1.0)[:, None])
        diff = rows[:, None, :] - rows[None, :, :]
        values = np.sqrt((diff ** 2).sum(axis=2))
        values[~seen, :] = np.nan
        values[:, ~seen] = np.nan
        np.fill_diagonal(values, 0.0)
        return values
    if variant == "confusion_subset":
        conf = confusion_matrix(y_test, preds, n).counts
        diag = np.diag(conf).astype(np.float64)
        hits = diag[:, None] + diag[None, :]
        denom = hits + conf + conf.T
        with np.errstate(invalid="ignore", divide="ignore"):
            values = np.where(denom > 0, hits / denom, np.nan)
        np.fill_diagonal(values, 0.0)
        return values
    # ava_proxy
    for j in range(n):
        for k in range(j + 1, n):
            mask = (y_test == j) | (y_test == k)
            if not mask.any():
                values[j, k] = values[k, j] = np.nan
                continue
            proxy = np.where(probas[mask, j] >= probas[mask, k], j, k)
            d = float(np.mean(proxy == y_test[mask]))
            values[j, k] = values[k, j] = d
    return values


def cbd_matrix(ds: Dataset, plan: CbdPlan, seed: int,
               no_evidence: str = "error") -> DissimilarityMatrix:
    """Classifier-based dissimilarities averaged over internal MC folds.

    Each internal fold fits the plan's classifier on its 90% slice and
    scores the 10% holdout, so the matrix never sees data beyond what the
    caller passed in.  Entries lacking evidence in a fold are left out of
    that entry's average.  A pair with no evidence in any fold raises
    NoEvidenceError; pass ``no_evidence="default"`` to score such pairs
    0.5 (coin-flip separability) instead.
    """
    if no_evidence not in ("error", "default"):
        raise ValueError("no_evidence must be 'error' or 'default'")
    n = ds.n_classes
    split_plan = SplitPlan(seed=seed, n_folds=plan.mc_folds, train_fraction=0.9)
    fold_values = []
    for train_idx, test_idx in monte_carlo_splits(ds, split_plan):
        if test_idx.size == 0:
            raise ValueError("internal split produced an empty holdout")
        X_tr, y_tr = ds.features[train_idx], ds.labels[train_idx]
        X_te, y_te = ds.features[test_idx], ds.labels[test_idx]
        if plan.scheme == "ova":
            model = fit_ova(plan.classifier, X_tr, y_tr, n_classes=n)
            probas = model.predict_scores(X_te)
        else:
            model = fit_single_multiclass(plan.classifier, X_tr, y_tr, n_classes=n)
            probas = model.predict_proba(X_te)
        preds = np.argmax(probas, axis=1)
        fold_values.append(_fold_matrix(probas, preds, y_te, n, plan.variant))

    stacked = np.array(fold_values)
    with np.errstate(invalid="ignore"):
        counts = np.sum(~np.isnan(stacked), axis=0)
        mean = np.nansum(stacked, axis=0) / np.where(counts > 0, counts, 1)
    missing = counts == 0
    np.fill_diagonal(missing, False)
    if missing.any():
        j, k = np.argwhere(missing)[0]
        if no_evidence == "error":
            raise NoEvidenceError(
                f"class pair ({ds.class_names[j]}, {ds.class_names[k]}) has "
                f"no evidence in any of the {plan.mc_folds} folds")
        mean[missing] = 0.5
    np.fill_diagonal(mean, 0.0)
    tag = f"cbd_{plan.scheme}_{plan.variant}"
    return DissimilarityMatrix(n, 0.5 * (mean + mean.T), tag)
