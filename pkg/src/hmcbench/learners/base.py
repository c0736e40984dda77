"""Classifier configuration and shared pieces of the learner contract.

Every fitted model exposes ``predict_proba(X) -> (m, class_arity)`` with
rows summing to 1, plus ``class_arity`` and ``n_features`` attributes.
Hard predictions are always the argmax with ties broken toward the lowest
class index.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_CP_GRID = (1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


class DegenerateLabelsError(ValueError):
    """Training data holds a single class; callers substitute a constant model."""


@dataclass(frozen=True)
class ClassifierSpec:
    """Configuration for the two supported learners.

    CART knobs follow the usual recursive-partitioning defaults (Gini
    impurity, minimum 20 rows to attempt a split, 7 per leaf, depth cap 30)
    with the complexity parameter chosen from ``cart_cp_grid`` by internal
    ``tuning_folds``-fold cross-validation.  Logistic regression is
    unregularized binary maximum likelihood via IRLS.
    """

    kind: str = "cart"
    cart_cp_grid: tuple[float, ...] = DEFAULT_CP_GRID
    cart_min_split: int = 20
    cart_min_bucket: int = 7
    cart_max_depth: int = 30
    logistic_max_iter: int = 25
    logistic_tol: float = 1e-8
    tuning_folds: int = 3

    def __post_init__(self):
        if self.kind not in ("cart", "logistic"):
            raise ValueError(f"unknown classifier kind: {self.kind!r}")
        grid = tuple(float(c) for c in self.cart_cp_grid)
        if not grid:
            raise ValueError("cart_cp_grid must be nonempty")
        if any(not 0.0 < c <= 1.0 for c in grid):
            raise ValueError("cart_cp_grid values must lie in (0, 1]")
        if any(later >= earlier for earlier, later in zip(grid, grid[1:])):
            raise ValueError("cart_cp_grid must be strictly decreasing")
        object.__setattr__(self, "cart_cp_grid", grid)
        if self.cart_min_bucket > self.cart_min_split:
            raise ValueError("cart_min_bucket must not exceed cart_min_split")
        for field_name in ("cart_min_split", "cart_min_bucket", "cart_max_depth",
                           "logistic_max_iter", "tuning_folds"):
            if getattr(self, field_name) < 1:
                raise ValueError(f"{field_name} must be positive")
        if self.logistic_tol <= 0:
            raise ValueError("logistic_tol must be positive")


@dataclass(frozen=True)
class ConstantModel:
    """Fallback model that always emits the training label distribution.

    Probabilities are Laplace smoothed, (count_c + 1) / (n + arity), so a
    constant model never outputs a hard 0 or 1.
    """

    class_arity: int
    counts: tuple[int, ...]
    n_features: int
    spec: ClassifierSpec | None = None

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        check_n_features(self, X)
        counts = np.asarray(self.counts, dtype=np.float64)
        proba = (counts + 1.0) / (counts.sum() + self.class_arity)
        return np.tile(proba, (X.shape[0], 1))


def fit_constant(y: np.ndarray, class_arity: int, n_features: int,
                 spec: ClassifierSpec | None = None) -> ConstantModel:
    counts = np.bincount(np.asarray(y, dtype=np.int64), minlength=class_arity)
    return ConstantModel(class_arity, tuple(int(c) for c in counts),
                         n_features, spec)


def check_n_features(model, X: np.ndarray) -> None:
    if X.ndim != 2:
        raise ValueError(f"feature matrix must be 2-D, got shape {X.shape}")
    if model.n_features >= 0 and X.shape[1] != model.n_features:
        raise ValueError(
            f"feature count mismatch: model expects {model.n_features} "
            f"columns, got {X.shape[1]}")


def predict_labels(model, X: np.ndarray) -> np.ndarray:
    """Hard predictions: row argmax, ties toward the lowest class index."""
    return np.argmax(model.predict_proba(X), axis=1)


def stratified_fold_ids(y: np.ndarray, n_folds: int) -> np.ndarray:
    """Deterministic per-class round-robin fold assignment (no RNG)."""
    y = np.asarray(y)
    ids = np.empty(y.shape[0], dtype=np.intp)
    for c in np.unique(y):
        rows = np.flatnonzero(y == c)
        ids[rows] = np.arange(rows.size) % n_folds
    return ids
