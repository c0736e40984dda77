"""Probabilistic classifiers: CART, binary logistic regression, and the
single-multiclass / One-vs-All wrappers built on them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import (ClassifierSpec, ConstantModel, DegenerateLabelsError,
                   DEFAULT_CP_GRID, fit_constant, predict_labels,
                   stratified_fold_ids)
from .cart import CartModel, cart_summary, fit_cart, prune_accuracy_path
from .logistic import LogisticModel, fit_logistic, logistic_summary


def _validate_training(X, y):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError("X must be 2-D with one row per label")
    if X.shape[0] < 2:
        raise DegenerateLabelsError("need at least 2 training rows")
    if np.unique(y).size < 2:
        raise DegenerateLabelsError(
            "single-class training data; use a constant model instead")
    return X, y


def fit(spec: ClassifierSpec, X, y, n_classes: int | None = None):
    """Fit one classifier on integer labels 0..n_classes-1.

    CART accepts any arity; logistic regression is binary only (larger
    problems go through One-vs-All or a hierarchy).  Raises
    DegenerateLabelsError when only one class is present.
    """
    X, y = _validate_training(X, y)
    arity = int(y.max()) + 1 if n_classes is None else int(n_classes)
    if spec.kind == "cart":
        return fit_cart(spec, X, y, arity)
    if arity != 2:
        raise ValueError("logistic regression is binary; "
                         "wrap it in OVA or a hierarchy for more classes")
    return fit_logistic(spec, X, y)


def fit_single_multiclass(spec: ClassifierSpec, X, y, n_classes: int | None = None):
    """One model for the full label space (CART is natively multi-class)."""
    return fit(spec, X, y, n_classes)


@dataclass(frozen=True)
class OvaEnsemble:
    """One-vs-All ensemble: one binary model per class.

    ``predict_scores`` returns each class's positive-vs-rest probability
    (columns do not sum to 1); the hard prediction is the score argmax with
    ties toward the lowest class index.
    """

    models: tuple
    class_arity: int
    n_features: int

    def predict_scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        cols = [m.predict_proba(X)[:, 1] for m in self.models]
        return np.column_stack(cols)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_scores(X), axis=1)


def fit_ova(spec: ClassifierSpec, X, y, n_classes: int | None = None) -> OvaEnsemble:
    """Fit one positive-vs-rest binary model per class."""
    X, y = _validate_training(X, y)
    arity = int(y.max()) + 1 if n_classes is None else int(n_classes)
    if arity < 2:
        raise ValueError("need at least 2 classes")
    models = []
    for c in range(arity):
        y_bin = (y == c).astype(np.int64)
        if y_bin.min() == y_bin.max():
            models.append(fit_constant(y_bin, 2, X.shape[1], spec))
        else:
            models.append(fit(spec, X, y_bin, n_classes=2))
    return OvaEnsemble(tuple(models), arity, X.shape[1])


def predict_proba(model, X) -> np.ndarray:
    """Class-probability rows for a fitted model (rows sum to 1)."""
    return model.predict_proba(np.asarray(X, dtype=np.float64))


def model_summary(model) -> dict:
    """JSON-serializable view of a fitted model for inspection."""
    if isinstance(model, CartModel):
        return cart_summary(model)
    if isinstance(model, LogisticModel):
        return logistic_summary(model)
    if isinstance(model, ConstantModel):
        return {"kind": "constant", "class_arity": model.class_arity,
                "counts": list(model.counts)}
    if isinstance(model, OvaEnsemble):
        return {"kind": "ova", "class_arity": model.class_arity,
                "models": [model_summary(m) for m in model.models]}
    raise TypeError(f"unknown model type: {type(model).__name__}")


__all__ = [
    "ClassifierSpec", "ConstantModel", "DegenerateLabelsError",
    "DEFAULT_CP_GRID", "CartModel", "LogisticModel", "OvaEnsemble",
    "fit", "fit_single_multiclass", "fit_ova", "fit_constant",
    "predict_proba", "predict_labels", "model_summary",
    "prune_accuracy_path", "stratified_fold_ids",
]
