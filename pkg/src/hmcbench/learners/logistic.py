"""Binary logistic regression by iteratively reweighted least squares.

Unregularized maximum likelihood with step-halving, so the training
log-likelihood never drops by more than numerical tolerance between
iterates.  On separable data the likelihood has no finite maximizer; the
loop then runs to ``logistic_max_iter`` and returns the current iterate
with ``converged`` False, which is expected behaviour rather than an
error.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import ClassifierSpec, check_n_features


def _sigmoid(eta: np.ndarray) -> np.ndarray:
    out = np.empty_like(eta)
    pos = eta >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-eta[pos]))
    e = np.exp(eta[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _log_likelihood(eta: np.ndarray, y: np.ndarray) -> float:
    # sum(y * eta - log(1 + exp(eta))), stable for large |eta|
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


@dataclass(frozen=True)
class LogisticModel:
    spec: ClassifierSpec
    coef: np.ndarray  # [intercept, w_1, ..., w_p]
    converged: bool
    n_iter: int
    class_arity: int = 2

    @property
    def n_features(self) -> int:
        return self.coef.shape[0] - 1

    def decision_values(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        check_n_features(self, X)
        return self.coef[0] + X @ self.coef[1:]

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        p = _sigmoid(self.decision_values(X))
        return np.column_stack([1.0 - p, p])


def fit_logistic(spec: ClassifierSpec, X: np.ndarray, y: np.ndarray) -> LogisticModel:
    """Fit P(y=1|x) on 0/1 labels; stops on relative log-likelihood change."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    design = np.column_stack([np.ones(X.shape[0]), X])
    w = np.zeros(design.shape[1])
    ll = _log_likelihood(design @ w, y)
    converged = False
    it = 0
    for it in range(1, spec.logistic_max_iter + 1):
        eta = design @ w
        mu = _sigmoid(eta)
        weights = np.maximum(mu * (1.0 - mu), 1e-12)
        hessian = design.T @ (design * weights[:, None])
        gradient = design.T @ (y - mu)
        try:
            step = np.linalg.solve(hessian, gradient)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(hessian, gradient, rcond=None)[0]
        scale = 1.0
        w_new, ll_new = w, ll
        for _ in range(40):
            candidate = w + scale * step
            ll_cand = _log_likelihood(design @ candidate, y)
            if ll_cand >= ll - 1e-8:
                w_new, ll_new = candidate, ll_cand
                break
            scale *= 0.5
        # relative change criterion in the style of GLM deviance control
        if abs(ll_new - ll) / (abs(ll_new) + 0.1) < spec.logistic_tol:
            w, ll = w_new, ll_new
            converged = True
            break
        w, ll = w_new, ll_new
    return LogisticModel(spec, w, converged, it)


def logistic_summary(model: LogisticModel) -> dict:
    return {"kind": "logistic", "class_arity": 2,
            "intercept": float(model.coef[0]),
            "coefficients": [float(c) for c in model.coef[1:]],
            "converged": model.converged, "n_iter": model.n_iter}
