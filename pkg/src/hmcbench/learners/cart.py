"""Classification trees: Gini growing plus cost-complexity pruning.

The complexity parameter cp is scaled the way rpart scales it: pruning at
cp removes every subtree whose per-split reduction in training
misclassifications falls below cp times the root's misclassification
count, so cp = 1 collapses the tree to its root and cp -> 0 keeps the full
tree.  The pruned tree for a given cp is the smallest subtree minimizing
cost = misclassifications + alpha * #leaves, found by a bottom-up sweep.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .base import (ClassifierSpec, ConstantModel, DegenerateLabelsError,
                   check_n_features, fit_constant, stratified_fold_ids)

_MIN_GAIN = 1e-9


class _Tree:
    """Flat array representation of a grown (unpruned) tree."""

    __slots__ = ("feature", "threshold", "left", "right", "counts", "r_leaf",
                 "n_nodes", "n_classes")

    def __init__(self, n_classes: int):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.counts: list[np.ndarray] = []
        self.r_leaf: list[int] = []
        self.n_nodes = 0
        self.n_classes = n_classes

    def add_node(self, counts: np.ndarray) -> int:
        i = self.n_nodes
        self.n_nodes += 1
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.counts.append(counts)
        self.r_leaf.append(int(counts.sum() - counts.max()))
        return i

    def finalize(self):
        self.feature = np.asarray(self.feature, dtype=np.intp)
        self.threshold = np.asarray(self.threshold, dtype=np.float64)
        self.left = np.asarray(self.left, dtype=np.intp)
        self.right = np.asarray(self.right, dtype=np.intp)
        self.counts = np.asarray(self.counts, dtype=np.float64)
        self.r_leaf = np.asarray(self.r_leaf, dtype=np.float64)
        return self


def _best_split(X, y, idx, n_classes, min_bucket):
    """Best (impurity_decrease, feature, threshold) over all axis splits.

    Ties break toward the lower feature index, then the lower threshold.
    Impurity is measured as m * Gini so everything stays in count units.
    """
    m = idx.size
    best_score = None
    best = None
    y_node = y[idx]
    for j in range(X.shape[1]):
        v = X[idx, j]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        # candidate boundaries sit between distinct consecutive values
        cut = np.flatnonzero(vs[:-1] < vs[1:]) + 1  # size of the left side
        if cut.size == 0:
            continue
        cut = cut[(cut >= min_bucket) & (m - cut >= min_bucket)]
        if cut.size == 0:
            continue
        ys = y_node[order]
        if n_classes == 2:
            pos = np.cumsum(ys)
            left_pos = pos[cut - 1].astype(np.float64)
            left_n = cut.astype(np.float64)
            total_pos = float(pos[-1])
            right_pos = total_pos - left_pos
            right_n = m - left_n
            # m_side * gini_side = m_side - (pos^2 + neg^2) / m_side
            score = (left_n - (left_pos ** 2 + (left_n - left_pos) ** 2) / left_n
                     + right_n - (right_pos ** 2 + (right_n - right_pos) ** 2) / right_n)
        else:
            onehot = np.zeros((m, n_classes), dtype=np.float64)
            onehot[np.arange(m), ys] = 1.0
            cum = np.cumsum(onehot, axis=0)
            left_counts = cum[cut - 1]
            total = cum[-1]
            right_counts = total - left_counts
            left_n = cut.astype(np.float64)
            right_n = m - left_n
            score = (left_n - (left_counts ** 2).sum(axis=1) / left_n
                     + right_n - (right_counts ** 2).sum(axis=1) / right_n)
        k = int(np.argmin(score))  # first minimum = lowest threshold
        if best_score is None or score[k] < best_score - 1e-12:
            best_score = float(score[k])
            thr = 0.5 * (vs[cut[k] - 1] + vs[cut[k]])
            best = (j, float(thr))
    if best is None:
        return None
    counts = np.bincount(y_node, minlength=n_classes).astype(np.float64)
    parent_score = m - float((counts ** 2).sum()) / m
    gain = parent_score - best_score
    if gain <= _MIN_GAIN:
        return None
    return best


def _grow(X, y, n_classes, spec: ClassifierSpec) -> _Tree:
    tree = _Tree(n_classes)

    def build(idx, depth):
        counts = np.bincount(y[idx], minlength=n_classes)
        node = tree.add_node(counts)
        if (idx.size < spec.cart_min_split or depth >= spec.cart_max_depth
                or counts.max() == idx.size):
            return node
        split = _best_split(X, y, idx, n_classes, spec.cart_min_bucket)
        if split is None:
            return node
        j, thr = split
        go_left = X[idx, j] <= thr
        tree.feature[node] = j
        tree.threshold[node] = thr
        left = build(idx[go_left], depth + 1)
        tree.left[node] = left
        tree.right[node] = build(idx[~go_left], depth + 1)
        return node

    build(np.arange(X.shape[0], dtype=np.intp), 0)
    return tree.finalize()


def _effective_leaves(tree: _Tree, alpha: float) -> np.ndarray:
    """Mark nodes that act as leaves in the cp-pruned tree.

    Bottom-up dynamic program over cost = misclassifications + alpha per
    leaf; a node collapses whenever keeping it as a leaf is no worse than
    keeping its subtree (ties collapse, giving the smallest optimal tree).
    Nodes appear in preorder, so reversed index order visits children first.
    """
    n = tree.n_nodes
    cost = np.empty(n, dtype=np.float64)
    is_leaf = np.zeros(n, dtype=bool)
    for i in range(n - 1, -1, -1):
        as_leaf = tree.r_leaf[i] + alpha
        if tree.left[i] == -1:
            cost[i] = as_leaf
            is_leaf[i] = True
        else:
            sub = cost[tree.left[i]] + cost[tree.right[i]]
            if as_leaf <= sub:
                cost[i] = as_leaf
                is_leaf[i] = True
            else:
                cost[i] = sub
    return is_leaf


def _route(tree: _Tree, is_leaf: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Vectorized root-to-leaf routing; returns the leaf node id per row."""
    cur = np.zeros(X.shape[0], dtype=np.intp)
    active = np.flatnonzero(~is_leaf[cur])
    while active.size:
        nodes = cur[active]
        go_left = X[active, tree.feature[nodes]] <= tree.threshold[nodes]
        cur[active] = np.where(go_left, tree.left[nodes], tree.right[nodes])
        active = active[~is_leaf[cur[active]]]
    return cur


@dataclass(frozen=True)
class CartModel:
    """A grown tree together with its chosen pruning level.

    ``predict_proba`` returns Laplace-smoothed leaf class frequencies,
    (count_c + 1) / (n_leaf + arity).
    """

    spec: ClassifierSpec
    class_arity: int
    n_features: int
    chosen_cp: float
    tuning_accuracy: float
    tree: _Tree = field(repr=False)
    is_leaf: np.ndarray = field(repr=False)
    converged: bool = True

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        check_n_features(self, X)
        leaves = _route(self.tree, self.is_leaf, X)
        counts = self.tree.counts[leaves]
        return (counts + 1.0) / (counts.sum(axis=1, keepdims=True)
                                 + self.class_arity)

    def n_leaves(self) -> int:
        reach = np.zeros(self.tree.n_nodes, dtype=bool)
        reach[0] = True
        for i in range(self.tree.n_nodes):
            if reach[i] and not self.is_leaf[i]:
                reach[self.tree.left[i]] = True
                reach[self.tree.right[i]] = True
        return int(np.sum(reach & self.is_leaf))

    def max_depth(self) -> int:
        depth = np.zeros(self.tree.n_nodes, dtype=np.intp)
        best = 0
        for i in range(self.tree.n_nodes):
            if not self.is_leaf[i]:
                depth[self.tree.left[i]] = depth[i] + 1
                depth[self.tree.right[i]] = depth[i] + 1
                best = max(best, depth[i] + 1)
        return best


def _score_grid(tree: _Tree, grid, X_val, y_val, out_correct):
    r_root = float(tree.r_leaf[0])
    for g, cp in enumerate(grid):
        is_leaf = _effective_leaves(tree, cp * r_root)
        leaves = _route(tree, is_leaf, X_val)
        pred = np.argmax(tree.counts[leaves], axis=1)
        out_correct[g] += int(np.sum(pred == y_val))


def fit_cart(spec: ClassifierSpec, X: np.ndarray, y: np.ndarray,
             n_classes: int) -> CartModel:
    """Grow, cross-validate the cp grid, and prune at the winning cp.

    The winning cp maximizes ``tuning_folds``-fold CV accuracy; ties go to
    the larger cp (the simpler tree).  Fold assignment is a deterministic
    per-class round-robin, so identical inputs give identical models.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    grid = spec.cart_cp_grid
    correct = np.zeros(len(grid), dtype=np.int64)
    if len(grid) > 1 and X.shape[0] >= 2 * spec.tuning_folds:
        fold_ids = stratified_fold_ids(y, spec.tuning_folds)
        for f in range(spec.tuning_folds):
            val = fold_ids == f
            if not val.any() or val.all():
                continue
            y_tr = y[~val]
            if np.unique(y_tr).size < 2:
                majority = np.bincount(y_tr, minlength=n_classes).argmax()
                correct += int(np.sum(y[val] == majority))
                continue
            sub = _grow(X[~val], y_tr, n_classes, spec)
            _score_grid(sub, grid, X[val], y[val], correct)
        chosen = int(np.argmax(correct))  # grid is decreasing: first max = larger cp
        tuning_accuracy = float(correct[chosen]) / X.shape[0]
    else:
        chosen = len(grid) - 1
        tuning_accuracy = float("nan")
    tree = _grow(X, y, n_classes, spec)
    is_leaf = _effective_leaves(tree, grid[chosen] * float(tree.r_leaf[0]))
    return CartModel(spec, n_classes, X.shape[1], grid[chosen],
                     tuning_accuracy, tree, is_leaf)


def prune_accuracy_path(spec: ClassifierSpec, X, y, n_classes):
    """Training accuracy at every grid cp, for monotonicity checks."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    tree = _grow(X, y, n_classes, spec)
    accs = []
    for cp in spec.cart_cp_grid:
        is_leaf = _effective_leaves(tree, cp * float(tree.r_leaf[0]))
        leaves = _route(tree, is_leaf, X)
        pred = np.argmax(tree.counts[leaves], axis=1)
        accs.append(float(np.mean(pred == y)))
    return accs


def cart_summary(model: CartModel) -> dict:
    """JSON-serializable description of the pruned tree."""
    t = model.tree

    def node(i: int) -> dict:
        entry = {"n": int(t.counts[i].sum()),
                 "counts": [int(c) for c in t.counts[i]]}
        if model.is_leaf[i]:
            entry["leaf"] = True
        else:
            entry.update(feature=int(t.feature[i]),
                         threshold=float(t.threshold[i]),
                         left=node(int(t.left[i])),
                         right=node(int(t.right[i])))
        return entry

    return {"kind": "cart", "class_arity": model.class_arity,
            "chosen_cp": model.chosen_cp, "n_leaves": model.n_leaves(),
            "root": node(0)}


def fit_or_constant(spec: ClassifierSpec, X, y, n_classes: int):
    """fit_cart, falling back to a constant model on single-class input."""
    if np.unique(y).size < 2 or len(y) < 2:
        return fit_constant(y, n_classes, X.shape[1], spec)
    return fit_cart(spec, X, y, n_classes)


__all__ = ["CartModel", "fit_cart", "fit_or_constant", "cart_summary",
           "prune_accuracy_path", "ConstantModel", "DegenerateLabelsError"]
