"""Hierarchical multi-class classification by hard routing.

One binary classifier per internal node separates the left subtree's
classes (label 0) from the right's (label 1).  Prediction starts at the
root and evaluates only the classifier chosen by each previous decision,
so the number of evaluations equals the predicted leaf's depth and is
always below the class count.  Wrong turns are unrecoverable by design.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataio import Dataset
from .hierarchy import Hierarchy, Internal, Leaf, depth_stats
from .learners import ClassifierSpec, DegenerateLabelsError, fit, fit_constant


@dataclass(frozen=True)
class Routing:
    """Outcome of routing one instance: class, visited nodes, and cost."""

    predicted_class: int
    path: tuple[int, ...]
    evaluations: int


@dataclass(frozen=True)
class TrainedHierarchy:
    """A hierarchy with one fitted binary model per internal node.

    Internal nodes are numbered in preorder; ``node_models[t]`` votes
    between node t's left (probability column 0) and right (column 1)
    subtrees.  The compiled child tables encode an internal child as its
    node id and a leaf child as ``-(class_index + 1)``.
    """

    hierarchy: Hierarchy
    node_models: tuple
    class_names: tuple[str, ...]
    left_child: np.ndarray = field(repr=False)
    right_child: np.ndarray = field(repr=False)
    node_rows: tuple[int, ...] = ()

    @property
    def n_classes(self) -> int:
        return self.hierarchy.n_classes


def _compile(h: Hierarchy):
    """Preorder-number internal nodes and build child lookup tables."""
    lefts, rights = [], []

    def encode(node) -> int:
        if isinstance(node, Leaf):
            return -(node.class_index + 1)
        my_id = len(lefts)
        lefts.append(0)
        rights.append(0)
        lefts[my_id] = encode(node.left)
        rights[my_id] = encode(node.right)
        return my_id

    encode(h.root)
    return np.array(lefts, dtype=np.intp), np.array(rights, dtype=np.intp)


def assemble(h: Hierarchy, node_models, class_names,
             node_rows=()) -> TrainedHierarchy:
    """Wrap externally supplied per-node models (preorder) for routing."""
    left, right = _compile(h)
    models = tuple(node_models)
    if len(models) != h.n_classes - 1:
        raise ValueError(f"expected {h.n_classes - 1} node models, "
                         f"got {len(models)}")
    return TrainedHierarchy(h, models, tuple(class_names), left, right,
                            tuple(node_rows))


def train_hmc(h: Hierarchy, ds_train: Dataset, spec: ClassifierSpec) -> TrainedHierarchy:
    """Fit one binary model per internal node on that node's subtree rows.

    Node t sees exactly the instances whose class lies in its subtree,
    relabeled 0 for the left side and 1 for the right.  A node whose
    relabeled data degenerates to a single class gets a constant model.
    """
    counts = ds_train.class_counts()
    missing = [ds_train.class_names[c] for c in np.flatnonzero(counts == 0)]
    if missing:
        raise ValueError(f"classes missing from training data: {missing}")

    models, node_rows = [], []

    def walk(node):
        if isinstance(node, Leaf):
            return
        left_classes = np.array(sorted({l for l in _leaves(node.left)}))
        right_classes = np.array(sorted({l for l in _leaves(node.right)}))
        mask = np.isin(ds_train.labels, np.concatenate([left_classes,
                                                        right_classes]))
        y_bin = np.isin(ds_train.labels[mask], right_classes).astype(np.int64)
        X = ds_train.features[mask]
        try:
            model = fit(spec, X, y_bin, n_classes=2)
        except DegenerateLabelsError:
            model = fit_constant(y_bin, 2, X.shape[1], spec)
        models.append(model)
        node_rows.append(int(mask.sum()))
        walk(node.left)
        walk(node.right)

    walk(h.root)
    return assemble(h, models, ds_train.class_names, node_rows)


def _leaves(node):
    stack, out = [node], []
    while stack:
        cur = stack.pop()
        if isinstance(cur, Leaf):
            out.append(cur.class_index)
        else:
            stack.extend((cur.left, cur.right))
    return out


def predict_route(th: TrainedHierarchy, x) -> Routing:
    """Route a single feature row from the root to a leaf."""
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    node = 0
    path = []
    while node >= 0:
        path.append(node)
        proba = th.node_models[node].predict_proba(x)[0]
        node = int(th.left_child[node] if proba[0] >= proba[1]
                   else th.right_child[node])
    predicted = -node - 1
    _check_routing_cost(th, len(path))
    return Routing(predicted, tuple(path), len(path))


def predict_batch(th: TrainedHierarchy, X):
    """Vectorized routing: (predicted classes, evaluations per row)."""
    X = np.asarray(X, dtype=np.float64)
    m = X.shape[0]
    cur = np.zeros(m, dtype=np.intp)  # everyone starts at the root
    evals = np.zeros(m, dtype=np.intp)
    while True:
        active = cur >= 0
        if not active.any():
            break
        for node in np.unique(cur[active]):
            rows = np.flatnonzero(cur == node)
            proba = th.node_models[node].predict_proba(X[rows])
            go_left = proba[:, 0] >= proba[:, 1]
            cur[rows] = np.where(go_left, th.left_child[node],
                                 th.right_child[node])
            evals[rows] += 1
    if m:
        _check_routing_cost(th, int(evals.max()))
    return -cur - 1, evals


def _check_routing_cost(th: TrainedHierarchy, evaluations: int) -> None:
    # routing cost can never reach the class count
    limit = depth_stats(th.hierarchy).max_depth
    if not evaluations <= limit <= th.n_classes - 1:
        raise RuntimeError(
            f"routing cost invariant violated: {evaluations} evaluations, "
            f"max depth {limit}, {th.n_classes} classes")


def evaluate(th: TrainedHierarchy, ds_test: Dataset):
    """(accuracy, mean evaluations per instance) on a held-out dataset."""
    if ds_test.n_rows == 0:
        raise ValueError("empty test set")
    pred, evals = predict_batch(th, ds_test.features)
    accuracy = float(np.mean(pred == ds_test.labels))
    return accuracy, float(np.mean(evals))


def node_summaries(th: TrainedHierarchy) -> list[dict]:
    """Per-node rows (id, subtree classes, model settings) for CSV export."""
    out = []
    names = th.class_names
    next_id = 0

    def describe(classes) -> str:
        return "|".join(names[c] for c in sorted(classes))

    def walk(node):
        nonlocal next_id
        if isinstance(node, Leaf):
            return
        node_id = next_id
        next_id += 1
        model = th.node_models[node_id]
        spec = getattr(model, "spec", None)
        out.append({
            "node_id": node_id,
            "left_classes": describe(_leaves(node.left)),
            "right_classes": describe(_leaves(node.right)),
            "n_rows": th.node_rows[node_id] if th.node_rows else None,
            "model_kind": spec.kind if spec else type(model).__name__,
            "chosen_cp": getattr(model, "chosen_cp", None),
            "tuning_accuracy": getattr(model, "tuning_accuracy", None),
        })
        walk(node.left)
        walk(node.right)

    walk(th.hierarchy.root)
    return out
