"""Class dendrograms: construction, sampling, and serialization.

A hierarchy is a rooted binary tree whose leaves are exactly the class
indices 0..n-1.  Builders: bottom-up average-link agglomeration, top-down
recursive 2-means on dissimilarity rows, uniform random sampling over all
(2n-3)!! leaf-labeled topologies, and a pick-the-best-of-k-random-trees
heuristic scored by internal cross-validation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataio import Dataset
from .dissimilarity import DissimilarityMatrix
from .learners import ClassifierSpec, stratified_fold_ids


class NewickParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Leaf:
    class_index: int


@dataclass(frozen=True)
class Internal:
    left: "Leaf | Internal"
    right: "Leaf | Internal"


@dataclass(frozen=True)
class Hierarchy:
    root: Leaf | Internal
    n_classes: int

    def __post_init__(self):
        seen = sorted(leaf_indices(self.root))
        if seen != list(range(self.n_classes)):
            raise ValueError("leaves must biject with classes 0..n-1")
        if self.n_classes >= 2 and isinstance(self.root, Leaf):
            raise ValueError("root must be internal for 2 or more classes")


@dataclass(frozen=True)
class DepthStats:
    max_depth: int
    mean_leaf_depth: float


def leaf_indices(node) -> list[int]:
    out, stack = [], [node]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Leaf):
            out.append(cur.class_index)
        else:
            stack.append(cur.right)
            stack.append(cur.left)
    return out


def canonical_key(h: Hierarchy) -> str:
    """Order-independent topology fingerprint (left/right swaps ignored)."""

    def canon(node) -> str:
        if isinstance(node, Leaf):
            return str(node.class_index)
        a, b = canon(node.left), canon(node.right)
        if b < a:
            a, b = b, a
        return f"({a},{b})"

    return canon(h.root)


def depth_stats(h: Hierarchy) -> DepthStats:
    """Max and mean leaf depth, with the root at depth 0."""
    depths, stack = [], [(h.root, 0)]
    while stack:
        node, d = stack.pop()
        if isinstance(node, Leaf):
            depths.append(d)
        else:
            stack.append((node.left, d + 1))
            stack.append((node.right, d + 1))
    return DepthStats(max(depths), float(np.mean(depths)))


def internal_nodes(h: Hierarchy):
    """Preorder list of (node, left_classes, right_classes) tuples."""
    out = []

    def walk(node):
        if isinstance(node, Leaf):
            return
        out.append((node, frozenset(leaf_indices(node.left)),
                    frozenset(leaf_indices(node.right))))
        walk(node.left)
        walk(node.right)

    walk(h.root)
    return out


def count_hierarchies(n: int) -> int:
    """(2n-3)!!, the number of leaf-labeled rooted binary topologies."""
    if n < 2:
        raise ValueError("need at least 2 classes")
    return math.prod(range(1, 2 * n - 2, 2))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


class _MutableTree:
    """Array-backed tree used while splicing leaves in; frozen afterwards."""

    def __init__(self):
        self.left = [-1, -1]
        self.right = [-1, -1]
        self.klass = [0, 1]
        self.parent = [2, 2, -1]
        self.root = 2
        self.left.append(0)
        self.right.append(1)
        self.klass.append(-1)

    def new_node(self, klass=-1) -> int:
        self.left.append(-1)
        self.right.append(-1)
        self.klass.append(klass)
        self.parent.append(-1)
        return len(self.klass) - 1

    def splice(self, slot: int, leaf_class: int) -> None:
        """Attach a new leaf at edge ``slot`` (non-root node ids in creation
        order), or above the root when slot equals the edge count."""
        nonroot = [i for i in range(len(self.klass)) if i != self.root]
        leaf = self.new_node(leaf_class)
        joint = self.new_node()
        if slot == len(nonroot):
            self.left[joint] = self.root
            self.right[joint] = leaf
            self.parent[self.root] = joint
            self.parent[leaf] = joint
            self.root = joint
            return
        child = nonroot[slot]
        parent = self.parent[child]
        if self.left[parent] == child:
            self.left[parent] = joint
        else:
            self.right[parent] = joint
        self.left[joint] = child
        self.right[joint] = leaf
        self.parent[joint] = parent
        self.parent[child] = joint
        self.parent[leaf] = joint

    def freeze(self, n_classes: int) -> Hierarchy:
        built: dict[int, Leaf | Internal] = {}
        stack = [self.root]
        while stack:
            i = stack[-1]
            if self.klass[i] >= 0:
                built[i] = Leaf(self.klass[i])
                stack.pop()
                continue
            l, r = self.left[i], self.right[i]
            missing = [c for c in (l, r) if c not in built]
            if missing:
                stack.extend(missing)
                continue
            built[i] = Internal(built[l], built[r])
            stack.pop()
        return Hierarchy(built[self.root], n_classes)


def sample_random_hierarchy(n: int, rng) -> Hierarchy:
    """Uniform draw over all (2n-3)!! topologies by sequential splicing.

    Starting from the unique 2-leaf tree, leaf k is attached at one of the
    2k-1 equally likely slots (any existing edge, or a new root above the
    old one).  Every topology arises from exactly one splice history, so
    the draw is uniform.
    """
    if n < 2:
        raise ValueError("need at least 2 classes")
    gen = as_generator(rng)
    tree = _MutableTree()
    for k in range(2, n):
        slot = int(gen.integers(0, 2 * k - 1))
        tree.splice(slot, k)
    return tree.freeze(n)


def _pair_average(D: np.ndarray, a, b) -> float:
    return float(np.mean(D[np.ix_(list(a), list(b))]))


def hac_build(D: DissimilarityMatrix) -> Hierarchy:
    """Bottom-up agglomeration with unweighted average link.

    Cluster distance is the mean of the original class-pair entries across
    the two clusters.  Ties go to the pair whose (smallest member, smallest
    member) indices are lexicographically least; the cluster holding the
    smaller index becomes the left child.
    """
    n = D.n
    if n < 2:
        raise ValueError("need at least 2 classes")
    values = D.values
    clusters: list[tuple[int, ...]] = [(i,) for i in range(n)]
    subtrees: list[Leaf | Internal] = [Leaf(i) for i in range(n)]
    while len(clusters) > 1:
        best = None
        best_pair = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                d = _pair_average(values, clusters[i], clusters[j])
                if best is None or d < best:
                    best = d
                    best_pair = (i, j)
        i, j = best_pair
        merged = tuple(sorted(clusters[i] + clusters[j]))
        node = Internal(subtrees[i], subtrees[j])
        keep = [t for t in range(len(clusters)) if t not in (i, j)]
        clusters = [clusters[t] for t in keep] + [merged]
        subtrees = [subtrees[t] for t in keep] + [node]
        order = sorted(range(len(clusters)), key=lambda t: clusters[t][0])
        clusters = [clusters[t] for t in order]
        subtrees = [subtrees[t] for t in order]
    return Hierarchy(subtrees[0], n)


def _two_means(M: np.ndarray, gen: np.random.Generator,
               restarts: int = 10, max_iter: int = 100) -> np.ndarray:
    """Lloyd's 2-means over rows of M; returns 0/1 assignments.

    Seeds are two distinct rows drawn uniformly per restart; an emptied
    side is repaired by moving in the row farthest from the surviving
    side's mean.  The lowest-SSE restart wins, first restart on ties.
    """
    m = M.shape[0]
    best_sse, best_assign = None, None
    for _ in range(restarts):
        seeds = gen.choice(m, size=2, replace=False)
        centers = M[seeds].copy()
        assign = np.full(m, -1)
        for _ in range(max_iter):
            d0 = ((M - centers[0]) ** 2).sum(axis=1)
            d1 = ((M - centers[1]) ** 2).sum(axis=1)
            new_assign = (d1 < d0).astype(np.intp)
            for side in (0, 1):
                if not np.any(new_assign == side):
                    other_mean = M[new_assign == 1 - side].mean(axis=0)
                    far = int(np.argmax(((M - other_mean) ** 2).sum(axis=1)))
                    new_assign[far] = side
            if np.array_equal(new_assign, assign):
                break
            assign = new_assign
            centers = np.stack([M[assign == 0].mean(axis=0),
                                M[assign == 1].mean(axis=0)])
        sse = 0.0
        for side in (0, 1):
            rows = M[assign == side]
            sse += float(((rows - rows.mean(axis=0)) ** 2).sum())
        if best_sse is None or sse < best_sse:
            best_sse, best_assign = sse, assign
    return best_assign


def hkm_build(D: DissimilarityMatrix, rng) -> Hierarchy:
    """Top-down recursive 2-means over dissimilarity-matrix rows.

    At each node the surviving classes are embedded as their rows of D
    restricted to those classes, split with 2-means, and recursed.  The
    side containing the smallest class index becomes the left child.
    """
    n = D.n
    if n < 2:
        raise ValueError("need at least 2 classes")
    values = D.values

    def build(classes: np.ndarray, gen: np.random.Generator):
        if classes.size == 1:
            return Leaf(int(classes[0]))
        if classes.size == 2:
            return Internal(Leaf(int(classes[0])), Leaf(int(classes[1])))
        M = values[np.ix_(classes, classes)]
        assign = _two_means(M, gen)
        left_side = assign[0]
        left_classes = classes[assign == left_side]
        right_classes = classes[assign != left_side]
        gen_left, gen_right = gen.spawn(2)
        return Internal(build(left_classes, gen_left),
                        build(right_classes, gen_right))

    return Hierarchy(build(np.arange(n), as_generator(rng)), n)


def best_of_50(ds_train: Dataset, spec: ClassifierSpec, n_candidates: int = 50,
               cv_folds: int = 3, rng=None, candidates=None) -> Hierarchy:
    """Pick the best of ``n_candidates`` random hierarchies by internal CV.

    Candidates are scored by ``cv_folds``-fold stratified cross-validation
    on the given data only (all candidates share the same folds); the
    highest total holdout accuracy wins, first sampled on ties.  An
    explicit ``candidates`` list bypasses sampling.
    """
    from .hmc import evaluate, train_hmc

    gen = as_generator(rng)
    if candidates is None:
        candidates = [sample_random_hierarchy(ds_train.n_classes, gen)
                      for _ in range(n_candidates)]
    if not candidates:
        raise ValueError("need at least one candidate")
    fold_ids = stratified_fold_ids(ds_train.labels, cv_folds)
    best_score, best_h = -1.0, None
    for h in candidates:
        correct = 0.0
        for f in range(cv_folds):
            val = np.flatnonzero(fold_ids == f)
            tr = np.flatnonzero(fold_ids != f)
            if val.size == 0 or tr.size == 0:
                continue
            trained = train_hmc(h, ds_train.subset(tr), spec)
            acc, _ = evaluate(trained, ds_train.subset(val))
            correct += acc * val.size
        if correct > best_score:
            best_score, best_h = correct, h
    return best_h


def to_newick(h: Hierarchy, class_names=None) -> str:
    """Render as a Newick string with a trailing semicolon."""
    names = list(class_names) if class_names is not None else [
        str(i) for i in range(h.n_classes)]
    for name in names:
        if any(ch in name for ch in "(),;"):
            raise ValueError(f"class name {name!r} contains a Newick "
                             "metacharacter")

    def render(node) -> str:
        if isinstance(node, Leaf):
            return names[node.class_index]
        return f"({render(node.left)},{render(node.right)})"

    return render(h.root) + ";"


def from_newick(text: str, class_names) -> Hierarchy:
    """Parse a Newick string whose leaf names are exactly ``class_names``."""
    names = list(class_names)
    index = {name: i for i, name in enumerate(names)}
    pos = 0

    def peek() -> str:
        return text[pos] if pos < len(text) else ""

    def parse_node():
        nonlocal pos
        if peek() == "(":
            pos += 1
            left = parse_node()
            if peek() != ",":
                raise NewickParseError("expected ','", pos)
            pos += 1
            right = parse_node()
            if peek() != ")":
                raise NewickParseError("expected ')'", pos)
            pos += 1
            return Internal(left, right)
        start = pos
        while pos < len(text) and text[pos] not in "(),;":
            pos += 1
        name = text[start:pos].strip()
        if not name:
            raise NewickParseError("expected a leaf name", start)
        if name not in index:
            raise NewickParseError(f"unknown class name {name!r}", start)
        return Leaf(index[name])

    root = parse_node()
    if peek() == ";":
        pos += 1
    if pos != len(text.rstrip()):
        raise NewickParseError("trailing characters", pos)
    return Hierarchy(root, len(names))
