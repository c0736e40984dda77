"""Independent oracles used by the tests.

These deliberately re-derive results through different algorithms than the
library: topology enumeration by exhaustive splicing over nested tuples,
greedy clustering verified against the enumerated candidates, and plain
per-pair formula evaluations in pure Python.
"""
from __future__ import annotations

import numpy as np

# --- exhaustive topology enumeration over nested int/tuple trees ----------


def enumerate_tuple_topologies(n: int) -> list:
    """All leaf-labeled rooted binary topologies as nested tuples."""
    trees = [(0, 1)]
    for leaf in range(2, n):
        new_trees = []
        for t in trees:
            new_trees.extend(_insert_everywhere(t, leaf))
        trees = new_trees
    return trees


def _insert_everywhere(tree, leaf):
    # replace every node's subtree s by (s, leaf); covers all edges + root
    out = [(tree, leaf)]
    if isinstance(tree, tuple):
        a, b = tree
        out.extend((sub, b) for sub in _insert_everywhere(a, leaf))
        out.extend((a, sub) for sub in _insert_everywhere(b, leaf))
    return out


def tuple_canon(tree):
    """Order-free canonical form (frozensets nest uniquely)."""
    if isinstance(tree, int):
        return tree
    return frozenset({tuple_canon(tree[0]), tuple_canon(tree[1])})


def hierarchy_canon_from_tuple(tree) -> str:
    """Same canonical string the library uses, for cross-checking."""
    if isinstance(tree, int):
        return str(tree)
    a = hierarchy_canon_from_tuple(tree[0])
    b = hierarchy_canon_from_tuple(tree[1])
    if b < a:
        a, b = b, a
    return f"({a},{b})"


# --- greedy average-link oracle -------------------------------------------


def _tuple_leafsets(tree, out):
    if isinstance(tree, int):
        return frozenset([tree])
    left = _tuple_leafsets(tree[0], out)
    right = _tuple_leafsets(tree[1], out)
    joined = left | right
    out.add(joined)
    return joined


def greedy_consistent(tree, D: np.ndarray) -> bool:
    """Is this topology the one greedy average-link would build on D?

    Simulates the merge process with plain Python sets; at every step the
    tie-broken argmin pair's union must be a node of the candidate tree.
    """
    nodes: set[frozenset] = set()
    _tuple_leafsets(tree, nodes)
    n = D.shape[0]
    clusters = [frozenset([i]) for i in range(n)]
    while len(clusters) > 1:
        clusters.sort(key=min)
        best, best_pair = None, None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                total = 0.0
                for a in clusters[i]:
                    for b in clusters[j]:
                        total += D[a, b]
                avg = total / (len(clusters[i]) * len(clusters[j]))
                if best is None or avg < best:
                    best, best_pair = avg, (i, j)
        i, j = best_pair
        merged = clusters[i] | clusters[j]
        if len(merged) < n and merged not in nodes:
            return False
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)]
        clusters.append(merged)
    return True


def random_dissimilarity(n: int, rng: np.random.Generator) -> np.ndarray:
    vals = rng.uniform(0.1, 1.0, size=(n, n))
    D = np.triu(vals, 1)
    D = D + D.T
    return D


# --- literal formula re-evaluations ---------------------------------------


def confusion_subset_oracle(counts, j, k):
    hits = int(counts[j][j]) + int(counts[k][k])
    denom = hits + int(counts[j][k]) + int(counts[k][j])
    if denom == 0:
        return None
    return hits / denom


def ava_proxy_oracle(probas, labels, j, k):
    a, b = min(j, k), max(j, k)
    correct = 0
    total = 0
    for row, label in zip(probas, labels):
        if label not in (a, b):
            continue
        total += 1
        guess = a if row[a] >= row[b] else b
        if guess == label:
            correct += 1
    if total == 0:
        return None
    return correct / total
