"""Flat-array CART trees shared by the tree, forest, and boosting learners.

Nodes live in parallel arrays (feature, threshold, left, right, value) so
trees serialize to JSON directly and prediction is a vectorized descent.
Split thresholds are midpoints between consecutive distinct sorted values;
rows with x <= threshold go left. Ties between equally good splits resolve
toward the lowest feature index, then the lowest threshold.
"""

from __future__ import annotations

import numpy as np

LEAF = -1


class FlatTree:
    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.value = np.asarray(value, dtype=np.float64)

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index for every row."""
        m = X.shape[0]
        node = np.zeros(m, dtype=np.int32)
        while True:
            feat = self.feature[node]
            active = feat != LEAF
            if not active.any():
                return node
            idx = np.flatnonzero(active)
            cur = node[idx]
            go_left = X[idx, feat[idx]] <= self.threshold[cur]
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]

    def uses_feature(self, j: int) -> bool:
        return bool((self.feature == j).any())

    def to_state(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_state(cls, state: dict) -> "FlatTree":
        return cls(state["feature"], state["threshold"], state["left"],
                   state["right"], state["value"])


def _best_split_of_feature(v: np.ndarray, stat: np.ndarray, total: np.ndarray,
                           min_leaf: int):
    """Best (score, threshold) for one feature.

    `stat` is the per-row statistic being accumulated: a one-hot label matrix
    for Gini splits or the (target, target^2)ish columns for variance splits.
    The score maximized is sum_child (column_sums^2 / child_size), which
    orders splits identically to Gini gain / SSE reduction.
    """
    order = np.argsort(v, kind="stable")
    vs = v[order]
    n = vs.shape[0]
    cut = np.flatnonzero(vs[:-1] < vs[1:])  # split after position i
    if min_leaf > 1:
        cut = cut[(cut + 1 >= min_leaf) & (n - cut - 1 >= min_leaf)]
    if cut.size == 0:
        return None
    csum = np.cumsum(stat[order], axis=0)
    left = csum[cut]
    right = total - left
    nl = (cut + 1).astype(np.float64)
    nr = n - nl
    score = (left * left).sum(axis=1) / nl + (right * right).sum(axis=1) / nr
    best = int(np.argmax(score))  # first max -> lowest threshold
    a, b = vs[cut[best]], vs[cut[best] + 1]
    t = 0.5 * (a + b)
    if t >= b:  # fp rounding: keep the training partition (x <= t goes left)
        t = a
    return float(score[best]), float(t)


def grow_tree(X: np.ndarray, stat: np.ndarray, *, max_depth, min_samples_leaf: int,
              leaf_value, is_pure, max_features=None, rng=None) -> FlatTree:
    """Depth-first CART growth over a generic split statistic.

    `leaf_value(rows)` produces the stored leaf vector; `is_pure(rows)` stops
    expansion early. `max_features` draws a per-node candidate subset from
    `rng` (random-forest style); candidates are scanned in ascending index
    order so ties stay deterministic.
    """
    n, p = X.shape
    depth_cap = n if max_depth is None else int(max_depth)
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(rows):
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(leaf_value(rows))
        return len(feature) - 1

    stack = [(np.arange(n), 0, new_node(np.arange(n)))]
    while stack:
        rows, depth, slot = stack.pop()
        if depth >= depth_cap or rows.size < 2 * min_samples_leaf or is_pure(rows):
            continue
        if max_features is not None and max_features < p:
            candidates = np.sort(rng.choice(p, size=max_features, replace=False))
        else:
            candidates = np.arange(p)
        stat_rows = stat[rows]
        total = stat_rows.sum(axis=0)
        best = None  # (score, feature, threshold)
        for j in candidates:
            found = _best_split_of_feature(X[rows, j], stat_rows, total,
                                           min_samples_leaf)
            if found is None:
                continue
            score, t = found
            if best is None or score > best[0]:
                best = (score, int(j), t)
        if best is None:
            continue
        _, j, t = best
        mask = X[rows, j] <= t
        left_rows, right_rows = rows[mask], rows[~mask]
        feature[slot] = j
        threshold[slot] = t
        left[slot] = new_node(left_rows)
        right[slot] = new_node(right_rows)
        # push right first so the left branch is processed (and numbered) next
        stack.append((right_rows, depth + 1, right[slot]))
        stack.append((left_rows, depth + 1, left[slot]))
    return FlatTree(feature, threshold, left, right, value)


def grow_classification_tree(X, y, n_classes: int, *, max_depth, min_samples_leaf,
                             max_features=None, rng=None) -> FlatTree:
    """Gini-impurity tree; leaves store class frequency vectors."""
    onehot = np.zeros((y.shape[0], n_classes))
    onehot[np.arange(y.shape[0]), y] = 1.0

    def leaf_value(rows):
        counts = np.bincount(y[rows], minlength=n_classes).astype(np.float64)
        return counts / counts.sum()

    def is_pure(rows):
        return np.unique(y[rows]).size == 1

    return grow_tree(X, onehot, max_depth=max_depth, min_samples_leaf=min_samples_leaf,
                     leaf_value=leaf_value, is_pure=is_pure,
                     max_features=max_features, rng=rng)


def grow_regression_tree(X, y, *, max_depth, min_samples_leaf) -> FlatTree:
    """Variance-reduction tree; leaves store the target mean."""
    stat = y.reshape(-1, 1).astype(np.float64)

    def leaf_value(rows):
        return [float(y[rows].mean())]

    def is_pure(rows):
        yr = y[rows]
        return bool((yr == yr[0]).all())

    return grow_tree(X, stat, max_depth=max_depth, min_samples_leaf=min_samples_leaf,
                     leaf_value=leaf_value, is_pure=is_pure)
