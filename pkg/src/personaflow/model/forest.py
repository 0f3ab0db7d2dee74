"""Random-forest classifier with exact greedy Gini splits.

Determinism contract: per-tree seeds come from ``SeedSequence(seed).spawn``;
candidate features are drawn per split in depth-first build order; split
ties prefer the lowest feature index, then the lowest threshold; leaf and
vote ties prefer the lowest class index.  Thresholds are training feature
values and the split condition is ``x <= t``, so predictions are invariant
under strictly monotone per-column transformations.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import SchemaError, ValidationError

_NO_FEATURE = -1


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    max_depth: int | None = None
    min_samples_split: int = 2
    bootstrap: bool = True
    max_features: str | int | None = "sqrt"

    def n_candidates(self, n_features: int) -> int:
        if self.max_features == "sqrt":
            return max(1, int(math.floor(math.sqrt(n_features))))
        if self.max_features is None:
            return n_features
        return max(1, min(int(self.max_features), n_features))


@dataclass
class _Tree:
    """Flat array representation; children of node i live at left[i]/right[i]."""

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    leaf_class: list[int] = field(default_factory=list)

    def add_node(self) -> int:
        self.feature.append(_NO_FEATURE)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.leaf_class.append(-1)
        return len(self.feature) - 1

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0], dtype=np.int64)
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            if self.feature[node] == _NO_FEATURE:
                out[idx] = self.leaf_class[node]
                continue
            go_left = X[idx, self.feature[node]] <= self.threshold[node]
            stack.append((self.right[node], idx[~go_left]))
            stack.append((self.left[node], idx[go_left]))
        return out


def _gini_cost(x: np.ndarray, y_onehot: np.ndarray) -> tuple[float, float] | None:
    """Best (cost, threshold) for one feature column, or None if unsplittable.

    Cost is the size-weighted mean of child Gini impurities; the first
    minimal boundary wins, which is the lowest threshold.
    """
    order = np.argsort(x, kind="stable")
    xs = x[order]
    boundaries = np.nonzero(xs[:-1] < xs[1:])[0]
    if boundaries.size == 0:
        return None
    m = x.shape[0]
    cum = np.cumsum(y_onehot[order], axis=0)
    total = cum[-1]
    left_counts = cum[boundaries]
    right_counts = total - left_counts
    n_left = boundaries + 1.0
    n_right = m - n_left
    gini_left = 1.0 - ((left_counts / n_left[:, None]) ** 2).sum(axis=1)
    gini_right = 1.0 - ((right_counts / n_right[:, None]) ** 2).sum(axis=1)
    cost = (n_left * gini_left + n_right * gini_right) / m
    best = int(np.argmin(cost))
    return float(cost[best]), float(xs[boundaries[best]])


def _build_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    params: ForestParams,
    rng: np.random.Generator,
) -> _Tree:
    n, d = X.shape
    n_cand = params.n_candidates(d)
    eye = np.eye(n_classes)
    tree = _Tree()
    root = tree.add_node()
    stack: list[tuple[int, np.ndarray, int]] = [(root, np.arange(n), 0)]
    while stack:
        node, idx, depth = stack.pop()
        y_node = y[idx]
        counts = np.bincount(y_node, minlength=n_classes)
        majority = int(np.argmax(counts))
        pure = counts[majority] == idx.size
        depth_capped = params.max_depth is not None and depth >= params.max_depth
        if pure or depth_capped or idx.size < params.min_samples_split:
            tree.leaf_class[node] = majority
            continue

        candidates = np.sort(rng.choice(d, size=n_cand, replace=False))
        y_onehot = eye[y_node]
        best: tuple[float, int, float] | None = None
        for f in candidates:
            found = _gini_cost(X[idx, f], y_onehot)
            if found is None:
                continue
            cost, thr = found
            if best is None or cost < best[0]:
                best = (cost, int(f), thr)
        if best is None:
            tree.leaf_class[node] = majority
            continue

        _, feat, thr = best
        go_left = X[idx, feat] <= thr
        tree.feature[node] = feat
        tree.threshold[node] = thr
        left = tree.add_node()
        right = tree.add_node()
        tree.left[node] = left
        tree.right[node] = right
        # left child is pushed last so it is expanded first (fixed RNG order)
        stack.append((right, idx[~go_left], depth + 1))
        stack.append((left, idx[go_left], depth + 1))
    return tree


@dataclass
class RandomForest:
    trees: list[_Tree]
    n_classes: int
    params: ForestParams
    seed: int

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        votes = np.zeros((X.shape[0], self.n_classes), dtype=np.int64)
        for tree in self.trees:
            pred = tree.predict(X)
            votes[np.arange(X.shape[0]), pred] += 1
        return votes.argmax(axis=1)


def train_random_forest(
    X,
    y,
    params: ForestParams | None = None,
    seed: int = 0,
    n_classes: int | None = None,
) -> RandomForest:
    """Fit a forest of exact-greedy Gini trees on bootstrap resamples."""
    params = params or ForestParams()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] == 0:
        raise ValidationError("train_random_forest: X and y must be nonempty and aligned")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    if np.unique(y).size < 2:
        raise ValidationError("train_random_forest: need at least 2 classes in y")

    trees: list[_Tree] = []
    for child_seq in np.random.SeedSequence(seed).spawn(params.n_trees):
        rng = np.random.Generator(np.random.PCG64(child_seq))
        if params.bootstrap:
            sample = rng.integers(0, X.shape[0], size=X.shape[0])
        else:
            sample = np.arange(X.shape[0])
        trees.append(_build_tree(X[sample], y[sample], n_classes, params, rng))
    return RandomForest(trees=trees, n_classes=n_classes, params=params, seed=seed)


_FOREST_FORMAT = 1


def save_forest(model: RandomForest, path: str | Path) -> None:
    payload = {
        "format": _FOREST_FORMAT,
        "kind": "random_forest",
        "seed": model.seed,
        "n_classes": model.n_classes,
        "params": {
            "n_trees": model.params.n_trees,
            "max_depth": model.params.max_depth,
            "min_samples_split": model.params.min_samples_split,
            "bootstrap": model.params.bootstrap,
            "max_features": model.params.max_features,
        },
        "trees": [
            {
                "feature": t.feature,
                "threshold": t.threshold,
                "left": t.left,
                "right": t.right,
                "leaf_class": t.leaf_class,
            }
            for t in model.trees
        ],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle)


def load_forest(path: str | Path) -> RandomForest:
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    if payload.get("format") != _FOREST_FORMAT or payload.get("kind") != "random_forest":
        raise SchemaError(f"model file {path}: not a supported forest file")
    trees = [
        _Tree(
            feature=t["feature"],
            threshold=t["threshold"],
            left=t["left"],
            right=t["right"],
            leaf_class=t["leaf_class"],
        )
        for t in payload["trees"]
    ]
    params = ForestParams(**payload["params"])
    return RandomForest(
        trees=trees,
        n_classes=int(payload["n_classes"]),
        params=params,
        seed=int(payload["seed"]),
    )
