"""Gradient-boosted trees with a softmax objective and second-order leaf
weights.

Each round fits one regression tree per class to the softmax gradients
(g = p - y, h = p(1 - p)) computed from the scores at the start of the
round.  Split gain is the standard second-order formula with L2-regularized
leaf weights w = -G / (H + lambda).  Raw scores start at the log class
priors, so a zero learning rate predicts the priors forever.

The algorithm is deterministic: exact greedy search over sorted unique
thresholds, ties broken by lowest feature index then lowest threshold.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import SchemaError, ValidationError

_NO_FEATURE = -1
_MIN_GAIN = 1e-12


@dataclass(frozen=True)
class GbdtParams:
    n_rounds: int = 100
    max_depth: int = 6
    learning_rate: float = 0.3
    reg_lambda: float = 1.0


@dataclass
class _RegressionTree:
    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    value: list[float] = field(default_factory=list)

    def add_node(self) -> int:
        self.feature.append(_NO_FEATURE)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0], dtype=np.float64)
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            if self.feature[node] == _NO_FEATURE:
                out[idx] = self.value[node]
                continue
            go_left = X[idx, self.feature[node]] <= self.threshold[node]
            stack.append((self.right[node], idx[~go_left]))
            stack.append((self.left[node], idx[go_left]))
        return out


def _best_split(
    Xn: np.ndarray, g: np.ndarray, h: np.ndarray, reg_lambda: float
) -> tuple[float, int, float] | None:
    """Exact greedy search across every feature at once.

    Returns (gain, feature, threshold) or None when no boundary improves
    the objective.  First-occurrence argmax breaks gain ties toward the
    lowest feature index, and within a feature toward the lowest threshold.
    """
    order = np.argsort(Xn, axis=0, kind="stable")
    xs = np.take_along_axis(Xn, order, axis=0)
    gs = g[order]
    hs = h[order]
    G = g.sum()
    H = h.sum()
    GL = np.cumsum(gs, axis=0)[:-1]
    HL = np.cumsum(hs, axis=0)[:-1]
    GR = G - GL
    HR = H - HL
    parent = G * G / (H + reg_lambda)
    gain = 0.5 * (GL * GL / (HL + reg_lambda) + GR * GR / (HR + reg_lambda) - parent)
    gain[xs[:-1] >= xs[1:]] = -np.inf

    per_feature_row = np.argmax(gain, axis=0)
    per_feature_gain = gain[per_feature_row, np.arange(gain.shape[1])]
    feat = int(np.argmax(per_feature_gain))
    best_gain = float(per_feature_gain[feat])
    if not np.isfinite(best_gain) or best_gain <= _MIN_GAIN:
        return None
    row = int(per_feature_row[feat])
    return best_gain, feat, float(xs[row, feat])


def _build_tree(
    X: np.ndarray, g: np.ndarray, h: np.ndarray, params: GbdtParams
) -> _RegressionTree:
    tree = _RegressionTree()
    root = tree.add_node()
    stack: list[tuple[int, np.ndarray, int]] = [(root, np.arange(X.shape[0]), 0)]
    while stack:
        node, idx, depth = stack.pop()
        g_node = g[idx]
        h_node = h[idx]
        split = None
        if depth < params.max_depth and idx.size >= 2:
            split = _best_split(X[idx], g_node, h_node, params.reg_lambda)
        if split is None:
            tree.value[node] = float(-g_node.sum() / (h_node.sum() + params.reg_lambda))
            continue
        _, feat, thr = split
        go_left = X[idx, feat] <= thr
        tree.feature[node] = feat
        tree.threshold[node] = thr
        left = tree.add_node()
        right = tree.add_node()
        tree.left[node] = left
        tree.right[node] = right
        stack.append((right, idx[~go_left], depth + 1))
        stack.append((left, idx[go_left], depth + 1))
    return tree


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


@dataclass
class GradientBoostedTrees:
    rounds: list[list[_RegressionTree]]
    base_score: np.ndarray
    n_classes: int
    params: GbdtParams
    seed: int
    train_loss: list[float] = field(default_factory=list)

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        F = np.tile(self.base_score, (X.shape[0], 1))
        for round_trees in self.rounds:
            for k, tree in enumerate(round_trees):
                F[:, k] += self.params.learning_rate * tree.predict(X)
        return F

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _softmax(self.decision_scores(X))

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.decision_scores(X).argmax(axis=1)


def multiclass_log_loss(F: np.ndarray, y: np.ndarray) -> float:
    probs = _softmax(F)
    return float(-np.mean(np.log(probs[np.arange(y.shape[0]), y] + 1e-300)))


def train_gbdt(
    X,
    y,
    params: GbdtParams | None = None,
    seed: int = 0,
    n_classes: int | None = None,
) -> GradientBoostedTrees:
    """Fit boosted trees; the returned model carries the per-round training
    log-loss trace (evaluated after each round on the full training set)."""
    params = params or GbdtParams()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] == 0:
        raise ValidationError("train_gbdt: X and y must be nonempty and aligned")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    if np.unique(y).size < 2:
        raise ValidationError("train_gbdt: need at least 2 classes in y")

    n = X.shape[0]
    priors = np.bincount(y, minlength=n_classes) / n
    base_score = np.log(np.clip(priors, 1e-12, None))
    F = np.tile(base_score, (n, 1))

    rounds: list[list[_RegressionTree]] = []
    trace: list[float] = []
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y] = 1.0
    for _ in range(params.n_rounds):
        P = _softmax(F)
        round_trees: list[_RegressionTree] = []
        for k in range(n_classes):
            g = P[:, k] - onehot[:, k]
            h = P[:, k] * (1.0 - P[:, k])
            round_trees.append(_build_tree(X, g, h, params))
        for k, tree in enumerate(round_trees):
            F[:, k] += params.learning_rate * tree.predict(X)
        rounds.append(round_trees)
        trace.append(multiclass_log_loss(F, y))
    return GradientBoostedTrees(
        rounds=rounds,
        base_score=base_score,
        n_classes=n_classes,
        params=params,
        seed=seed,
        train_loss=trace,
    )


_GBDT_FORMAT = 1


def save_gbdt(model: GradientBoostedTrees, path: str | Path) -> None:
    payload = {
        "format": _GBDT_FORMAT,
        "kind": "gbdt",
        "seed": model.seed,
        "n_classes": model.n_classes,
        "base_score": model.base_score.tolist(),
        "params": {
            "n_rounds": model.params.n_rounds,
            "max_depth": model.params.max_depth,
            "learning_rate": model.params.learning_rate,
            "reg_lambda": model.params.reg_lambda,
        },
        "rounds": [
            [
                {
                    "feature": t.feature,
                    "threshold": t.threshold,
                    "left": t.left,
                    "right": t.right,
                    "value": t.value,
                }
                for t in round_trees
            ]
            for round_trees in model.rounds
        ],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle)


def load_gbdt(path: str | Path) -> GradientBoostedTrees:
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    if payload.get("format") != _GBDT_FORMAT or payload.get("kind") != "gbdt":
        raise SchemaError(f"model file {path}: not a supported boosted-trees file")
    rounds = [
        [
            _RegressionTree(
                feature=t["feature"],
                threshold=t["threshold"],
                left=t["left"],
                right=t["right"],
                value=t["value"],
            )
            for t in round_trees
        ]
        for round_trees in payload["rounds"]
    ]
    return GradientBoostedTrees(
        rounds=rounds,
        base_score=np.array(payload["base_score"], dtype=np.float64),
        n_classes=int(payload["n_classes"]),
        params=GbdtParams(**payload["params"]),
        seed=int(payload["seed"]),
    )
