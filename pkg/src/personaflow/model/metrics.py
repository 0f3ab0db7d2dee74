"""Four-class evaluation: per-class F1, macro-F1, accuracy, confusion counts."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError

N_CLASSES = 4


@dataclass
class Metrics:
    macro_f1: float
    accuracy: float
    per_class_f1: np.ndarray
    confusion: np.ndarray

    def to_dict(self) -> dict:
        return {
            "macro_f1": self.macro_f1,
            "accuracy": self.accuracy,
            "per_class_f1": self.per_class_f1.tolist(),
            "confusion": self.confusion.tolist(),
        }


def evaluate(predictions, truth) -> Metrics:
    """Score predictions against truth over the four fixed classes.

    Per-class F1 is 2PR/(P+R), defined as 0 when precision and recall are
    both absent; macro-F1 is the unweighted mean over all four classes.
    """
    pred = np.asarray(predictions, dtype=np.int64)
    true = np.asarray(truth, dtype=np.int64)
    if pred.shape != true.shape or pred.ndim != 1 or pred.size == 0:
        raise ValidationError("evaluate: predictions and truth must be equal-length, nonempty")
    if pred.min() < 0 or pred.max() >= N_CLASSES or true.min() < 0 or true.max() >= N_CLASSES:
        raise ValidationError(f"evaluate: labels must lie in [0, {N_CLASSES})")

    confusion = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    np.add.at(confusion, (true, pred), 1)

    tp = np.diag(confusion).astype(np.float64)
    pred_count = confusion.sum(axis=0).astype(np.float64)
    true_count = confusion.sum(axis=1).astype(np.float64)
    denom = pred_count + true_count
    f1 = np.divide(2.0 * tp, denom, out=np.zeros(N_CLASSES), where=denom > 0)

    return Metrics(
        macro_f1=float(f1.mean()),
        accuracy=float(tp.sum() / pred.size),
        per_class_f1=f1,
        confusion=confusion,
    )
