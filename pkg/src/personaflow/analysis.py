"""Dataset analysis: distinctive profession tokens, metadata statistics,
and the per-class readability table."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Sequence

import numpy as np

from .corpus import COUNT_FIELDS, PersonalityClass, UserRecord
from .errors import ValidationError
from .readability import METRIC_NAMES
from .textproc import normalize, tokenize


@dataclass(frozen=True)
class ClassTokenScore:
    """P(class | token) for one description token, with its user support."""

    token: str
    personality: PersonalityClass
    probability: float
    support: int


@lru_cache(maxsize=1)
def bundled_stopwords() -> frozenset[str]:
    text = resources.files("personaflow.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(text.split())


def profession_scores(
    descriptions: Sequence[str],
    classes: Sequence[PersonalityClass],
    min_support: int = 20,
    top_k: int = 5,
    stopwords: frozenset[str] | None = None,
) -> dict[PersonalityClass, list[ClassTokenScore]]:
    """Rank description tokens by how strongly they indicate each class.

    A token counts once per distinct user; tokens held by fewer than
    ``min_support`` users are skipped.  Ranking is by P(class|token), ties
    by support then token.
    """
    if len(descriptions) != len(classes):
        raise ValidationError("profession_scores: descriptions and classes must align")
    present = {int(c) for c in classes}
    missing = [c.label for c in PersonalityClass if int(c) not in present]
    if missing:
        raise ValidationError(f"profession_scores: classes with no users: {missing}")
    if stopwords is None:
        stopwords = bundled_stopwords()

    holders: dict[str, np.ndarray] = {}
    for description, cls in zip(descriptions, classes):
        tokens = {
            t for t in tokenize(normalize(description)) if t not in stopwords and len(t) > 1
        }
        for token in tokens:
            counts = holders.get(token)
            if counts is None:
                counts = np.zeros(len(PersonalityClass), dtype=np.int64)
                holders[token] = counts
            counts[int(cls)] += 1

    per_class: dict[PersonalityClass, list[ClassTokenScore]] = {c: [] for c in PersonalityClass}
    for token in sorted(holders):
        counts = holders[token]
        support = int(counts.sum())
        if support < min_support:
            continue
        for cls in PersonalityClass:
            per_class[cls].append(
                ClassTokenScore(
                    token=token,
                    personality=cls,
                    probability=float(counts[int(cls)] / support),
                    support=support,
                )
            )
    for cls in PersonalityClass:
        per_class[cls].sort(key=lambda s: (-s.probability, -s.support, s.token))
        per_class[cls] = per_class[cls][:top_k]
    return per_class


def metadata_stats(users: Sequence[UserRecord]) -> np.ndarray:
    """Per-class means of the six profile counts (4 x 6, class-index rows)."""
    sums = np.zeros((len(PersonalityClass), len(COUNT_FIELDS)))
    sizes = np.zeros(len(PersonalityClass))
    for user in users:
        sums[int(user.personality)] += user.counts.to_vector()
        sizes[int(user.personality)] += 1
    empty = [PersonalityClass(i).label for i in range(len(PersonalityClass)) if sizes[i] == 0]
    if empty:
        raise ValidationError(f"metadata_stats: classes with no users: {empty}")
    return sums / sizes[:, None]


@dataclass
class ReadabilityTable:
    """4 x 8 per-class metric means with per-column min/max class flags."""

    means: np.ndarray
    min_class: list[PersonalityClass]
    max_class: list[PersonalityClass]


def readability_table(
    classes: Sequence[PersonalityClass], scores: np.ndarray
) -> ReadabilityTable:
    """Average per-user readability rows by class and flag column extremes.

    Ties on a column's min or max go to the lowest class index.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2 or scores.shape[1] != len(METRIC_NAMES):
        raise ValidationError(
            f"readability_table: expected (n, {len(METRIC_NAMES)}) scores, got {scores.shape}"
        )
    if scores.shape[0] != len(classes):
        raise ValidationError("readability_table: classes and scores must align")
    class_arr = np.array([int(c) for c in classes])
    means = np.zeros((len(PersonalityClass), len(METRIC_NAMES)))
    for cls in PersonalityClass:
        mask = class_arr == int(cls)
        if not mask.any():
            raise ValidationError(f"readability_table: class {cls.label} has no users")
        means[int(cls)] = scores[mask].mean(axis=0)
    return ReadabilityTable(
        means=means,
        min_class=[PersonalityClass(int(i)) for i in means.argmin(axis=0)],
        max_class=[PersonalityClass(int(i)) for i in means.argmax(axis=0)],
    )
