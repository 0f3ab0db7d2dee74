"""Lexical-category scoring, seed-term expansion, and per-class
distinctiveness ranking.

Lexicon files are TSV, one category per line::

    category<TAB>term1 term2 term3 ...

The bundled default has exactly 194 categories so feature vectors match
the expected dimensionality; it can be swapped for any file in the same
format.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .corpus import PersonalityClass
from .errors import SchemaError, ValidationError

DISTINCTNESS_EPS = 1e-9


@dataclass(frozen=True)
class Lexicon:
    """An ordered list of (category name, term set) pairs."""

    categories: tuple[tuple[str, frozenset[str]], ...]

    @property
    def size(self) -> int:
        return len(self.categories)

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.categories]

    def term_index(self) -> dict[str, list[int]]:
        """Invert the lexicon: term -> indices of categories containing it."""
        index: dict[str, list[int]] = {}
        for i, (_, terms) in enumerate(self.categories):
            for term in terms:
                index.setdefault(term, []).append(i)
        return index


def parse_lexicon(text: str) -> Lexicon:
    categories: list[tuple[str, frozenset[str]]] = []
    seen: set[str] = set()
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        name, sep, terms = line.partition("\t")
        if not sep or not name.strip():
            raise SchemaError(f"lexicon line {line_no}: expected 'category<TAB>terms'")
        name = name.strip()
        if name in seen:
            raise SchemaError(f"lexicon line {line_no}: duplicate category {name!r}")
        seen.add(name)
        categories.append((name, frozenset(terms.split())))
    if not categories:
        raise SchemaError("lexicon file has no categories")
    return Lexicon(categories=tuple(categories))


def load_lexicon(path: str | Path) -> Lexicon:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_lexicon(handle.read())


@lru_cache(maxsize=1)
def bundled_lexicon() -> Lexicon:
    text = resources.files("personaflow.data").joinpath("lexicon_194.tsv").read_text("utf-8")
    return parse_lexicon(text)


def score_categories(tokens: Sequence[str], lexicon: Lexicon) -> np.ndarray:
    """Per-category token-hit fractions for one user's concatenated tokens.

    Entry i is (tokens in category i) / (total tokens); a token may count
    toward several categories.
    """
    if not tokens:
        raise ValidationError("score_categories: empty token list")
    index = lexicon.term_index()
    scores = np.zeros(lexicon.size, dtype=np.float64)
    for token in tokens:
        for cat in index.get(token, ()):
            scores[cat] += 1.0
    return scores / len(tokens)


def expand_seeds(seeds: set[str], vectors, k: int) -> set[str]:
    """Grow a seed set with the k nearest vocabulary terms.

    Ranks non-seed vocabulary terms by mean cosine similarity to the seed
    vectors (ties broken lexicographically) and returns seeds plus the top
    k.  All seeds must be present in the vector table.
    """
    missing = sorted(s for s in seeds if s not in vectors.entries)
    if missing:
        raise ValidationError(f"expand_seeds: unknown seeds {missing}")
    if k < 0:
        raise ValidationError("expand_seeds: k must be nonnegative")
    if k == 0 or not seeds:
        return set(seeds)

    def unit(v: np.ndarray) -> np.ndarray:
        n = np.linalg.norm(v)
        return v / n if n > 0 else v

    seed_units = np.vstack([unit(vectors.entries[s]) for s in sorted(seeds)])
    scored: list[tuple[float, str]] = []
    for term in vectors.entries:
        if term in seeds:
            continue
        sim = float(np.mean(seed_units @ unit(vectors.entries[term])))
        scored.append((-sim, term))
    scored.sort()
    return set(seeds) | {term for _, term in scored[:k]}


def distinct_categories(
    per_user_scores: np.ndarray,
    classes: Sequence[PersonalityClass],
    lexicon: Lexicon,
    top_k: int,
) -> Mapping[PersonalityClass, list[str]]:
    """Rank categories by how class-specific their mean score is.

    Distinctiveness of category i for class c is the mean score inside c
    divided by the mean score outside c (plus a small epsilon).  Ties break
    lexicographically by category name.
    """
    scores = np.asarray(per_user_scores, dtype=np.float64)
    if scores.ndim != 2 or scores.shape[1] != lexicon.size:
        raise ValidationError(
            f"distinct_categories: expected scores of width {lexicon.size}, got {scores.shape}"
        )
    class_arr = np.array([int(c) for c in classes])
    result: dict[PersonalityClass, list[str]] = {}
    names = lexicon.names
    for cls in PersonalityClass:
        mask = class_arr == int(cls)
        if not mask.any():
            raise ValidationError(f"distinct_categories: class {cls.label} has no users")
        inside = scores[mask].mean(axis=0)
        outside = scores[~mask].mean(axis=0) if (~mask).any() else np.zeros(lexicon.size)
        ratio = inside / (outside + DISTINCTNESS_EPS)
        ranked = sorted(range(lexicon.size), key=lambda i: (-ratio[i], names[i]))
        result[cls] = [names[i] for i in ranked[:top_k]]
    return result
