"""The eight per-text readability metrics and their per-user averages.

Formulas follow the standard published definitions.  The Dale and Spache
familiar-word lists are pluggable text files (one lowercase word per line);
the bundled defaults are hand-assembled approximations of the classic
lists, documented in the README.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError, ValidationError
from .textproc import count_syllables, normalize, separate_entities, split_sentences, tokenize

METRIC_NAMES = (
    "flesch",
    "flesch_kincaid",
    "coleman_liau",
    "dale_chall",
    "gunning_fog",
    "ari",
    "linsear_write",
    "spache",
)


@dataclass(frozen=True)
class ReadabilityScores:
    """The eight metrics; vectorization order matches METRIC_NAMES."""

    flesch: float
    flesch_kincaid: float
    coleman_liau: float
    dale_chall: float
    gunning_fog: float
    ari: float
    linsear_write: float
    spache: float

    def to_vector(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in METRIC_NAMES], dtype=np.float64)


@dataclass(frozen=True)
class FamiliarLists:
    """Word sets for the Dale-Chall and Spache difficult-word counts."""

    dale: frozenset[str] | None
    spache: frozenset[str] | None


def load_word_list(path: str | Path) -> frozenset[str]:
    with open(path, "r", encoding="utf-8") as handle:
        return frozenset(w.strip() for w in handle if w.strip())


@lru_cache(maxsize=1)
def bundled_familiar_lists() -> FamiliarLists:
    data = resources.files("personaflow.data")
    return FamiliarLists(
        dale=frozenset(data.joinpath("dale_familiar.txt").read_text("utf-8").split()),
        spache=frozenset(data.joinpath("spache_familiar.txt").read_text("utf-8").split()),
    )


def compute_readability(text: str, familiar: FamiliarLists | None = None) -> ReadabilityScores:
    """Compute all eight metrics for one text.

    Requires at least one token.  Complex words are those with three or
    more syllables (no proper-noun exemption: tweet casing is unreliable).
    """
    if familiar is None:
        familiar = bundled_familiar_lists()
    if familiar.dale is None:
        raise ConfigError("missing familiar-word list: dale")
    if familiar.spache is None:
        raise ConfigError("missing familiar-word list: spache")

    words = tokenize(text)
    if not words:
        raise ValidationError("compute_readability: text has no tokens")
    sentences = split_sentences(text)
    n_words = len(words)
    n_sent = max(1, len(sentences))

    syllables = [count_syllables(w) for w in words]
    n_syll = sum(syllables)
    n_letters = sum(1 for w in words for ch in w if ch.isalpha())
    n_complex = sum(1 for s in syllables if s >= 3)
    n_easy = n_words - n_complex

    lowered = [w.lower() for w in words]
    n_dale_hard = sum(1 for w in lowered if w not in familiar.dale)
    n_spache_hard = sum(1 for w in lowered if w not in familiar.spache)

    wps = n_words / n_sent
    spw = n_syll / n_words

    flesch = 206.835 - 1.015 * wps - 84.6 * spw
    flesch_kincaid = 0.39 * wps + 11.8 * spw - 15.59
    coleman_liau = 0.0588 * (100.0 * n_letters / n_words) - 0.296 * (100.0 * n_sent / n_words) - 15.8

    pct_dale_hard = 100.0 * n_dale_hard / n_words
    dale_chall = 0.1579 * pct_dale_hard + 0.0496 * wps
    if pct_dale_hard > 5.0:
        dale_chall += 3.6365

    gunning_fog = 0.4 * (wps + 100.0 * n_complex / n_words)
    ari = 4.71 * (n_letters / n_words) + 0.5 * wps - 21.43

    r = (n_easy * 1.0 + n_complex * 3.0) / n_sent
    linsear_write = r / 2.0 - 1.0 if r <= 20.0 else r / 2.0

    spache = 0.141 * wps + 0.086 * (100.0 * n_spache_hard / n_words) + 0.839

    return ReadabilityScores(
        flesch=flesch,
        flesch_kincaid=flesch_kincaid,
        coleman_liau=coleman_liau,
        dale_chall=dale_chall,
        gunning_fog=gunning_fog,
        ari=ari,
        linsear_write=linsear_write,
        spache=spache,
    )


def tweet_readability_matrix(tweets: list[str], familiar: FamiliarLists | None = None) -> np.ndarray:
    """Score each tweet after cleaning and normalization; skip empty ones.

    Returns an (n_scoreable, 8) matrix.
    """
    rows = []
    for tweet in tweets:
        cleaned = normalize(separate_entities(tweet).clean_text)
        if not tokenize(cleaned):
            continue
        rows.append(compute_readability(cleaned, familiar).to_vector())
    if not rows:
        return np.empty((0, len(METRIC_NAMES)))
    return np.vstack(rows)


def user_readability(user, familiar: FamiliarLists | None = None) -> ReadabilityScores:
    """Average the per-tweet metrics over a user's scoreable tweets.

    Accepts a UserRecord or a plain list of raw tweet texts.
    """
    tweets = user.tweets if hasattr(user, "tweets") else user
    matrix = tweet_readability_matrix(tweets, familiar)
    if matrix.shape[0] == 0:
        raise ValidationError("user_readability: no scoreable tweets")
    means = matrix.mean(axis=0)
    return ReadabilityScores(**dict(zip(METRIC_NAMES, means.tolist())))
