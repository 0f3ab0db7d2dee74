"""Planted synthetic corpora for validation and demos.

Each personality class gets its own tweet vocabulary (drawn from bundled
lexicon categories), its own hashtag pool, and exclusive description
"profession" tokens.  A configurable fraction of users tweet with another
class's vocabulary while keeping their true hashtags, which makes hashtag
embeddings genuinely informative beyond the text encoding.  Word vectors
align class words with fixed per-class directions, so averaged encodings
separate the classes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import PersonalityClass, ProfileCounts, UserRecord, MbtiType
from .embeddings import WordVectorTable, save_word_vectors

_CODES = {
    PersonalityClass.ANALYST: ("intp", "intj", "entj", "entp"),
    PersonalityClass.DIPLOMAT: ("enfj", "infj", "infp", "enfp"),
    PersonalityClass.SENTINEL: ("estj", "esfj", "isfj", "istj"),
    PersonalityClass.EXPLORER: ("isfp", "istp", "estp", "esfp"),
}

# Tweet vocabularies per class; terms overlap the bundled lexicon categories
# (programming/science for analysts, politics/negotiate for diplomats,
# office/exercise for sentinels, dance/music/beach for explorers).
_CLASS_WORDS = {
    PersonalityClass.ANALYST: (
        "programming code software developer algorithm compiler python database repository "
        "science research experiment hypothesis physics theory logic philosophy ethics "
        "metaphysics rational epistemology optimization architecture quantitative"
    ).split(),
    PersonalityClass.DIPLOMAT: (
        "politics political election campaign vote policy senator ballot negotiate bargain "
        "compromise mediate settlement diplomacy sympathy compassion empathy understanding "
        "community idealism justice solidarity advocacy narrative"
    ).split(),
    PersonalityClass.SENTINEL: (
        "office desk meeting paperwork manager staff schedule exercise workout gym fitness "
        "training health wellness checkup routine discipline organized dependable practical "
        "accounting ledger insurance protocol"
    ).split(),
    PersonalityClass.EXPLORER: (
        "dance dancing rhythm salsa tango groove music song melody concert guitar band beach "
        "surf wave ocean sunshine adventure spontaneous vibe festival party travel wander"
    ).split(),
}

_FILLER_WORDS = (
    "the and you for that with this just have like today good time day really great new "
    "about what when from over some more they will then your know think make want feel "
    "going back still much need people thing little"
).split()

_CLASS_HASHTAGS = {
    PersonalityClass.ANALYST: ["coding", "devlife", "sciencedaily", "logicfirst", "deepwork", "systems"],
    PersonalityClass.DIPLOMAT: ["forthepeople", "changemakers", "empathymatters", "votefuture", "community", "ideals"],
    PersonalityClass.SENTINEL: ["worklife", "fitroutine", "planahead", "orderly", "healthyhabits", "reliable"],
    PersonalityClass.EXPLORER: ["dancefloor", "livemusic", "beachday", "goodvibes", "wanderlust", "festivalseason"],
}
_SHARED_HASHTAGS = ["monday", "weekend", "coffee", "news", "random", "mood"]

_SHARED_URLS = [
    "https://news.example/daily",
    "https://video.example/watch",
    "https://blog.example/post",
    "https://pics.example/feed",
]
_SHARED_MENTIONS = ["newsbot", "dailyquote", "weathernow", "memecentral", "pollster"]

_PROFESSIONS = {
    PersonalityClass.ANALYST: ["engineer", "scientist", "trader"],
    PersonalityClass.DIPLOMAT: ["campaigner", "novelist", "counselor"],
    PersonalityClass.SENTINEL: ["dentist", "surgeon", "accountant"],
    PersonalityClass.EXPLORER: ["dancer", "photographer", "skater"],
}
_DESC_FILLER = "sharing daily thoughts and moments from life enjoy follow along".split()

_EMOJIS = ["\U0001F389", "\U0001F600", "\U0001F30A", "✨", "\U0001F3B6"]

# Planted per-class count scales: explorers post/favourite the most,
# analysts are listed the most.
_COUNT_SCALES = {
    PersonalityClass.ANALYST: {"followers": 900, "friends": 350, "media": 80, "listed": 60, "statuses": 2200, "favourites": 1500},
    PersonalityClass.DIPLOMAT: {"followers": 700, "friends": 420, "media": 120, "listed": 40, "statuses": 3000, "favourites": 4200},
    PersonalityClass.SENTINEL: {"followers": 500, "friends": 380, "media": 150, "listed": 25, "statuses": 3600, "favourites": 3300},
    PersonalityClass.EXPLORER: {"followers": 600, "friends": 500, "media": 260, "listed": 12, "statuses": 5200, "favourites": 5600},
}


@dataclass(frozen=True)
class SyntheticSpec:
    n_per_class: int = 1000
    tweets_per_user: int = 30
    vector_dim: int = 16
    class_word_rate: float = 0.4
    text_confusion_rate: float = 0.12
    class_hashtag_rate: float = 0.8
    shared_hashtag_rate: float = 0.25
    url_rate: float = 0.3
    mention_rate: float = 0.3
    emoji_rate: float = 0.15
    seed: int = 20240501


def build_vector_table(spec: SyntheticSpec) -> WordVectorTable:
    """Vectors for every tweet word: class words follow per-class directions."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((spec.seed, 7))))
    dim = spec.vector_dim
    centers = {cls: rng.normal(size=dim) for cls in PersonalityClass}
    for cls, center in centers.items():
        centers[cls] = center / np.linalg.norm(center)
    table = WordVectorTable(dim=dim)
    for cls in PersonalityClass:
        for word in _CLASS_WORDS[cls]:
            table.entries[word] = centers[cls] + 0.6 * rng.normal(size=dim)
    for word in _FILLER_WORDS:
        table.entries[word] = 0.6 * rng.normal(size=dim)
    for words in _PROFESSIONS.values():
        for word in words:
            table.entries[word] = 0.6 * rng.normal(size=dim)
    for word in _DESC_FILLER:
        if word not in table.entries:
            table.entries[word] = 0.6 * rng.normal(size=dim)
    return table


def _make_tweet(rng: np.random.Generator, text_class: PersonalityClass,
                true_class: PersonalityClass, spec: SyntheticSpec) -> str:
    n_words = int(rng.integers(6, 13))
    words = []
    for _ in range(n_words):
        if rng.random() < spec.class_word_rate:
            pool = _CLASS_WORDS[text_class]
        else:
            pool = _FILLER_WORDS
        words.append(pool[rng.integers(len(pool))])
    parts = [" ".join(words) + ("!" if rng.random() < 0.2 else ".")]
    if rng.random() < spec.class_hashtag_rate:
        tags = _CLASS_HASHTAGS[true_class]
        parts.append("#" + tags[rng.integers(len(tags))])
    if rng.random() < spec.shared_hashtag_rate:
        parts.append("#" + _SHARED_HASHTAGS[rng.integers(len(_SHARED_HASHTAGS))])
    if rng.random() < spec.url_rate:
        parts.append(_SHARED_URLS[rng.integers(len(_SHARED_URLS))])
    if rng.random() < spec.mention_rate:
        parts.append("@" + _SHARED_MENTIONS[rng.integers(len(_SHARED_MENTIONS))])
    if rng.random() < spec.emoji_rate:
        parts.append(_EMOJIS[rng.integers(len(_EMOJIS))])
    return " ".join(parts)


def generate_users(spec: SyntheticSpec) -> list[UserRecord]:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((spec.seed, 11))))
    users: list[UserRecord] = []
    classes = list(PersonalityClass)
    for cls in classes:
        for i in range(spec.n_per_class):
            confused = rng.random() < spec.text_confusion_rate
            text_class = cls
            if confused:
                others = [c for c in classes if c != cls]
                text_class = others[rng.integers(len(others))]
            tweets = [
                _make_tweet(rng, text_class, cls, spec) for _ in range(spec.tweets_per_user)
            ]
            profession = _PROFESSIONS[cls][rng.integers(len(_PROFESSIONS[cls]))]
            fillers = [
                _DESC_FILLER[rng.integers(len(_DESC_FILLER))] for _ in range(4)
            ]
            description = profession + " " + " ".join(fillers)
            scales = _COUNT_SCALES[cls]
            # heavy per-user lognormal spread keeps class means ordered while
            # leaving individual counts only weakly informative
            counts = ProfileCounts(
                **{
                    k: int(rng.poisson(v * float(np.exp(rng.normal(0.0, 0.8)))))
                    for k, v in scales.items()
                }
            )
            code = _CODES[cls][rng.integers(len(_CODES[cls]))]
            users.append(
                UserRecord(
                    user_id=f"{cls.label.lower()}_{i:05d}",
                    description=description,
                    tweets=tweets,
                    counts=counts,
                    label=MbtiType(code),
                    lang_tags=["en"] * spec.tweets_per_user,
                )
            )
    return users


def write_corpus(users: list[UserRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for user in users:
            obj = {
                "user_id": user.user_id,
                "description": user.description,
                "tweets": user.tweets,
                "lang": user.lang_tags,
                "counts": {k: getattr(user.counts, k) for k in
                           ("followers", "friends", "media", "listed", "statuses", "favourites")},
                "label": user.label.code,
            }
            handle.write(json.dumps(obj, ensure_ascii=False) + "\n")


def write_dataset(directory: str | Path, spec: SyntheticSpec) -> dict[str, Path]:
    """Generate and write corpus.jsonl plus vectors.txt under ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    corpus_path = directory / "corpus.jsonl"
    vectors_path = directory / "vectors.txt"
    write_corpus(generate_users(spec), corpus_path)
    save_word_vectors(build_vector_table(spec), vectors_path)
    return {"corpus": corpus_path, "vectors": vectors_path}
