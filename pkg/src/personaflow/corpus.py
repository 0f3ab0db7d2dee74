"""Corpus schema, label derivation, eligibility filtering, class mapping,
and balanced train/test sampling.

Corpus files are JSON Lines, one user per line::

    {"user_id": "...", "description": "...", "tweets": ["...", ...],
     "lang": ["en", ...],                # optional, one tag per tweet
     "counts": {"followers": 0, "friends": 0, "media": 0,
                "listed": 0, "statuses": 0, "favourites": 0},
     "label": "intp"}                    # optional if derivable from tweets

Unknown fields are ignored.  Splits are reproducible across runs: all
sampling uses NumPy's PCG64 generator seeded through ``SeedSequence``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Iterator, TextIO

import numpy as np

from .errors import SchemaError, ValidationError
from .textproc import detect_english

MAX_TWEETS = 3200

_CODE_ALPHABETS = ("ie", "ns", "tf", "jp")


class PersonalityClass(IntEnum):
    """The four-way grouping of the sixteen type codes, in fixed report order."""

    ANALYST = 0
    DIPLOMAT = 1
    SENTINEL = 2
    EXPLORER = 3

    @property
    def label(self) -> str:
        return self.name.capitalize()


CLASS_NAMES = [c.label for c in PersonalityClass]


@dataclass(frozen=True)
class MbtiType:
    """A validated four-letter lowercase type code such as ``intp``."""

    code: str

    def __post_init__(self) -> None:
        validate_code(self.code)


def validate_code(code: str) -> None:
    """Raise ValidationError naming the first offending character position."""
    if len(code) != 4:
        raise ValidationError(f"type code {code!r} must have exactly 4 characters")
    for pos, (ch, allowed) in enumerate(zip(code, _CODE_ALPHABETS)):
        if ch not in allowed:
            raise ValidationError(
                f"type code {code!r}: character {pos} is {ch!r}, expected one of {allowed!r}"
            )


def map_class(label: MbtiType | str) -> PersonalityClass:
    """Map a sixteen-type code to its personality class.

    Intuitive types split on thinking/feeling (Analyst/Diplomat); observant
    types split on judging/prospecting (Sentinel/Explorer).
    """
    code = label.code if isinstance(label, MbtiType) else label
    validate_code(code)
    if code[1] == "n":
        return PersonalityClass.ANALYST if code[2] == "t" else PersonalityClass.DIPLOMAT
    return PersonalityClass.SENTINEL if code[3] == "j" else PersonalityClass.EXPLORER


COUNT_FIELDS = ("followers", "friends", "media", "listed", "statuses", "favourites")


@dataclass(frozen=True)
class ProfileCounts:
    """The six profile metadata counts; vectorization order is field order."""

    followers: int = 0
    friends: int = 0
    media: int = 0
    listed: int = 0
    statuses: int = 0
    favourites: int = 0

    def __post_init__(self) -> None:
        for name in COUNT_FIELDS:
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValidationError(f"counts.{name} must be a nonnegative integer, got {value!r}")

    def to_vector(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in COUNT_FIELDS], dtype=np.float64)


@dataclass
class UserRecord:
    """One user: tweets, description, profile counts, and the derived labels."""

    user_id: str
    description: str
    tweets: list[str]
    counts: ProfileCounts
    label: MbtiType
    lang_tags: list[str] | None = None
    personality: PersonalityClass = field(init=False)

    def __post_init__(self) -> None:
        if len(self.tweets) > MAX_TWEETS:
            raise ValidationError(
                f"user {self.user_id!r} has {len(self.tweets)} tweets, max is {MAX_TWEETS}"
            )
        if self.lang_tags is not None and len(self.lang_tags) != len(self.tweets):
            raise ValidationError(
                f"user {self.user_id!r}: lang tag count {len(self.lang_tags)} "
                f"!= tweet count {len(self.tweets)}"
            )
        self.personality = map_class(self.label)


class Ambiguous:
    """Sentinel outcome of derive_label when a user shared conflicting type links."""

    def __repr__(self) -> str:  # pragma: no cover
        return "AMBIGUOUS"


AMBIGUOUS = Ambiguous()

_PTYPE_LINK = re.compile(r"16personalities\.com/([a-z]{4})-personality", re.IGNORECASE)


def derive_label(tweets: Iterable[str]) -> MbtiType | Ambiguous | None:
    """Derive a type label from shared personality-type links.

    Scans tweets for ``16personalities.com/<code>-personality`` links and
    collects the distinct valid codes.  Exactly one code yields the label;
    none yields ``None``; more than one yields the ``AMBIGUOUS`` sentinel
    (such users are dropped, not errors).
    """
    found: set[str] = set()
    for tweet in tweets:
        for match in _PTYPE_LINK.finditer(tweet):
            code = match.group(1).lower()
            try:
                validate_code(code)
            except ValidationError:
                continue
            found.add(code)
    if not found:
        return None
    if len(found) > 1:
        return AMBIGUOUS
    return MbtiType(found.pop())


def filter_eligible(users: Iterable[UserRecord], min_english_tweets: int = 100) -> list[UserRecord]:
    """Keep users with at least ``min_english_tweets`` English tweets.

    Non-English tweets are dropped from retained users; input order is
    preserved.  Uses per-tweet language tags when present, otherwise the
    bundled heuristic.
    """
    kept: list[UserRecord] = []
    for user in users:
        tags = user.lang_tags if user.lang_tags is not None else [None] * len(user.tweets)
        english = [t for t, tag in zip(user.tweets, tags) if detect_english(t, tag)]
        if len(english) >= min_english_tweets:
            kept.append(
                UserRecord(
                    user_id=user.user_id,
                    description=user.description,
                    tweets=english,
                    counts=user.counts,
                    label=user.label,
                    lang_tags=None,
                )
            )
    return kept


@dataclass
class CorpusSplit:
    """A class-balanced train/test split with its seed and any sampling warnings."""

    train: list[UserRecord]
    test: list[UserRecord]
    seed: int
    warnings: list[str] = field(default_factory=list)

    def manifest(self) -> dict:
        per_class: dict[str, dict[str, int]] = {}
        for cls in PersonalityClass:
            per_class[cls.label] = {
                "train": sum(1 for u in self.train if u.personality == cls),
                "test": sum(1 for u in self.test if u.personality == cls),
            }
        return {
            "seed": self.seed,
            "per_class": per_class,
            "train_user_ids": [u.user_id for u in self.train],
            "test_user_ids": [u.user_id for u in self.test],
            "warnings": list(self.warnings),
        }


def balanced_split(
    users: list[UserRecord],
    n_train_per_class: int,
    n_test_per_class: int,
    seed: int,
) -> CorpusSplit:
    """Sample a per-class balanced split without replacement.

    Train users are drawn first, test users from the remainder.  A class
    with fewer than ``n_train + n_test`` users allocates train-first and
    records a warning.  Identical seeds give identical splits.
    """
    if n_train_per_class < 0 or n_test_per_class < 0:
        raise ValidationError("split sizes must be nonnegative")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    by_class: dict[PersonalityClass, list[UserRecord]] = {c: [] for c in PersonalityClass}
    for user in users:
        by_class[user.personality].append(user)

    train: list[UserRecord] = []
    test: list[UserRecord] = []
    warnings: list[str] = []
    for cls in PersonalityClass:
        pool = by_class[cls]
        order = rng.permutation(len(pool))
        shuffled = [pool[i] for i in order]
        n_train = min(n_train_per_class, len(shuffled))
        n_test = min(n_test_per_class, len(shuffled) - n_train)
        if len(shuffled) < n_train_per_class + n_test_per_class:
            warnings.append(
                f"{cls.label}: requested {n_train_per_class}+{n_test_per_class} users "
                f"but only {len(shuffled)} available (allocated {n_train}+{n_test})"
            )
        train.extend(shuffled[:n_train])
        test.extend(shuffled[n_train : n_train + n_test])
    return CorpusSplit(train=train, test=test, seed=seed, warnings=warnings)


def _parse_record(obj: dict, line_no: int) -> UserRecord | None:
    """Build a UserRecord from one decoded JSONL object.

    Returns None when the label is missing and cannot be derived
    unambiguously (the user is dropped, matching the collection rules).
    """
    if not isinstance(obj, dict):
        raise SchemaError(f"line {line_no}: record must be a JSON object")
    try:
        user_id = obj["user_id"]
        tweets = obj["tweets"]
        counts_obj = obj["counts"]
    except KeyError as exc:
        raise SchemaError(f"line {line_no}: missing required field {exc.args[0]!r}") from None
    if not isinstance(user_id, str):
        raise SchemaError(f"line {line_no}: user_id must be a string")
    if not isinstance(tweets, list) or not all(isinstance(t, str) for t in tweets):
        raise SchemaError(f"line {line_no}: tweets must be an array of strings")
    if not isinstance(counts_obj, dict):
        raise SchemaError(f"line {line_no}: counts must be an object")
    unknown = set(counts_obj) - set(COUNT_FIELDS)
    missing = set(COUNT_FIELDS) - set(counts_obj)
    if missing:
        raise SchemaError(f"line {line_no}: counts missing fields {sorted(missing)}")
    if unknown:
        raise SchemaError(f"line {line_no}: counts has unknown fields {sorted(unknown)}")

    label_code = obj.get("label")
    if label_code is None:
        derived = derive_label(tweets)
        if derived is None or isinstance(derived, Ambiguous):
            return None
        label = derived
    else:
        if not isinstance(label_code, str):
            raise SchemaError(f"line {line_no}: label must be a string")
        label = MbtiType(label_code.lower())

    lang = obj.get("lang")
    if lang is not None and (
        not isinstance(lang, list) or not all(isinstance(t, str) for t in lang)
    ):
        raise SchemaError(f"line {line_no}: lang must be an array of strings")

    try:
        counts = ProfileCounts(**{k: counts_obj[k] for k in COUNT_FIELDS})
        return UserRecord(
            user_id=user_id,
            description=obj.get("description", ""),
            tweets=tweets,
            counts=counts,
            label=label,
            lang_tags=lang,
        )
    except ValidationError as exc:
        raise SchemaError(f"line {line_no}: {exc}") from None


def read_jsonl(path: str | Path) -> Iterator[UserRecord]:
    """Stream user records from a JSONL corpus file.

    Records whose label is absent and underivable (no link, or conflicting
    links) are skipped.  Malformed lines raise SchemaError with the line
    number.
    """
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"line {line_no}: invalid JSON ({exc.msg})") from None
            record = _parse_record(obj, line_no)
            if record is not None:
                yield record


def write_jsonl(users: Iterable[UserRecord], handle: TextIO) -> None:
    """Write user records as JSONL, including the derived class for readers."""
    for user in users:
        obj = {
            "user_id": user.user_id,
            "description": user.description,
            "tweets": user.tweets,
            "counts": {name: getattr(user.counts, name) for name in COUNT_FIELDS},
            "label": user.label.code,
            "class": user.personality.label,
        }
        handle.write(json.dumps(obj, ensure_ascii=False) + "\n")
