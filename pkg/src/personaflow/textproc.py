"""Tweet text processing: entity separation, normalization, tokenization,
sentence splitting, syllable counting, and English detection.

All functions here are pure and operate on plain strings, so they are safe
to call from worker processes without shared state.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .errors import ValidationError

# Emoji coverage: the main pictographic planes plus the variation selector
# and zero-width joiner used to compose sequences.
_EMOJI_CLASS = "\U0001F300-\U0001FAFF☀-➿️‍"
_EMOJI_SEQ = re.compile(f"[{_EMOJI_CLASS}]+")

_HASHTAG = re.compile(r"#\w+\Z")
_MENTION = re.compile(r"@\w+\Z")
_URL_PREFIXES = ("http://", "https://", "www.")

_REPEAT = re.compile(r"(.)\1{3,}", re.DOTALL)
_NUMBER = re.compile(r"\d+(?:\.\d+)?")
_WHITESPACE = re.compile(r"\s+")

# Tokens are maximal runs of letters, digits, and apostrophes.
_TOKEN = re.compile(r"(?:[^\W_]|['’])+")
_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")
_VOWEL_GROUP = re.compile(r"[aeiouy]+")
_LETTER = re.compile(r"[^\W\d_]")


@dataclass
class SeparatedTweet:
    """A tweet split into clean text and its extracted entities."""

    clean_text: str
    hashtags: list[str] = field(default_factory=list)
    mentions: list[str] = field(default_factory=list)
    urls: list[str] = field(default_factory=list)
    emojis: list[str] = field(default_factory=list)


def separate_entities(raw: str) -> SeparatedTweet:
    """Extract hashtags, mentions, URLs, and emoji sequences from a tweet.

    Hashtags and mentions are recognized only as whole whitespace tokens
    (``#\\w+`` / ``@\\w+``); embedded marks like ``a#b`` stay in the clean
    text.  Emoji sequences are extracted wherever they occur, even glued to
    a word.  Every input token ends up in exactly one output bucket.
    """
    emojis = _EMOJI_SEQ.findall(raw)
    stripped = _EMOJI_SEQ.sub(" ", raw)

    hashtags: list[str] = []
    mentions: list[str] = []
    urls: list[str] = []
    clean: list[str] = []
    for token in stripped.split():
        if _HASHTAG.fullmatch(token):
            hashtags.append(token[1:].lower())
        elif _MENTION.fullmatch(token):
            mentions.append(token[1:])
        elif token.startswith(_URL_PREFIXES):
            urls.append(token)
        else:
            clean.append(token)
    return SeparatedTweet(
        clean_text=" ".join(clean),
        hashtags=hashtags,
        mentions=mentions,
        urls=urls,
        emojis=emojis,
    )


def normalize(clean_text: str) -> str:
    """Deterministic tweet normalization.

    Lowercases, caps character runs longer than three to exactly three,
    replaces numeric literals with ``<num>``, and collapses whitespace.
    Idempotent: normalizing twice gives the same string.
    """
    text = clean_text.lower()
    text = _REPEAT.sub(lambda m: m.group(1) * 3, text)
    text = _NUMBER.sub("<num>", text)
    return _WHITESPACE.sub(" ", text).strip()


def tokenize(text: str) -> list[str]:
    """Split text into maximal runs of letters, digits, and apostrophes."""
    return _TOKEN.findall(text)


def split_sentences(text: str) -> list[str]:
    """Split at '.', '!', or '?' followed by whitespace or end of text.

    Terminators stay attached to their sentence.  Abbreviation handling is
    deliberately naive: ``e.g. cats`` is two sentences under this rule.
    """
    stripped = text.strip()
    if not stripped:
        return []
    return [s for s in _SENTENCE_SPLIT.split(stripped) if s]


def count_syllables(word: str) -> int:
    """Heuristic syllable count for a single token.

    Counts maximal vowel groups (a, e, i, o, u, y), subtracts one for a
    terminal silent 'e' not preceded by 'l', and floors at 1.
    """
    if not word:
        raise ValidationError("count_syllables: empty word")
    w = word.lower()
    count = len(_VOWEL_GROUP.findall(w))
    if len(w) >= 2 and w.endswith("e") and w[-2] != "l":
        count -= 1
    return max(1, count)


@lru_cache(maxsize=1)
def common_english_words() -> frozenset[str]:
    """The bundled lowercase common-word list used by the English heuristic."""
    text = resources.files("personaflow.data").joinpath("english_common.txt").read_text("utf-8")
    return frozenset(text.split())


def detect_english(tweet: str, lang_tag: str | None = None) -> bool:
    """Decide whether a tweet is English.

    A provided language tag wins outright (``lang_tag == "en"``).  The
    fallback heuristic requires at least 20% of tokens to appear in the
    bundled common-word list and at least 60% of letters to be ASCII.
    """
    if lang_tag is not None:
        return lang_tag == "en"
    tokens = tokenize(tweet.lower())
    if not tokens:
        return False
    common = common_english_words()
    hit = sum(1 for t in tokens if t in common)
    if hit / len(tokens) < 0.2:
        return False
    letters = _LETTER.findall(tweet)
    if letters:
        ascii_frac = sum(1 for ch in letters if ord(ch) < 128) / len(letters)
        if ascii_frac < 0.6:
            return False
    return True
