"""Feature-vector assembly under ablation configurations.

Segments are concatenated in a fixed order -- tweets, description, empath,
readability, counts, url, hashtag, mention -- and disabled segments are
omitted entirely, so vector length itself encodes the configuration.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from ..errors import ConfigError, ValidationError


@dataclass(frozen=True)
class AblationConfig:
    """Feature-family switches; tweets are part of every configuration."""

    tweets_encoding: bool = True
    description_encoding: bool = True
    url_emb: bool = True
    hashtag_emb: bool = True
    mention_emb: bool = True
    readability: bool = True
    counts: bool = True
    empath: bool = True

    def __post_init__(self) -> None:
        if not self.tweets_encoding:
            raise ValidationError("tweets_encoding must be enabled in every configuration")

    def enabled_flags(self) -> list[str]:
        return [f.name for f in fields(self) if getattr(self, f.name)]


def _preset(**off: bool) -> AblationConfig:
    return AblationConfig(**{k: False for k in off})


# The nine report rows, in fixed emission order.
PRESETS: dict[str, AblationConfig] = {
    "all": AblationConfig(),
    "only_tweets": _preset(
        description_encoding=False,
        url_emb=False,
        hashtag_emb=False,
        mention_emb=False,
        readability=False,
        counts=False,
        empath=False,
    ),
    "wo_urls": _preset(url_emb=False),
    "wo_hashtags": _preset(hashtag_emb=False),
    "wo_mentions": _preset(mention_emb=False),
    "wo_entities": _preset(url_emb=False, hashtag_emb=False, mention_emb=False),
    "wo_readability": _preset(readability=False),
    "wo_counts": _preset(counts=False),
    "wo_empath": _preset(empath=False),
}


@dataclass(frozen=True)
class Segment:
    name: str
    offset: int
    length: int


@dataclass
class FeatureVector:
    """Assembled values plus the segment layout for auditing."""

    values: np.ndarray
    layout: tuple[Segment, ...]


@dataclass
class FeatureArtifacts:
    """Per-user feature matrices, row-aligned to ``user_ids``.

    Matrices for families that were never computed stay ``None``; asking
    for them through an enabled flag is a configuration error.
    """

    user_ids: list[str]
    tweets_enc: np.ndarray | None = None
    desc_enc: np.ndarray | None = None
    empath: np.ndarray | None = None
    readability: np.ndarray | None = None
    counts: np.ndarray | None = None
    url_emb: np.ndarray | None = None
    hashtag_emb: np.ndarray | None = None
    mention_emb: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.row_of = {uid: i for i, uid in enumerate(self.user_ids)}
        n = len(self.user_ids)
        for name in _SEGMENT_SOURCES.values():
            mat = getattr(self, name)
            if mat is not None and mat.shape[0] != n:
                raise ValidationError(f"artifact {name} has {mat.shape[0]} rows, expected {n}")


# segment name -> (flag attribute, artifact attribute)
_SEGMENT_ORDER = (
    ("tweets", "tweets_encoding", "tweets_enc"),
    ("description", "description_encoding", "desc_enc"),
    ("empath", "empath", "empath"),
    ("readability", "readability", "readability"),
    ("counts", "counts", "counts"),
    ("url", "url_emb", "url_emb"),
    ("hashtag", "hashtag_emb", "hashtag_emb"),
    ("mention", "mention_emb", "mention_emb"),
)
_SEGMENT_SOURCES = {name: attr for name, _, attr in _SEGMENT_ORDER}


def _layout(artifacts: FeatureArtifacts, config: AblationConfig) -> list[tuple[str, str]]:
    chosen: list[tuple[str, str]] = []
    for name, flag, attr in _SEGMENT_ORDER:
        if not getattr(config, flag):
            continue
        if getattr(artifacts, attr) is None:
            raise ConfigError(f"feature flag {flag!r} is enabled but artifact {attr!r} is missing")
        chosen.append((name, attr))
    return chosen


def assemble_matrix(
    user_ids: Sequence[str], artifacts: FeatureArtifacts, config: AblationConfig
) -> tuple[np.ndarray, tuple[Segment, ...]]:
    """Stack the enabled segments for the given users into one matrix."""
    chosen = _layout(artifacts, config)
    try:
        rows = np.array([artifacts.row_of[uid] for uid in user_ids])
    except KeyError as exc:
        raise ValidationError(f"unknown user_id {exc.args[0]!r} in feature assembly") from None
    blocks = []
    segments = []
    offset = 0
    for name, attr in chosen:
        mat = getattr(artifacts, attr)
        block = mat[rows] if len(rows) else mat[:0]
        blocks.append(block)
        segments.append(Segment(name=name, offset=offset, length=mat.shape[1]))
        offset += mat.shape[1]
    values = np.hstack(blocks) if blocks else np.zeros((len(user_ids), 0))
    return values, tuple(segments)


def assemble_features(
    user_id: str, artifacts: FeatureArtifacts, config: AblationConfig
) -> FeatureVector:
    """Assemble one user's vector under a configuration."""
    values, segments = assemble_matrix([user_id], artifacts, config)
    return FeatureVector(values=values[0], layout=segments)
