"""Declarative run configuration.

The config file is YAML with nested sections; every pipeline command takes
the same file so one document describes a whole reproducible run.  ``seed``
is mandatory.  All referenced input paths must exist when the config is
loaded; ``null`` paths fall back to the bundled data files where one
exists.  Command-line flags (and their ``PF_*`` environment variables)
override ``seed``, ``paths.output``, and the worker count.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError
from .model.ablation import CLASSIFIER_NAMES
from .model.features import PRESETS

_PATH_KEYS = (
    "corpus",
    "word_vectors",
    "lexicon",
    "dale_list",
    "spache_list",
    "stopwords",
    "external_tweet_encodings",
    "external_description_encodings",
)


@dataclass
class RunConfig:
    seed: int
    config_dir: Path
    paths: dict[str, Path | None]
    output: Path
    train_per_class: int = 4000
    test_per_class: int = 1000
    min_df: float = 0.02
    min_support: int = 20
    min_english_tweets: int = 100
    ablation_configs: list[str] = field(default_factory=lambda: list(PRESETS))
    classifiers: list[str] = field(default_factory=lambda: list(CLASSIFIER_NAMES))
    classifier_params: dict[str, dict] = field(default_factory=dict)
    embedder_params: dict[str, float | int] = field(default_factory=dict)
    top_k_professions: int = 5
    top_k_categories: int = 7
    render_figures: bool = True
    workers: int = 0  # 0 = all available cores

    def effective_workers(self) -> int:
        return self.workers if self.workers > 0 else (os.cpu_count() or 1)


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"missing config key: {where}{key}")
    return section[key]


def _check_known(section: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ConfigError(f"unknown config key(s) under {where or 'top level'}: {unknown}")


def load_config(
    path: str | Path,
    seed_override: int | None = None,
    out_override: str | None = None,
    workers_override: int | None = None,
) -> RunConfig:
    """Parse and validate a YAML run configuration."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a mapping at the top level")

    _check_known(
        raw,
        {"seed", "paths", "sampling", "thresholds", "ablation", "classifier_params",
         "embedder", "analysis", "report", "workers"},
        "",
    )

    seed = seed_override if seed_override is not None else raw.get("seed")
    if seed is None:
        raise ConfigError("missing config key: seed (mandatory)")
    if not isinstance(seed, int):
        raise ConfigError(f"seed must be an integer, got {seed!r}")

    base = path.parent
    paths_raw = raw.get("paths", {})
    if not isinstance(paths_raw, dict):
        raise ConfigError("paths section must be a mapping")
    _check_known(paths_raw, set(_PATH_KEYS) | {"output"}, "paths.")
    paths: dict[str, Path | None] = {}
    for key in _PATH_KEYS:
        value = paths_raw.get(key)
        if value is None:
            paths[key] = None
            continue
        resolved = (base / value).resolve() if not Path(value).is_absolute() else Path(value)
        if not resolved.exists():
            raise ConfigError(f"paths.{key}: file does not exist: {resolved}")
        paths[key] = resolved

    if out_override is not None:
        output = Path(out_override)
    else:
        out_value = paths_raw.get("output", "out")
        output = (base / out_value) if not Path(out_value).is_absolute() else Path(out_value)

    sampling = raw.get("sampling", {})
    _check_known(sampling, {"train_per_class", "test_per_class"}, "sampling.")
    thresholds = raw.get("thresholds", {})
    _check_known(thresholds, {"min_df", "min_support", "min_english_tweets"}, "thresholds.")
    ablation = raw.get("ablation", {})
    _check_known(ablation, {"configs", "classifiers"}, "ablation.")
    analysis = raw.get("analysis", {})
    _check_known(analysis, {"top_k_professions", "top_k_categories"}, "analysis.")
    report = raw.get("report", {})
    _check_known(report, {"figures"}, "report.")
    embedder = raw.get("embedder", {})
    _check_known(
        embedder,
        {"learning_rate", "batch_size", "epochs", "hidden1"},
        "embedder.",
    )
    classifier_params = raw.get("classifier_params", {})
    _check_known(classifier_params, set(CLASSIFIER_NAMES), "classifier_params.")

    configs = ablation.get("configs", list(PRESETS))
    unknown = [c for c in configs if c not in PRESETS]
    if unknown:
        raise ConfigError(f"ablation.configs: unknown preset(s) {unknown}; valid: {list(PRESETS)}")
    classifiers = ablation.get("classifiers", list(CLASSIFIER_NAMES))
    unknown = [c for c in classifiers if c not in CLASSIFIER_NAMES]
    if unknown:
        raise ConfigError(
            f"ablation.classifiers: unknown name(s) {unknown}; valid: {list(CLASSIFIER_NAMES)}"
        )

    workers = workers_override if workers_override is not None else raw.get("workers", 0)
    if not isinstance(workers, int) or workers < 0:
        raise ConfigError(f"workers must be a nonnegative integer, got {workers!r}")

    return RunConfig(
        seed=seed,
        config_dir=base,
        paths=paths,
        output=output,
        train_per_class=int(sampling.get("train_per_class", 4000)),
        test_per_class=int(sampling.get("test_per_class", 1000)),
        min_df=float(thresholds.get("min_df", 0.02)),
        min_support=int(thresholds.get("min_support", 20)),
        min_english_tweets=int(thresholds.get("min_english_tweets", 100)),
        ablation_configs=list(configs),
        classifiers=list(classifiers),
        classifier_params={k: dict(v or {}) for k, v in classifier_params.items()},
        embedder_params=dict(embedder),
        top_k_professions=int(analysis.get("top_k_professions", 5)),
        top_k_categories=int(analysis.get("top_k_categories", 7)),
        render_figures=bool(report.get("figures", True)),
        workers=workers,
    )
