"""The 9-configuration x 2-classifier ablation runner."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence, TextIO

import numpy as np

from ..corpus import CorpusSplit
from ..errors import PersonaflowError, ValidationError
from .features import PRESETS, AblationConfig, FeatureArtifacts, assemble_matrix
from .forest import ForestParams, train_random_forest
from .gbdt import GbdtParams, train_gbdt
from .metrics import Metrics, evaluate

CLASSIFIER_NAMES = ("random_forest", "gbdt")

# Canonical orderings used for seed derivation, so a cell's seed does not
# depend on which subset of the grid a run requests.
_CONFIG_ORDER = {name: i for i, name in enumerate(PRESETS)}
_CLASSIFIER_ORDER = {name: i for i, name in enumerate(CLASSIFIER_NAMES)}


def cell_seed(seed: int, config_name: str, classifier_name: str) -> int:
    """Deterministic per-cell seed: SeedSequence entropy (seed, config, classifier)."""
    seq = np.random.SeedSequence(
        (seed, _CONFIG_ORDER[config_name], _CLASSIFIER_ORDER[classifier_name])
    )
    return int(seq.generate_state(1, np.uint64)[0])


@dataclass
class AblationRow:
    config: str
    classifier: str
    encoder: str
    metrics: Metrics


@dataclass
class AblationReport:
    rows: list[AblationRow]
    seed: int
    encoder: str
    started_at: float = 0.0
    finished_at: float = 0.0
    feature_lengths: dict[str, int] = field(default_factory=dict)


def _train(classifier: str, X: np.ndarray, y: np.ndarray, seed: int, params: dict | None):
    params = params or {}
    if classifier == "random_forest":
        return train_random_forest(X, y, ForestParams(**params), seed=seed, n_classes=4)
    if classifier == "gbdt":
        return train_gbdt(X, y, GbdtParams(**params), seed=seed, n_classes=4)
    raise ValidationError(f"unknown classifier {classifier!r}")


def run_ablation(
    split: CorpusSplit,
    artifacts: FeatureArtifacts,
    configs: Sequence[str] | None = None,
    classifiers: Sequence[str] | None = None,
    seed: int = 0,
    encoder: str = "wordvec",
    classifier_params: dict[str, dict] | None = None,
    progress: Callable[[str], None] | None = None,
) -> AblationReport:
    """Train and evaluate every (configuration, classifier) cell.

    Feature matrices are assembled once per configuration; per-cell seeds
    are derived from the master seed and the cell's canonical grid position.
    Training errors are re-raised annotated with the failing cell.
    """
    config_names = list(configs) if configs is not None else list(PRESETS)
    classifier_names = list(classifiers) if classifiers is not None else list(CLASSIFIER_NAMES)
    unknown = [c for c in config_names if c not in PRESETS]
    if unknown:
        raise ValidationError(f"unknown ablation configs: {unknown}")
    unknown = [c for c in classifier_names if c not in _CLASSIFIER_ORDER]
    if unknown:
        raise ValidationError(f"unknown classifiers: {unknown}")

    train_ids = [u.user_id for u in split.train]
    test_ids = [u.user_id for u in split.test]
    y_train = np.array([int(u.personality) for u in split.train])
    y_test = np.array([int(u.personality) for u in split.test])

    report = AblationReport(rows=[], seed=seed, encoder=encoder, started_at=time.time())
    params = classifier_params or {}
    for config_name in config_names:
        config: AblationConfig = PRESETS[config_name]
        X_train, segments = assemble_matrix(train_ids, artifacts, config)
        X_test, _ = assemble_matrix(test_ids, artifacts, config)
        report.feature_lengths[config_name] = int(sum(s.length for s in segments))
        for classifier_name in classifier_names:
            if progress is not None:
                progress(f"{config_name}/{classifier_name}")
            try:
                model = _train(
                    classifier_name,
                    X_train,
                    y_train,
                    cell_seed(seed, config_name, classifier_name),
                    params.get(classifier_name),
                )
                metrics = evaluate(model.predict(X_test), y_test)
            except PersonaflowError as exc:
                raise type(exc)(f"[{config_name}/{classifier_name}] {exc}") from exc
            report.rows.append(
                AblationRow(
                    config=config_name,
                    classifier=classifier_name,
                    encoder=encoder,
                    metrics=metrics,
                )
            )
    report.finished_at = time.time()
    return report


def write_report_csv(report: AblationReport, handle: TextIO) -> None:
    """Fixed-format CSV: encoder,classifier,config,f1,accuracy at 4 decimals."""
    handle.write("encoder,classifier,config,f1,accuracy\n")
    for row in report.rows:
        handle.write(
            f"{row.encoder},{row.classifier},{row.config},"
            f"{row.metrics.macro_f1:.4f},{row.metrics.accuracy:.4f}\n"
        )
