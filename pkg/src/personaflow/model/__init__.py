"""Classifiers, feature assembly, evaluation, and the ablation runner."""

from .ablation import AblationReport, cell_seed, run_ablation, write_report_csv
from .features import (
    PRESETS,
    AblationConfig,
    FeatureArtifacts,
    FeatureVector,
    Segment,
    assemble_features,
    assemble_matrix,
)
from .forest import ForestParams, RandomForest, train_random_forest
from .gbdt import GbdtParams, GradientBoostedTrees, train_gbdt
from .metrics import Metrics, evaluate

__all__ = [
    "AblationConfig",
    "AblationReport",
    "FeatureArtifacts",
    "FeatureVector",
    "ForestParams",
    "GbdtParams",
    "GradientBoostedTrees",
    "Metrics",
    "PRESETS",
    "RandomForest",
    "Segment",
    "assemble_features",
    "assemble_matrix",
    "cell_seed",
    "evaluate",
    "run_ablation",
    "train_gbdt",
    "train_random_forest",
    "write_report_csv",
]
