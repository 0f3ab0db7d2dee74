"""Report bundle emission: CSV tables, a markdown report, JSON plot-data
series, and rendered PNG figures.

Identical inputs produce byte-identical tables, markdown, and plot JSON:
number formatting is fixed and no timestamps are written into data files.
Figures are rendered with a pinned style on the Agg backend.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import ClassTokenScore, ReadabilityTable
from .corpus import COUNT_FIELDS, PersonalityClass
from .errors import ValidationError
from .model.ablation import AblationReport, write_report_csv
from .readability import METRIC_NAMES

_FLOAT_FMT = "{:.4f}"

_RC = {
    "figure.dpi": 100,
    "figure.figsize": (8.0, 4.5),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "svg.hashsalt": "personaflow",
}

_CLASS_COLORS = ("#4c72b0", "#dd8452", "#55a868", "#c44e52")


@dataclass
class AnalysisBundle:
    """Everything the report embeds besides the ablation grid."""

    readability: ReadabilityTable
    metadata_means: np.ndarray
    professions: dict[PersonalityClass, list[ClassTokenScore]]
    distinct_categories: dict[PersonalityClass, list[str]]
    seed: int
    n_users_per_class: dict[str, int] = field(default_factory=dict)


def _fmt(value: float) -> str:
    return _FLOAT_FMT.format(value)


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def _readability_csv(table: ReadabilityTable) -> str:
    lines = ["class," + ",".join(METRIC_NAMES)]
    for cls in PersonalityClass:
        row = [cls.label] + [_fmt(v) for v in table.means[int(cls)]]
        lines.append(",".join(row))
    flags_min = ["min"] + [table.min_class[j].label for j in range(len(METRIC_NAMES))]
    flags_max = ["max"] + [table.max_class[j].label for j in range(len(METRIC_NAMES))]
    lines.append(",".join(flags_min))
    lines.append(",".join(flags_max))
    return "\n".join(lines) + "\n"


def _metadata_csv(means: np.ndarray) -> str:
    lines = ["class," + ",".join(COUNT_FIELDS)]
    for cls in PersonalityClass:
        lines.append(",".join([cls.label] + [_fmt(v) for v in means[int(cls)]]))
    return "\n".join(lines) + "\n"


def _professions_csv(professions: dict[PersonalityClass, list[ClassTokenScore]]) -> str:
    lines = ["class,rank,token,probability,support"]
    for cls in PersonalityClass:
        for rank, score in enumerate(professions[cls], start=1):
            lines.append(
                f"{cls.label},{rank},{score.token},{_fmt(score.probability)},{score.support}"
            )
    return "\n".join(lines) + "\n"


def _categories_csv(categories: dict[PersonalityClass, list[str]]) -> str:
    lines = ["class,rank,category"]
    for cls in PersonalityClass:
        for rank, name in enumerate(categories[cls], start=1):
            lines.append(f"{cls.label},{rank},{name}")
    return "\n".join(lines) + "\n"


def _md_table(header: list[str], rows: list[list[str]]) -> str:
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for row in rows:
        out.append("| " + " | ".join(row) + " |")
    return "\n".join(out)


def _report_md(bundle: AnalysisBundle, ablation: AblationReport | None) -> str:
    parts = ["# Corpus analysis report", "", f"Seed: {bundle.seed}", ""]
    if bundle.n_users_per_class:
        parts.append("Users per class: " + ", ".join(
            f"{name}={count}" for name, count in sorted(bundle.n_users_per_class.items())
        ))
        parts.append("")

    parts.append("## Readability by class")
    parts.append("")
    parts.append("Column minima and maxima are shown in bold.")
    parts.append("")
    rows = []
    for cls in PersonalityClass:
        row = [cls.label]
        for j in range(len(METRIC_NAMES)):
            cell = _fmt(bundle.readability.means[int(cls), j])
            if bundle.readability.min_class[j] == cls or bundle.readability.max_class[j] == cls:
                cell = f"**{cell}**"
            row.append(cell)
        rows.append(row)
    parts.append(_md_table(["class", *METRIC_NAMES], rows))
    parts.append("")

    parts.append("## Profile metadata means")
    parts.append("")
    rows = [
        [cls.label] + [_fmt(v) for v in bundle.metadata_means[int(cls)]]
        for cls in PersonalityClass
    ]
    parts.append(_md_table(["class", *COUNT_FIELDS], rows))
    parts.append("")

    parts.append("## Most distinct description tokens")
    parts.append("")
    depth = max((len(v) for v in bundle.professions.values()), default=0)
    rows = []
    for rank in range(depth):
        row = []
        for cls in PersonalityClass:
            entries = bundle.professions[cls]
            row.append(entries[rank].token if rank < len(entries) else "")
        rows.append(row)
    parts.append(_md_table([c.label for c in PersonalityClass], rows))
    parts.append("")

    parts.append("## Most distinct lexical categories")
    parts.append("")
    depth = max((len(v) for v in bundle.distinct_categories.values()), default=0)
    rows = []
    for rank in range(depth):
        row = []
        for cls in PersonalityClass:
            entries = bundle.distinct_categories[cls]
            row.append(entries[rank] if rank < len(entries) else "")
        rows.append(row)
    parts.append(_md_table([c.label for c in PersonalityClass], rows))
    parts.append("")

    if ablation is not None and ablation.rows:
        parts.append("## Ablation grid")
        parts.append("")
        parts.append("F1 is macro-averaged over the four classes (unweighted).")
        parts.append("")
        rows = [
            [row.encoder, row.classifier, row.config,
             _fmt(row.metrics.macro_f1), _fmt(row.metrics.accuracy)]
            for row in ablation.rows
        ]
        parts.append(_md_table(["encoder", "classifier", "config", "f1", "accuracy"], rows))
        parts.append("")
    return "\n".join(parts)


def _plot_data(bundle: AnalysisBundle, ablation: AblationReport | None) -> dict[str, dict]:
    class_labels = [c.label for c in PersonalityClass]
    plots: dict[str, dict] = {
        "metadata_means": {
            "classes": class_labels,
            "series": {
                name: [float(bundle.metadata_means[int(c), j]) for c in PersonalityClass]
                for j, name in enumerate(COUNT_FIELDS)
            },
        },
        "readability_means": {
            "classes": class_labels,
            "series": {
                name: [float(bundle.readability.means[int(c), j]) for c in PersonalityClass]
                for j, name in enumerate(METRIC_NAMES)
            },
        },
    }
    if ablation is not None and ablation.rows:
        configs = list(dict.fromkeys(row.config for row in ablation.rows))
        classifiers = list(dict.fromkeys(row.classifier for row in ablation.rows))
        f1 = {
            clf: [
                next(
                    float(r.metrics.macro_f1)
                    for r in ablation.rows
                    if r.classifier == clf and r.config == cfg
                )
                for cfg in configs
            ]
            for clf in classifiers
        }
        plots["ablation_f1"] = {"configs": configs, "series": f1}
    return plots


def _render_figures(plots: dict[str, dict], fig_dir: Path) -> list[str]:
    written: list[str] = []
    with plt.rc_context(_RC):
        data = plots["metadata_means"]
        fig, axes = plt.subplots(2, 3, figsize=(10, 5.5))
        for ax, name in zip(axes.flat, COUNT_FIELDS):
            ax.bar(data["classes"], data["series"][name], color=_CLASS_COLORS)
            ax.set_title(f"average {name} count")
            ax.tick_params(axis="x", labelrotation=45)
        fig.tight_layout()
        fig.savefig(fig_dir / "metadata_counts.png")
        plt.close(fig)
        written.append("metadata_counts.png")

        data = plots["readability_means"]
        fig, axes = plt.subplots(2, 4, figsize=(11, 5.5))
        for ax, name in zip(axes.flat, METRIC_NAMES):
            ax.bar(data["classes"], data["series"][name], color=_CLASS_COLORS)
            ax.set_title(name)
            ax.tick_params(axis="x", labelrotation=45)
        fig.tight_layout()
        fig.savefig(fig_dir / "readability_means.png")
        plt.close(fig)
        written.append("readability_means.png")

        if "ablation_f1" in plots:
            data = plots["ablation_f1"]
            configs = data["configs"]
            fig, ax = plt.subplots(figsize=(10, 4.5))
            x = np.arange(len(configs))
            width = 0.8 / max(1, len(data["series"]))
            for i, (clf, values) in enumerate(data["series"].items()):
                ax.bar(x + i * width, values, width, label=clf)
            ax.set_xticks(x + width * (len(data["series"]) - 1) / 2)
            ax.set_xticklabels(configs, rotation=30, ha="right")
            ax.set_ylabel("macro F1")
            ax.legend()
            fig.tight_layout()
            fig.savefig(fig_dir / "ablation_f1.png")
            plt.close(fig)
            written.append("ablation_f1.png")
    return written


def emit_report(
    bundle: AnalysisBundle,
    ablation: AblationReport | None,
    out_dir: str | Path,
    render_figures: bool = True,
) -> list[Path]:
    """Write the full report bundle under ``out_dir``.

    Layout: ``tables/*.csv``, ``report.md``, ``plots/*.json``, and
    ``figures/*.png``.  Returns the written paths.
    """
    out = Path(out_dir)
    tables = out / "tables"
    plots_dir = out / "plots"
    fig_dir = out / "figures"
    try:
        for directory in (out, tables, plots_dir, fig_dir):
            directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ValidationError(f"emit_report: cannot create output directory ({exc})") from None

    written: list[Path] = []

    _write(tables / "readability_by_class.csv", _readability_csv(bundle.readability))
    _write(tables / "metadata_means.csv", _metadata_csv(bundle.metadata_means))
    _write(tables / "professions.csv", _professions_csv(bundle.professions))
    _write(tables / "distinct_categories.csv", _categories_csv(bundle.distinct_categories))
    written += [
        tables / "readability_by_class.csv",
        tables / "metadata_means.csv",
        tables / "professions.csv",
        tables / "distinct_categories.csv",
    ]
    if ablation is not None and ablation.rows:
        with open(tables / "ablation.csv", "w", encoding="utf-8", newline="\n") as handle:
            write_report_csv(ablation, handle)
        written.append(tables / "ablation.csv")

    _write(out / "report.md", _report_md(bundle, ablation))
    written.append(out / "report.md")

    plots = _plot_data(bundle, ablation)
    for name, payload in plots.items():
        path = plots_dir / f"{name}.json"
        _write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        written.append(path)

    if render_figures:
        for name in _render_figures(plots, fig_dir):
            written.append(fig_dir / name)
    return written
