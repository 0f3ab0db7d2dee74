"""Command-line entry point.

Every command reads the same declarative YAML config (``--config``); the
``--seed``, ``--out``, and ``--workers`` flags override the corresponding
config values, and each flag can also be set through an environment
variable with the ``PF_`` prefix (PF_CONFIG, PF_SEED, PF_OUT, PF_WORKERS).

On failure a machine-readable JSON error line is written to stderr and the
process exits with the error-class code documented below.
"""
from __future__ import annotations

import functools
import json
import sys

import click

from .config import RunConfig, load_config
from .errors import PersonaflowError
from . import pipeline
from .model.features import PRESETS

EXIT_CODE_DOC = """\b
Exit codes:
  0  success
  1  unexpected internal error
  2  command-line usage error
  3  configuration error (missing/invalid key, missing referenced path)
  4  missing upstream artifact (run the earlier stage first)
  5  input schema violation (malformed JSONL/vector/lexicon file)
  6  domain validation error (bad label code, empty input, ...)
"""


@click.group(epilog=EXIT_CODE_DOC)
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    required=True,
    help="Path to the YAML run configuration.",
)
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option(
    "--workers",
    type=int,
    default=None,
    help="Per-user parallelism for featurize (default: all cores). Results do not depend on it.",
)
@click.option(
    "--out",
    type=click.Path(file_okay=False),
    default=None,
    help="Override the output directory.",
)
@click.pass_context
def main(ctx: click.Context, config_path: str, seed: int | None, workers: int | None, out: str | None) -> None:
    """Microblog personality-class analytics pipeline."""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    ctx.obj["seed"] = seed
    ctx.obj["workers"] = workers
    ctx.obj["out"] = out


def _load(ctx: click.Context) -> RunConfig:
    obj = ctx.obj
    return load_config(
        obj["config_path"],
        seed_override=obj["seed"],
        out_override=obj["out"],
        workers_override=obj["workers"],
    )


def _command(fn):
    @functools.wraps(fn)
    def wrapper(ctx: click.Context, *args, **kwargs):
        try:
            fn(ctx, *args, **kwargs)
        except PersonaflowError as exc:
            print(
                json.dumps(
                    {
                        "error": str(exc),
                        "type": type(exc).__name__,
                        "exit_code": exc.exit_code,
                    }
                ),
                file=sys.stderr,
                flush=True,
            )
            ctx.exit(exc.exit_code)

    return wrapper


@main.command()
@click.pass_context
@_command
def ingest(ctx: click.Context) -> None:
    """Validate the corpus, filter eligible users, and write the split."""
    pipeline.stage_ingest(_load(ctx))


@main.command()
@click.pass_context
@_command
def featurize(ctx: click.Context) -> None:
    """Compute per-user features (readability, lexical categories, counts, encodings)."""
    pipeline.stage_featurize(_load(ctx))


@main.command("embed-train")
@click.pass_context
@_command
def embed_train(ctx: click.Context) -> None:
    """Train the hashtag/URL/mention embedders and embed every user."""
    pipeline.stage_embed_train(_load(ctx))


@main.command()
@click.option(
    "--preset",
    type=click.Choice(list(PRESETS)),
    default="all",
    show_default=True,
    help="Feature configuration to train.",
)
@click.option(
    "--classifier",
    "classifier",
    type=click.Choice(["random_forest", "gbdt"]),
    default=None,
    help="Train a single classifier instead of all configured ones.",
)
@click.pass_context
@_command
def train(ctx: click.Context, preset: str, classifier: str | None) -> None:
    """Train classifier(s) for one feature configuration and write metrics."""
    pipeline.stage_train(_load(ctx), preset, [classifier] if classifier else None)


@main.command()
@click.pass_context
@_command
def ablate(ctx: click.Context) -> None:
    """Run featurize + embed-train + the full configuration/classifier grid."""
    pipeline.stage_ablate(_load(ctx))


@main.command()
@click.pass_context
@_command
def analyze(ctx: click.Context) -> None:
    """Compute profession, metadata, readability, and category analyses."""
    pipeline.stage_analyze(_load(ctx))


@main.command()
@click.pass_context
@_command
def report(ctx: click.Context) -> None:
    """Emit the report bundle (tables, markdown, plot data, figures)."""
    pipeline.stage_report(_load(ctx))


def entry() -> None:  # pragma: no cover
    main(auto_envvar_prefix="PF")


if __name__ == "__main__":  # pragma: no cover
    entry()
