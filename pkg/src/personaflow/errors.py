"""Exception hierarchy shared across the toolkit.

Each error class carries the process exit code used by the CLI, so a
failure anywhere in the pipeline maps to a documented, distinct status.
"""


class PersonaflowError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ConfigError(PersonaflowError):
    """Missing or invalid run-configuration key, or a referenced path that does not exist."""

    exit_code = 3


class ArtifactError(PersonaflowError):
    """A required upstream artifact is missing or unreadable."""

    exit_code = 4


class SchemaError(PersonaflowError):
    """An input file violates its documented schema (bad JSONL record, malformed vector line, ...)."""

    exit_code = 5


class ValidationError(PersonaflowError):
    """Domain-level precondition failure (bad label code, empty text, unknown seed term, ...)."""

    exit_code = 6
