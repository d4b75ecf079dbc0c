"""Exception types and the diagnostic record shared across the pipeline."""

from __future__ import annotations

from dataclasses import dataclass


class IrisError(Exception):
    """Base class for all errors raised by this package."""


class InputError(IrisError):
    """Bad input from the outside world: missing roots, malformed manifests,
    unreadable matrix files. Maps to exit code 2 at the CLI."""


class ManifestError(InputError):
    """Manifest file is missing, malformed, or violates its invariants."""


class StrictParseError(IrisError):
    """A release failed to parse while running in strict mode.
    Maps to exit code 1 at the CLI."""


class InsufficientReleasesError(IrisError):
    """An operation needs more releases than the matrix provides."""


@dataclass(frozen=True)
class Diagnostic:
    """A non-fatal problem tied to one file (skipped, undecodable, unparseable)."""

    path: str
    message: str
    line: int | None = None

    def __str__(self) -> str:
        if self.line is not None:
            return f"{self.path}:{self.line}: {self.message}"
        return f"{self.path}: {self.message}"
