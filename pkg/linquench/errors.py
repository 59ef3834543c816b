"""
Error types and exit-code classification for linquench.

Library code raises the exceptions defined here; only the command-line
dispatcher turns them into exit statuses. The classifier table decides:
- Which category an error belongs to (usage, config, refusal, numeric)
- Which exit code the CLI returns for it
- The human-readable description printed next to the message
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Type

logger = logging.getLogger(__name__)


class LinquenchError(Exception):
    """Base class for every error raised on purpose by linquench."""


class ConfigError(LinquenchError):
    """Malformed configuration or override."""


class SpecFileNotFound(ConfigError):
    """The spec file given on the command line does not exist."""


class InvalidSpecError(ConfigError):
    """A spec parsed but violates a structural rule (lengths, growth, signs)."""


class PreconditionError(LinquenchError):
    """An operation was called outside its documented domain."""


class DegenerateProcessError(PreconditionError):
    """All partial sums vanish, so no normalization exists."""


class ScheduleRefusedError(PreconditionError):
    """An experiment refused to run because its schedule failed validation."""


class InfeasibleAlignmentError(PreconditionError):
    """No phase assignment keeps the other towers off the forced time."""


@dataclass
class RunErrorKind:
    """Represents a classified linquench error."""
    exc_type: Type[BaseException]
    category: str  # 'usage', 'config', 'refusal', 'numeric'
    exit_code: int
    description: str


# Most specific classes first; classify() returns the first isinstance match.
RUN_ERROR_MAP: List[RunErrorKind] = [
    RunErrorKind(SpecFileNotFound, "usage", 2, "Spec file not found"),
    RunErrorKind(InvalidSpecError, "config", 2, "Spec file is malformed"),
    RunErrorKind(ConfigError, "config", 2, "Invalid configuration"),
    RunErrorKind(ScheduleRefusedError, "refusal", 2, "Schedule validation refused the run"),
    RunErrorKind(InfeasibleAlignmentError, "refusal", 2, "Tower alignment is infeasible"),
    RunErrorKind(DegenerateProcessError, "numeric", 2, "Degenerate process"),
    RunErrorKind(PreconditionError, "refusal", 2, "Operation precondition not met"),
]


class ErrorClassifier:
    """Maps linquench exceptions to categories and CLI exit codes."""

    def __init__(self, error_map: Optional[List[RunErrorKind]] = None):
        self.error_map = error_map or RUN_ERROR_MAP

    def classify(self, exc: BaseException) -> Tuple[Optional[RunErrorKind], str]:
        """
        Classify an exception using the error map.

        Returns:
            Tuple of (matched_kind, category). Category is 'unknown' if no match.
        """
        for kind in self.error_map:
            if isinstance(exc, kind.exc_type):
                return kind, kind.category
        return None, "unknown"

    def is_refusal(self, exc: BaseException) -> bool:
        """Check if the error is a deliberate refusal to run."""
        _, category = self.classify(exc)
        return category == "refusal"

    def is_config_error(self, exc: BaseException) -> bool:
        """Check if the error comes from the spec file or overrides."""
        _, category = self.classify(exc)
        return category in ("usage", "config")

    def exit_code(self, exc: BaseException) -> int:
        """Exit status for a known error; unknown errors are re-raised."""
        kind, _ = self.classify(exc)
        if kind is None:
            raise exc
        return kind.exit_code

    def describe(self, exc: BaseException) -> str:
        """One-line message: category description followed by the exception text."""
        kind, _ = self.classify(exc)
        if kind is None:
            return f"Unexpected error: {exc}"
        return f"{kind.description}: {exc}"


# Global classifier instance
_classifier: Optional[ErrorClassifier] = None


def get_error_classifier() -> ErrorClassifier:
    """Get the global error classifier instance."""
    global _classifier
    if _classifier is None:
        _classifier = ErrorClassifier()
    return _classifier
