"""Shared exception types.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific type that applies rather than a bare ValueError.
"""

from __future__ import annotations


class SimperrError(Exception):
    """Base class for all toolkit errors."""


class FormatError(SimperrError):
    """An input document violates its schema.

    Carries one message per problem, each prefixed with its position
    (line or row number) where one is known.
    """

    def __init__(self, problems: list[str], source: str = "input"):
        self.problems = list(problems)
        self.source = source
        head = f"{source}: {len(self.problems)} schema problem(s)"
        super().__init__("\n".join([head, *("  " + p for p in self.problems)]))


class CollectionError(FormatError):
    """A delimited annotation collection failed to parse or validate."""


class UniverseFormatError(FormatError):
    """A fact-universe fixture document failed to parse."""


class ScoreFormatError(FormatError):
    """A detector score file failed to parse."""


class UniverseValidationError(SimperrError):
    """A fact universe violates its annotation invariants."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__(
            "invalid fact universe:\n" + "\n".join("  " + v for v in violations)
        )


class NotMeasurableError(SimperrError):
    """A statistic has no defined value on the given data.

    Raised instead of returning a misleading 0 or 1 (for example a
    self-consistency rate for an annotator with no duplicate pairs, or an
    AUROC over labels with only one class present).
    """
