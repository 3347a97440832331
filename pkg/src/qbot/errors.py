"""Exception taxonomy shared across the package.

Rough split: CapacityError for size limits, StructuralError for ill-formed
circuits/layouts, ParseError (and subclasses) for bad input text, and the
runtime errors raised while driving an episode.
"""

from __future__ import annotations


class QbotError(Exception):
    """Base class for every error raised by this package."""


class CapacityError(QbotError):
    """A size limit was exceeded (qubit count, dense cap, ancilla pool)."""


class StructuralError(QbotError):
    """An object is ill-formed: bad qubit reference, overlapping roles, etc."""


class NormalizationError(QbotError):
    """A state vector is not normalized within tolerance."""


class ParseError(QbotError):
    """Bad input text. Carries a 1-based line (and optionally column)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class QasmError(ParseError):
    """Circuit text does not conform to the supported QASM subset."""


class MapError(ParseError):
    """Grid map document cannot be parsed."""


class TableFormatError(ParseError):
    """Truth-table text is malformed or not a total function."""


class TraceError(ParseError):
    """Trace file line is malformed or violates the record schema."""


class ReplayMismatchError(QbotError):
    """A persisted trace does not validate against a fresh controller."""


class CorruptControllerError(QbotError):
    """Measured actuator bits have no legal decoding (e.g. motor |11>)."""


class InvalidChoiceError(QbotError):
    """The chosen direction is not among the clear ones."""


class StateError(QbotError):
    """Episode driven out of order (stepped while blocked or terminal)."""


class PolicyError(QbotError):
    """An ask policy could not produce an answer."""


class ContractViolationError(QbotError):
    """An internal guarantee was broken (e.g. a move into an occupied cell)."""
