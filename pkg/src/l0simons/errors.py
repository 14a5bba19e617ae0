"""Exception types shared across the package."""

from __future__ import annotations


class StructuralError(ValueError):
    """Operands do not fit together (different spaces, unknown ids, bad shapes)."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceError(RuntimeError):
    """A configured size cap would be exceeded."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class HypothesisFailed(RuntimeError):
    """The attainment hypothesis is refuted, so the proof cannot be run."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(ValueError):
    """An instance file could not be turned into a valid instance."""

    def __init__(self, diagnostics: list[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)
