"""Exception types; the CLI maps each family to a fixed exit code."""

from __future__ import annotations


class SpecParseError(ValueError):
    """Malformed or missing input file (exit 2)."""


class InvariantError(AssertionError):
    """A named exact check failed (exit 3)."""

    def __init__(self, check: str, message: str = ""):
        self.check = check
        super().__init__(f"{check}: {message}" if message else check)


class UnresolvedCensusError(RuntimeError):
    """The doubling sum needs representation densities that are not supplied (exit 4)."""

    def __init__(self, term_count: int, missing: int, detail: str = ""):
        self.term_count = term_count
        self.missing = missing
        msg = f"{term_count} unresolved terms ({missing} need a density plugin)"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class UnsupportedError(NotImplementedError):
    """The requested computation is outside the supported families."""
