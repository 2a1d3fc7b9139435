"""Exception hierarchy shared across the package."""

from __future__ import annotations


class MatraError(Exception):
    """Base class for all package-specific errors."""


class EmptyAggregation(MatraError):
    """Raised when a level aggregate (min/max) is asked for an empty sequence."""


class NoImpactBasis(MatraError):
    """No applicable, non-n/a impact cell exists for a scenario's in-scope sources."""


class ModelSyntaxError(MatraError):
    """The document is not well-formed JSON."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnknownFieldError(MatraError):
    """A document object carries a field the schema does not define."""

    def __init__(self, location: str, field: str):
        self.location = location
        self.field = field
        super().__init__(f"{location}: unknown field {field!r}")


class MissingFieldError(MatraError):
    """A document object lacks a required field."""

    def __init__(self, location: str, field: str):
        self.location = location
        self.field = field
        super().__init__(f"{location}: missing required field {field!r}")


class BadFieldError(MatraError):
    """A document field holds a value outside its domain."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


class DuplicateIdError(MatraError):
    """Two objects of the same kind declare the same id."""

    def __init__(self, location: str, object_id: str):
        self.location = location
        self.object_id = object_id
        super().__init__(f"{location}: duplicate id {object_id!r}")


class DanglingReference(MatraError):
    """A cross-reference names an id that is not declared anywhere."""

    def __init__(self, location: str, target: str):
        self.location = location
        self.target = target
        super().__init__(f"{location}: reference to undeclared id {target!r}")


class OutOfScope(MatraError):
    """The requested threat source is not in scope for the scenario."""


class NoTree(MatraError):
    """The scenario has no attack tree to evaluate."""


class EmptyObjective(MatraError):
    """An objective has no vectors to aggregate over."""


class EmptyScenario(MatraError):
    """A scenario tree has no scored objectives."""


class MissingSkill(MatraError):
    """An adversarial assessment hit a vector without a skill requirement."""


class MissingInherent(MatraError):
    """A non-adversarial assessment hit a vector without an inherent likelihood."""


class PathExplosion(MatraError):
    """The attack-surface path count exceeds the configured cap."""

    def __init__(self, path_count: int, cap: int):
        self.path_count = path_count
        self.cap = cap
        super().__init__(
            f"attack surface has {path_count} complete paths, exceeding the cap of {cap}; "
            "refusing to enumerate"
        )


class MixedScenario(MatraError):
    """A tree rendering was given assessments for different scenarios or sources."""
