"""Exception hierarchy shared by every module."""

from __future__ import annotations


class GridsatError(Exception):
    """Base class for all library errors."""


class CycleError(GridsatError):
    pass


class FormatError(GridsatError):
    """Malformed poset/family text; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ShapeMismatch(GridsatError):
    pass


class DimensionError(GridsatError):
    pass


class DuplicatePoint(GridsatError):
    pass


class NotPFree(GridsatError):
    def __init__(self, message: str, certificate=None):
        self.certificate = certificate
        super().__init__(message)


class NotFullySeparating(GridsatError):
    def __init__(self, coordinate: int):
        self.coordinate = coordinate
        super().__init__(f"coordinate {coordinate} is not separating")


class PreconditionError(GridsatError):
    pass


class LemmaViolation(GridsatError):
    """A re-verified lemma postcondition failed. This would falsify the lemma."""


class ResourceCap(GridsatError):
    pass


class NotEmbeddable(GridsatError):
    pass


class ParameterError(GridsatError):
    pass


class CapTooSmall(GridsatError):
    pass
