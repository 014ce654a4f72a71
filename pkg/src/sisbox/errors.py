"""Exception hierarchy shared by all sisbox modules."""

from __future__ import annotations


class SisboxError(Exception):
    """Base class for all sisbox errors."""


class BandwidthOverflowError(SisboxError):
    """Spectrum support exceeds the frequency grid."""

    def __init__(self, required_k: int, actual_k: int):
        self.required_k = required_k
        self.actual_k = actual_k
        super().__init__(
            f"spectrum support needs half-bandwidth K >= {required_k}, "
            f"grid has K = {actual_k}"
        )


class GridMismatchError(SisboxError):
    """Operands live on different frequency grids."""


class NotAGrammianError(SisboxError):
    """A spectrum claimed to be a Grammian has significantly negative entries."""


class DegenerateSpaceError(SisboxError):
    """The generator has (numerically) empty spectral support."""


class NotASamplingSpaceError(SisboxError):
    """The candidate fails a sampling-space certificate.

    Carries the offending frequency (if a single point trips the Zak
    guard) and/or the full certificate report.
    """

    def __init__(self, message: str, omega: float | None = None, report=None):
        self.omega = omega
        self.report = report
        super().__init__(message)


class NotInSpaceError(SisboxError):
    """A function presented as a member fails the projection test."""

    def __init__(self, message: str, residual: float | None = None):
        self.residual = residual
        super().__init__(message)


class PartitionError(SisboxError):
    """A family of masks is not a valid partition of the support set."""

    def __init__(self, message: str, measure: float | None = None):
        self.measure = measure
        super().__init__(message)


class TruncationError(SisboxError):
    """A requested truncation size exceeds what the discretization supports."""


class PreconditionError(SisboxError):
    """An operation was invoked outside its stated precondition."""


class ConstructionRefusedError(SisboxError):
    """Kernel construction refused because the membership report failed."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class CatalogError(SisboxError):
    """Unknown catalog signal name."""

    def __init__(self, name: str, known: list[str]):
        self.name = name
        self.known = known
        super().__init__(f"unknown signal {name!r}; catalog has: {', '.join(known)}")


class FileFormatError(SisboxError):
    """Malformed input file; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
