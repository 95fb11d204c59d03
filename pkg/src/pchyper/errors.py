"""Error types. Every error carries a short machine-readable ``kind``."""


class PCError(Exception):
    kind = "error"

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.details = details


class InvalidArgument(PCError, ValueError):
    kind = "invalid-argument"


class UnsupportedRegime(PCError):
    kind = "unsupported-regime"


class ParseError(PCError, ValueError):
    kind = "parse-error"

    def __init__(self, message: str, line: int | None = None, **details):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, line=line, **details)
        self.line = line


class InvalidPath(PCError, ValueError):
    kind = "invalid-path"


class InvalidCycle(PCError, ValueError):
    kind = "invalid-cycle"


class MissingEdge(PCError):
    kind = "missing-edge"


class TooShort(PCError):
    kind = "too-short"


class SpliceInvalid(PCError):
    kind = "splice-invalid"


class InvalidAbsorber(PCError):
    kind = "invalid-absorber"


class PlacementError(PCError):
    kind = "placement-error"


class ColoringConflict(PCError):
    """Absorption produced a non-proper coloring. Callers may retry with another absorber."""

    kind = "coloring-conflict"


class StagedFailure(PCError):
    kind = "staged-failure"


class SamplingFailure(PCError):
    kind = "sampling-failure"


class ContradictionFlag(PCError):
    kind = "contradiction-flag"


class InternalError(PCError):
    kind = "internal-error"


class Infeasible(PCError):
    kind = "infeasible"
