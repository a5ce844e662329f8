class TraceInferError(Exception):
    """Base class for all package errors."""


class ParameterError(TraceInferError, ValueError):
    """Invalid parameter or parameter combination."""


class ValidationError(TraceInferError, ValueError):
    """Input data violates a structural invariant.

    ``line`` is the 1-based line number when the data came from a file.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ParseError(ValidationError):
    """Malformed line in a text file."""


class VersionError(TraceInferError, ValueError):
    """Unsupported file format version."""


class EstimateUnavailable(TraceInferError, LookupError):
    """Not enough data to produce an estimate."""


class BudgetError(TraceInferError, RuntimeError):
    """Requested enumeration exceeds the configured budget."""


class InconsistencyError(TraceInferError, RuntimeError):
    """Inference input is inconsistent with the model assumptions."""
