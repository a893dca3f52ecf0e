class ScriptometricsError(Exception):
    """Base class for all package errors."""


class NotationError(ScriptometricsError, ValueError):
    """A decomposition expression does not match the notation grammar."""


class DatasetError(ScriptometricsError, ValueError):
    """A decomposition table could not be loaded."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StatisticalPreconditionError(ScriptometricsError, ValueError):
    """Input data violates the assumptions of a statistical procedure."""


class TiedFrequencyError(StatisticalPreconditionError):
    def __init__(self, value):
        self.value = value
        super().__init__(
            f"tied frequency at value {value}: runs test undefined "
            "under the above/below dichotomy"
        )


class OverparameterizedError(StatisticalPreconditionError):
    """Degrees of freedom would be zero or negative."""


class FitError(ScriptometricsError, ArithmeticError):
    """Numerical failure while evaluating or fitting a model."""
