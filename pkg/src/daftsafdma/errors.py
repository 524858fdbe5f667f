"""Exception types raised across the package."""


class ConfigurationError(ValueError):
    """Invalid sizes, user counts, prefix lengths or experiment settings."""


class SizeError(ValueError):
    """A sequence has the wrong length or contains non-finite values."""


class PredictorInapplicableError(ValueError):
    """A closed-form time-domain predictor was called outside its parameter conditions."""


class EqualizationError(ArithmeticError):
    """The MMSE linear system could not be solved to tolerance.

    Attributes:
        condition: Estimated 2-norm condition number of the system matrix.
        residual: Relative residual of the best solution found.
    """

    def __init__(self, message: str, condition: float, residual: float) -> None:
        super().__init__(f"{message} (condition ~ {condition:.3e}, relative residual {residual:.3e})")
        self.condition = condition
        self.residual = residual
