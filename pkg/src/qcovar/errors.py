class ValidationError(ValueError):
    """Input fails a domain invariant (Hermiticity, positivity, trace, ...)."""


class DimensionError(ValidationError):
    pass


class NotFeasibleError(ValidationError):
    """Density violates Tr(D X_i) = 0 beyond tolerance."""


class BudgetExceeded(RuntimeError):
    """Decomposition visited more nodes than allowed."""

    def __init__(self, message: str, node=None):
        super().__init__(message)
        self.node = node
