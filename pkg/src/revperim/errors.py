"""Exception types raised across the package."""


class DomainError(ValueError):
    """An input lies outside the interval where the problem is posed."""


class InfeasibleError(ValueError):
    """The constraint set is empty for the requested parameters."""


class ContainerError(ValueError):
    """A container description fails validation (positivity, convexity, schema)."""


class DegeneracyError(ValueError):
    """A polygon would collapse below three vertices."""


class OptimizationError(RuntimeError):
    """No restart produced an acceptable optimum.

    ``diagnostics`` carries one record per restart.
    """

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)
