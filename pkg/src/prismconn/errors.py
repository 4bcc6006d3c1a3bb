"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside a function's mathematical domain."""


class CapabilityError(NotImplementedError):
    """A requested case is outside what the analytic pipeline covers."""


class ConvergenceError(RuntimeError):
    """An iterative evaluation failed to reach its tolerance."""


class InvalidPrismError(ValueError):
    """A prism construction was rejected."""
