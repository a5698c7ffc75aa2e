"""Exception types shared across the package."""


class NumericsError(RuntimeError):
    """A numerical procedure failed (no minimum found, drift too large, ...)."""


class ConvergenceError(NumericsError):
    """An iterative routine exhausted its iteration or refinement budget."""
