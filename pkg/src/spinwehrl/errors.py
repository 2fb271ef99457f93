"""Exception types shared across the package."""


class QuadratureOrderError(ValueError):
    """Quadrature grid too coarse for the requested exactness degree."""


class ResourceGuardError(RuntimeError):
    """A desk-scale memory/size guard was exceeded."""


class ConvergenceError(RuntimeError):
    """Adaptive refinement failed to reach the requested tolerance."""


class DecompositionError(RuntimeError):
    """Channel decomposition fit exceeded its residual threshold."""
