"""Exception types shared across the collectibility package."""


class CollectibilityError(Exception):
    """Base class for package-specific failures."""


class NormError(CollectibilityError):
    """Vector norm deviates from 1 beyond the input tolerance."""


class ShapeError(CollectibilityError):
    """Array layout is inconsistent with the declared party dimensions."""


class RangeError(CollectibilityError):
    """Scalar parameter lies outside its documented domain."""


class SizeError(CollectibilityError):
    """Basis count or party count unsupported by the requested operation."""


class UnknownNameError(CollectibilityError):
    """State name is not one of the recognized identifiers."""


class ParamError(CollectibilityError):
    """Named-state or scheme parameters are missing or invalid."""


class GramError(CollectibilityError):
    """Gram matrix violates hermiticity or positivity beyond tolerance."""


class BoundError(CollectibilityError):
    """Computed value exceeds a proven bound beyond tolerance."""


class ConvergenceError(CollectibilityError):
    """No optimizer restart converged."""


class ScaleError(CollectibilityError):
    """Requested grid size exceeds the configured evaluation budget."""


class DegenerateError(CollectibilityError):
    """Conditional state norm vanishes; a dependent quantity is undefined."""


class EmptyCountsError(CollectibilityError):
    """Counts record has no shots to estimate from."""
