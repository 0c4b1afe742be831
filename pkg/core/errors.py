# core/errors.py


class FrameToolkitError(Exception):
    """Base class for every error raised by the toolkit."""


class DimensionMismatchError(FrameToolkitError, ValueError):
    pass


class NotSymmetricError(FrameToolkitError, ValueError):
    pass


class NotInvertibleError(FrameToolkitError, ValueError):
    """Matrix is singular or indefinite; for a frame operator this means 'not a frame'."""


class NotAFusionFrameError(FrameToolkitError):
    pass


class PatternCapExceededError(FrameToolkitError):
    pass


class HypothesisViolationError(FrameToolkitError):
    """A local frame system fails 0 < inf A_i <= sup B_i < inf."""


class SubspaceMembershipError(FrameToolkitError, ValueError):
    """A vector (or subspace) does not lie in the subspace it was declared in."""


class ProblemParseError(FrameToolkitError):
    pass


class UnknownDemoError(FrameToolkitError):
    pass
