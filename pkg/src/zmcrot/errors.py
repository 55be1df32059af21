"""Exception hierarchy shared by all zmcrot modules."""


class ZmcError(Exception):
    """Base class for every error raised by this package."""


class NearNull(ZmcError):
    pass


class BadParameter(ZmcError, ValueError):
    pass


class NoSolution(ZmcError):
    """The requested family has no real solution for these parameters."""


class OutOfDomain(ZmcError, ValueError):
    pass


class DomainViolation(ZmcError, ValueError):
    """A sample lies outside the algebraic domain of a family equation."""


class LightlikeTangent(ZmcError):
    pass


class SingularFrame(ZmcError):
    pass


class StepTooLarge(ZmcError):
    pass


class MixedSigns(ZmcError):
    pass


class SingularStart(ZmcError):
    pass


class ToleranceNotMet(ZmcError):
    pass


class RadicandNegative(NoSolution):
    pass


class PartialIntegration(ZmcError):
    """Integration stopped early; ``partial`` holds the curve computed so far."""

    def __init__(self, message, partial=None, boundary=None):
        super().__init__(message)
        self.partial = partial
        self.boundary = boundary


class HitSingularity(PartialIntegration):
    pass


class TurningPoint(PartialIntegration):
    pass
