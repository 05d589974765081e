"""Exception hierarchy shared by every module."""


class CurveError(ValueError):
    """Base class for all errors raised by aesthetic_curves."""


class DegenerateCurve(CurveError):
    pass


class InvalidSteps(CurveError):
    pass


class SingularMatrix(CurveError):
    pass


class InfiniteRadius(CurveError):
    """A division point sits on an inflection, where log(rho) is undefined."""


class DegenerateRange(CurveError):
    pass


class StationaryRadius(CurveError):
    pass


class NonMonotoneRadius(CurveError):
    pass


class DomainViolation(CurveError):
    pass


class ZeroEta(CurveError):
    pass


class InsufficientSamples(CurveError):
    pass


class EmptyInterval(CurveError):
    pass


class InflectionInDomain(CurveError):
    pass


class InvalidParams(CurveError):
    pass


class ParseError(CurveError):
    pass


class ValidationError(CurveError):
    pass
