"""Exception types raised across the package."""


class PatrolError(Exception):
    """Base class for all package errors."""


class EmptyS00(PatrolError):
    pass


class EmptyIntersection(PatrolError):
    """The ranges of the S00 points do not intersect."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class DegenerateIntersection(PatrolError):
    """The S00 intersection is a single point (x1 == x4)."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class NotApplicable(PatrolError):
    pass


class ConditionsFail(PatrolError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InfeasibleCertified(PatrolError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoCycle(PatrolError):
    pass


class NeverVisited(PatrolError):
    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class Unbounded(PatrolError):
    pass


class BadEpsilon(PatrolError):
    pass


class ParseError(PatrolError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ValidationError(PatrolError):
    pass
