"""Exception hierarchy shared across the package."""


class PolyembedError(Exception):
    """Base class for every error raised by this package."""


class GuardExceeded(PolyembedError):
    """A combinatorial budget was exhausted before the computation finished."""


class NotADistribution(PolyembedError, ValueError):
    pass


class UnknownReport(PolyembedError, KeyError):
    pass


class NotRepresentative(PolyembedError):
    pass


class NegativeLoss(PolyembedError, ValueError):
    """A surrogate takes a negative value somewhere on its domain."""


class IndirectElicitationFails(PolyembedError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EmptyReportSet(IndirectElicitationFails):
    """No target report is allowed on some member of the family."""

    def __init__(self, message, member=None):
        super().__init__(message, witness=(member,))
        self.member = member


class EmptyEnvelope(PolyembedError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class InvalidSetFunction(PolyembedError, ValueError):
    pass


class UnsupportedDimension(PolyembedError):
    pass


class ParseError(PolyembedError, ValueError):
    pass


class ViolationWithProof(PolyembedError):
    def __init__(self, message, p=None, u=None, ratio=None):
        super().__init__(message)
        self.p = p
        self.u = u
        self.ratio = ratio
