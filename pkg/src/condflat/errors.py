"""Exception hierarchy shared by every module of the engine."""


class CondflatError(Exception):
    """Base class for all engine errors."""


class InvalidGroup(CondflatError):
    pass


class OrderTooLarge(CondflatError):
    pass


class UnsupportedParams(CondflatError):
    pass


class NotHomomorphism(CondflatError):
    pass


class NotGenerating(CondflatError):
    pass


class Inconsistent(CondflatError):
    """Generator images violate a relation of the source group."""


class NotNormal(CondflatError):
    pass


class IsoSearchBudgetExceeded(CondflatError):
    pass


class NotMono(CondflatError):
    pass


class NotEpi(CondflatError):
    pass


class ImageNotKernel(CondflatError):
    pass


class NotCommuting(CondflatError):
    pass


class NotSplit(CondflatError):
    pass


class RadicalNotNormalInTotal(CondflatError):
    """The image of T(K) in E is not normal, so E/T(K) does not exist."""


class FiberwisePreconditionFailed(CondflatError):
    pass


class InternalError(CondflatError):
    """A consistency check failed; indicates an engine bug."""


class ConfigInvalid(CondflatError):
    pass


class ParseError(CondflatError):
    pass


class ReportWriteError(CondflatError):
    pass
