"""Exception hierarchy shared by every module of the package."""


class BsdTwinsError(Exception):
    """Base class for all errors raised by bsdtwins."""


class FactorBudgetExceeded(BsdTwinsError):
    pass


class NotASquare(BsdTwinsError):
    pass


class SingularModel(BsdTwinsError):
    pass


class NotShortForm(BsdTwinsError):
    pass


class NotSquarefree(BsdTwinsError):
    pass


class UndecidedAtDepth(BsdTwinsError):
    """The local solubility tree hit its depth cap without a certificate."""


class SelmerClosureError(BsdTwinsError):
    """A computed Selmer set failed the subgroup check."""


class NegativeDiscriminantUnsupported(BsdTwinsError):
    pass


class Inconsistent(BsdTwinsError):
    """A proven criterion disagrees with the numerical evaluation."""


class NotIsogenous(BsdTwinsError):
    pass


class NetworkUnavailable(BsdTwinsError):
    pass


class UnknownLabel(BsdTwinsError):
    pass
