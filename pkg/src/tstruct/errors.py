"""Exception hierarchy shared by every layer of the package."""


class TStructError(Exception):
    """Base class for all errors raised by tstruct."""


class UnknownPointError(TStructError, KeyError):
    def __str__(self):
        return f"unknown point identifier: {self.args[0]!r}"


class NotSpecializationClosedError(TStructError, ValueError):
    pass


class SpaceMismatchError(TStructError, ValueError):
    pass


class RingMismatchError(TStructError, ValueError):
    pass


class IllegalInversionError(TStructError, ValueError):
    pass


class NotHomogeneousError(TStructError, ValueError):
    pass


class ChainMapError(TStructError, ValueError):
    """A proposed differential or chain map does not commute / square to zero."""


class UnsupportedError(TStructError):
    """The request is outside what the finite models can decide."""


class UndecidedError(TStructError):
    """A verdict could not be reached (window too small, bound exhausted)."""
