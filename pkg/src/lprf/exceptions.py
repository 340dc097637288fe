"""Exception hierarchy shared by every lprf module."""


class LprfError(Exception):
    """Base class for all errors raised by this package."""


class CompositeP(LprfError, ValueError):
    pass


class ReduciblePolynomial(LprfError, ValueError):
    pass


class DegreeMismatch(LprfError, ValueError):
    pass


class FieldTooLarge(LprfError, ValueError):
    pass


class FieldMismatch(LprfError, ValueError):
    pass


class ZeroToZero(LprfError, ArithmeticError):
    pass


class DivisionByZero(LprfError, ZeroDivisionError):
    pass


class InternalError(LprfError, RuntimeError):
    """The field construction is broken (e.g. x^((q-1)/2) is not +-1)."""


class NotInGroup(LprfError, ValueError):
    pass


class NotPrimitive(LprfError, ValueError):
    pass


class OutOfRange(LprfError, ValueError):
    pass


class WindowTooLong(LprfError, ValueError):
    pass


class NotFullPeriod(LprfError, ValueError):
    pass


class FormatError(LprfError, ValueError):
    """A keystream, key or report file could not be parsed."""


class Exhausted(LprfError, RuntimeError):
    """An attack used its whole guess budget without a verified key."""
