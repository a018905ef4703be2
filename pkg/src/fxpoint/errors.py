"""Exception types raised by the fixed-point library and the OFDM harness."""


class FixedPointError(Exception):
    pass


class SpecOutOfRange(FixedPointError, ValueError):
    """An (is, ds) pair violates the 62-bit magnitude budget."""


class NonFiniteInput(FixedPointError, ValueError):
    pass


class DivisionByZero(FixedPointError, ZeroDivisionError):
    pass


class DimensionMismatch(FixedPointError, ValueError):
    pass


class SizeNotPowerOfFour(FixedPointError, ValueError):
    pass


class InsufficientBits(FixedPointError, ValueError):
    pass
