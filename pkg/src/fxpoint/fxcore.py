"""Twos-complement fixed-point scalars.

A value carries a sign bit, ``int_bits`` integer bits and ``dec_bits``
fractional bits, stored as a Python integer in units of ``2**-dec_bits``.

Three overflow regimes apply:

* conversion from a real number saturates (clips) to the representable range;
* arithmetic wraps, discarding the carry bits above the sign bit;
* refixing to fewer integer bits keeps the sign and drops the most
  significant magnitude bits.

Binary operations promote the result representation to the elementwise
maximum of the operands' ``(int_bits, dec_bits)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from . import fxtally
from .errors import DivisionByZero, NonFiniteInput, SpecOutOfRange

WORD_BITS = 64
MAX_MAG_BITS = WORD_BITS - 2


@dataclass(frozen=True, slots=True)
class FixedSpec:
    int_bits: int
    dec_bits: int

    def __post_init__(self):
        i, d = self.int_bits, self.dec_bits
        if not (isinstance(i, int) and isinstance(d, int)):
            raise TypeError("bit counts must be integers")
        if i < 0 or d < 0 or i + d > MAX_MAG_BITS:
            raise SpecOutOfRange(
                f"spec ({i}, {d}) outside 0 <= is, ds, is+ds <= {MAX_MAG_BITS}"
            )

    @property
    def width(self) -> int:
        """Magnitude bits (sign excluded)."""
        return self.int_bits + self.dec_bits

    @property
    def min_stored(self) -> int:
        return -(1 << self.width)

    @property
    def max_stored(self) -> int:
        return (1 << self.width) - 1

    @property
    def resolution(self) -> float:
        return math.ldexp(1.0, -self.dec_bits)

    @property
    def min_real(self) -> float:
        return -math.ldexp(1.0, self.int_bits)

    @property
    def max_real(self) -> float:
        return math.ldexp(self.max_stored, -self.dec_bits)

    def __iter__(self):
        yield self.int_bits
        yield self.dec_bits


def make_spec(is_bits: int, ds_bits: int) -> FixedSpec:
    return FixedSpec(int(is_bits), int(ds_bits))


def promote(a: FixedSpec, b: FixedSpec) -> FixedSpec:
    return FixedSpec(max(a.int_bits, b.int_bits), max(a.dec_bits, b.dec_bits))


def wrap_stored(v: int, spec: FixedSpec) -> int:
    """Reduce ``v`` modulo ``2**(width+1)`` into the signed stored range."""
    w = spec.width + 1
    r = v & ((1 << w) - 1)
    if r >> (w - 1):
        r -= 1 << w
    if r != v:
        fxtally.record_overflow()
    return r


def _round_half_away(y: float) -> int:
    f = math.floor(y)
    frac = y - f
    if frac > 0.5 or (frac == 0.5 and y > 0):
        f += 1
    return f


@dataclass(frozen=True, slots=True, eq=False)
class FixedScalar:
    stored: int
    spec: FixedSpec

    def __post_init__(self):
        if not self.spec.min_stored <= self.stored <= self.spec.max_stored:
            raise ValueError(f"stored value {self.stored} outside {self.spec}")

    # field accessors named after the toolbox suffixes
    @property
    def x(self) -> float:
        return to_real(self)

    @property
    def sign(self) -> int:
        return sign(self)

    @property
    def int(self) -> int:
        return self.spec.int_bits

    @property
    def dec(self) -> int:
        return self.spec.dec_bits

    def exact(self) -> Fraction:
        return Fraction(self.stored, 1 << self.spec.dec_bits)

    def __float__(self) -> float:
        return to_real(self)

    def __repr__(self) -> str:
        return f"FixedScalar({to_real(self)!r}, is={self.int}, ds={self.dec})"

    def __add__(self, other):
        if not isinstance(other, FixedScalar):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, FixedScalar):
            return NotImplemented
        return sub(self, other)

    def __mul__(self, other):
        if not isinstance(other, FixedScalar):
            return NotImplemented
        return mul(self, other)

    def __truediv__(self, other):
        if not isinstance(other, FixedScalar):
            return NotImplemented
        return div(self, other)

    def __neg__(self):
        return neg(self)

    def __eq__(self, other):
        if not isinstance(other, FixedScalar):
            return NotImplemented
        return compare(self, other) == 0

    def __lt__(self, other):
        if not isinstance(other, FixedScalar):
            return NotImplemented
        return compare(self, other) < 0

    def __le__(self, other):
        if not isinstance(other, FixedScalar):
            return NotImplemented
        return compare(self, other) <= 0

    def __gt__(self, other):
        if not isinstance(other, FixedScalar):
            return NotImplemented
        return compare(self, other) > 0

    def __ge__(self, other):
        if not isinstance(other, FixedScalar):
            return NotImplemented
        return compare(self, other) >= 0

    def __hash__(self):
        return hash(self.exact())


def quantize(spec: FixedSpec, x: Real) -> FixedScalar:
    """Convert a real number, rounding to nearest (ties away from zero) and
    saturating at the range ends."""
    fxtally.record("quantize")
    if isinstance(x, int):
        y = x << spec.dec_bits
    else:
        xf = float(x)
        if not math.isfinite(xf):
            raise NonFiniteInput(f"cannot quantize {xf!r}")
        try:
            y = _round_half_away(math.ldexp(xf, spec.dec_bits))
        except OverflowError:
            y = spec.max_stored if xf > 0 else spec.min_stored
    y = min(max(y, spec.min_stored), spec.max_stored)
    return FixedScalar(y, spec)


def fixed(is_bits: int, ds_bits: int, x: Real = 0) -> FixedScalar:
    """Shorthand for ``quantize(make_spec(is_bits, ds_bits), x)``."""
    return quantize(make_spec(is_bits, ds_bits), x)


def to_real(a: FixedScalar) -> float:
    return math.ldexp(a.stored, -a.spec.dec_bits)


def _shift(v: int, k: int) -> int:
    """Multiply by ``2**k``; negative ``k`` is an arithmetic (floor) shift."""
    return v << k if k >= 0 else v >> -k


def refix(a: FixedScalar, new: FixedSpec) -> FixedScalar:
    """Change representation: first the fractional bits (floor on narrowing),
    then the integer bits (sign kept, top magnitude bits dropped).

    A value that already fits the new spec is kept as is; this only matters
    for the most negative value, whose magnitude needs one bit more than the
    magnitude field holds.
    """
    fxtally.record("refix")
    s = _shift(a.stored, new.dec_bits - a.spec.dec_bits)
    if new.int_bits < a.spec.int_bits and not new.min_stored <= s <= new.max_stored:
        mag = abs(s) & ((1 << new.width) - 1)
        s = -mag if s < 0 else mag
    return FixedScalar(s, new)


def _add_stored(a: FixedScalar, b_stored: int, b_spec: FixedSpec) -> FixedScalar:
    spec = promote(a.spec, b_spec)
    s = _shift(a.stored, spec.dec_bits - a.spec.dec_bits) + _shift(
        b_stored, spec.dec_bits - b_spec.dec_bits
    )
    return FixedScalar(wrap_stored(s, spec), spec)


def add(a: FixedScalar, b: FixedScalar) -> FixedScalar:
    fxtally.record("add")
    return _add_stored(a, b.stored, b.spec)


def sub(a: FixedScalar, b: FixedScalar) -> FixedScalar:
    # congruent to add(a, neg(b)) modulo the word, so the wrapped results agree
    fxtally.record("sub")
    return _add_stored(a, -b.stored, b.spec)


def mul(a: FixedScalar, b: FixedScalar) -> FixedScalar:
    fxtally.record("mul")
    spec = promote(a.spec, b.spec)
    p = a.stored * b.stored
    p = _shift(p, spec.dec_bits - a.spec.dec_bits - b.spec.dec_bits)
    return FixedScalar(wrap_stored(p, spec), spec)


def div(a: FixedScalar, b: FixedScalar) -> FixedScalar:
    if b.stored == 0:
        raise DivisionByZero("fixed-point division by zero")
    fxtally.record("div")
    spec = promote(a.spec, b.spec)
    # floor(a/b * 2**ds) with a = sa*2**-da, b = sb*2**-db
    k = spec.dec_bits + b.spec.dec_bits - a.spec.dec_bits
    num, den = a.stored, b.stored
    if k >= 0:
        num <<= k
    else:
        den <<= -k
    return FixedScalar(wrap_stored(num // den, spec), spec)


def _neg_stored(a: FixedScalar) -> int:
    return wrap_stored(-a.stored, a.spec)


def neg(a: FixedScalar) -> FixedScalar:
    fxtally.record("neg")
    return FixedScalar(_neg_stored(a), a.spec)


def sign(a: FixedScalar) -> int:
    return (a.stored > 0) - (a.stored < 0)


def compare(a: FixedScalar, b: FixedScalar) -> int:
    """-1, 0 or 1 as the real value of ``a`` is below, equal to or above ``b``."""
    fxtally.record("compare")
    d = max(a.spec.dec_bits, b.spec.dec_bits)
    sa = a.stored << (d - a.spec.dec_bits)
    sb = b.stored << (d - b.spec.dec_bits)
    return (sa > sb) - (sa < sb)


def min_int_bits(v: int) -> int:
    """Fewest integer bits ``is`` with ``-2**is <= v <= 2**is - 1``."""
    v = int(v)
    return v.bit_length() if v >= 0 else (~v).bit_length()


def from_integer(v: Real) -> FixedScalar:
    """Integer part of ``v`` in the narrowest representation with ds = 0."""
    n = math.trunc(v)
    return quantize(FixedSpec(min_int_bits(n), 0), n)
