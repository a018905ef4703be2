"""Complex fixed-point values; each part keeps its own representation."""

from __future__ import annotations

from dataclasses import dataclass

from . import fxcore, fxtally
from .fxcore import FixedScalar, FixedSpec


@dataclass(frozen=True, slots=True, eq=False)
class FixedComplex:
    re: FixedScalar
    im: FixedScalar

    @property
    def x(self) -> complex:
        return complex(self.re.x, self.im.x)

    def __complex__(self) -> complex:
        return self.x

    def __repr__(self) -> str:
        return (
            f"FixedComplex({self.x!r}, re=({self.re.int},{self.re.dec}), "
            f"im=({self.im.int},{self.im.dec}))"
        )

    def __add__(self, other):
        if not isinstance(other, FixedComplex):
            return NotImplemented
        return cadd(self, other)

    def __sub__(self, other):
        if not isinstance(other, FixedComplex):
            return NotImplemented
        return csub(self, other)

    def __mul__(self, other):
        if not isinstance(other, FixedComplex):
            return NotImplemented
        return cmul(self, other)

    def __neg__(self):
        return FixedComplex(-self.re, -self.im)

    def __eq__(self, other):
        if not isinstance(other, FixedComplex):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))


def cmake(re: FixedScalar, im: FixedScalar) -> FixedComplex:
    return FixedComplex(re, im)


def cquantize(re_spec: FixedSpec, z: complex, im_spec: FixedSpec | None = None) -> FixedComplex:
    z = complex(z)
    return FixedComplex(
        fxcore.quantize(re_spec, z.real),
        fxcore.quantize(im_spec or re_spec, z.imag),
    )


def cadd(a: FixedComplex, b: FixedComplex) -> FixedComplex:
    return FixedComplex(fxcore.add(a.re, b.re), fxcore.add(a.im, b.im))


def csub(a: FixedComplex, b: FixedComplex) -> FixedComplex:
    return FixedComplex(fxcore.sub(a.re, b.re), fxcore.sub(a.im, b.im))


def cmul(a: FixedComplex, b: FixedComplex) -> FixedComplex:
    """Schoolbook product: 4 real multiplies, 2 real additions.

    The subtraction in the real part is tallied as an addition, matching the
    adder count of a hardware butterfly.
    """
    rr = fxcore.mul(a.re, b.re)
    ii = fxcore.mul(a.im, b.im)
    ri = fxcore.mul(a.re, b.im)
    ir = fxcore.mul(a.im, b.re)
    fxtally.record("add", 2)
    re = fxcore._add_stored(rr, -ii.stored, ii.spec)
    im = fxcore._add_stored(ri, ir.stored, ir.spec)
    return FixedComplex(re, im)


def conj(a: FixedComplex) -> FixedComplex:
    return FixedComplex(a.re, fxcore.neg(a.im))


def crefix(a: FixedComplex, re_spec: FixedSpec, im_spec: FixedSpec | None = None) -> FixedComplex:
    return FixedComplex(fxcore.refix(a.re, re_spec), fxcore.refix(a.im, im_spec or re_spec))
