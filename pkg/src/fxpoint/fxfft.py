"""Radix-4 IFFT written once and instantiated over several arithmetics.

The butterfly network is decimation-in-time: inputs in base-4 digit-reversed
order, ``log4(N)`` stages, natural-order outputs. Each butterfly multiplies
legs 1..3 by their twiddles and then accumulates the four phased terms in
index order; with wrap-around arithmetic that order is observable, so it is
fixed.

Backends:

* ``FloatArith``: Python complex or numpy complex arrays. Every stage ends with
  an exact ``* 0.25``, so the result carries the ``1/N`` factor.
* ``FixedArith``: :class:`FixedComplex` elements through :mod:`fxcore`,
  operation-by-operation (slow; the bit-true reference).
* ``BatchFixedArith``: the same integer semantics vectorised over a batch of
  transforms with numpy. Must agree bit for bit with ``FixedArith``.

Bit-growth policies for the fixed backends:

* ``GROW``: two more integer bits per stage. No scaling, so the output is the
  unnormalised sum (``scale == N``).
* ``TRUNCATE_LSB``: two more integer bits and two fewer fractional bits per
  stage (floor), total width constant; also unnormalised.
* ``FIXED_WIDTH``: constant spec, additions wrap, and every stage ends with an
  arithmetic shift right by 2, giving the overall ``1/N``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import fxcomplex, fxcore, fxtally
from .errors import SizeNotPowerOfFour, SpecOutOfRange
from .fxcomplex import FixedComplex
from .fxcore import FixedScalar, FixedSpec
from .fxtally import OpTally


class ScalingPolicy(enum.Enum):
    GROW = "grow"
    TRUNCATE_LSB = "truncate-lsb"
    FIXED_WIDTH = "fixed-width"


def log4(n: int) -> int:
    if n < 1 or n & (n - 1) or (n.bit_length() - 1) % 2:
        raise SizeNotPowerOfFour(f"transform size {n} is not a power of 4")
    return (n.bit_length() - 1) // 2


def digit_reverse(n: int) -> list[int]:
    """Permutation taking index i to its base-4 digit reversal."""
    digits = log4(n)
    perm = []
    for i in range(n):
        r, v = 0, i
        for _ in range(digits):
            r = (r << 2) | (v & 3)
            v >>= 2
        perm.append(r)
    return perm


def _unit(k: int, n: int) -> complex:
    # exact on the axes so that entry 0 is 1 and quarter turns are exact
    k %= n
    if 4 * k % n == 0:
        return (1, 1j, -1, -1j)[4 * k // n]
    return cmath.exp(2j * math.pi * k / n)


@dataclass(frozen=True)
class TwiddleTable:
    n: int
    entries: tuple
    spec: FixedSpec | None = None

    def __getitem__(self, k: int):
        return self.entries[k % self.n]


def twiddle_table(n: int, spec: FixedSpec | None = None) -> TwiddleTable:
    """``e^{+j 2 pi k / n}`` for k < n, exact floats or quantized to ``spec``."""
    log4(n)
    floats = tuple(_unit(k, n) for k in range(n))
    if spec is None:
        return TwiddleTable(n, floats)
    if spec.int_bits < 1:
        raise SpecOutOfRange("twiddle spec needs at least one integer bit to hold 1.0")
    with fxtally.counting(None):
        entries = tuple(
            FixedComplex(fxcore.quantize(spec, w.real), fxcore.quantize(spec, w.imag))
            for w in floats
        )
    return TwiddleTable(n, entries, spec)


def _radix4(a: list, ar) -> list:
    n = len(a)
    perm = digit_reverse(n)
    a = [a[p] for p in perm]
    span = 1
    for s in range(log4(n)):
        a = ar.begin_stage(a)
        group = 4 * span
        step = n // group
        out = [None] * n
        for start in range(0, n, group):
            for j in range(span):
                i0 = start + j
                t = [a[i0]] + [ar.twiddle(a[i0 + k * span], k * j * step) for k in (1, 2, 3)]
                for m in range(4):
                    acc = t[0]
                    for k in (1, 2, 3):
                        acc = ar.add_rot(acc, t[k], (m * k) % 4)
                    out[i0 + m * span] = acc
        a = ar.end_stage(out)
        span = group
    return a


class FloatArith:
    def __init__(self, n: int):
        self.tw = twiddle_table(n)

    def begin_stage(self, a):
        return a

    def twiddle(self, v, k):
        return v * self.tw[k]

    def add_rot(self, acc, v, q):
        if q == 0:
            return acc + v
        if q == 2:
            return acc - v
        # v * (+-j), written out so it stays exact
        rot = complex(0, 1) if q == 1 else complex(0, -1)
        return acc + v * rot

    def end_stage(self, a):
        return [v * 0.25 for v in a]


def _stage_specs(spec: FixedSpec, policy: ScalingPolicy, stages: int) -> list[FixedSpec]:
    """Data spec in force during each stage, plus the output spec."""
    out = [spec]
    is_, ds = spec.int_bits, spec.dec_bits
    for _ in range(stages):
        if policy is ScalingPolicy.GROW:
            is_ += 2
        elif policy is ScalingPolicy.TRUNCATE_LSB:
            is_, ds = is_ + 2, ds - 2
        out.append(fxcore.make_spec(is_, ds))
    return out if policy is not ScalingPolicy.FIXED_WIDTH else [spec] * (stages + 1)


class FixedArith:
    def __init__(self, n: int, spec: FixedSpec, policy: ScalingPolicy, twiddle_spec: FixedSpec):
        self.tw = twiddle_table(n, twiddle_spec)
        self.policy = policy
        self.specs = _stage_specs(spec, policy, log4(n))
        self.stage = 0
        self.spec = spec

    def begin_stage(self, a):
        new = self.specs[self.stage + 1]
        self.stage += 1
        if new != self.spec:
            self.spec = new
            a = [FixedComplex(fxcore.refix(v.re, new), fxcore.refix(v.im, new)) for v in a]
        return a

    def twiddle(self, v, k):
        p = fxcomplex.cmul(v, self.tw[k])
        if p.re.spec != self.spec:
            p = FixedComplex(fxcore.refix(p.re, self.spec), fxcore.refix(p.im, self.spec))
        return p

    def add_rot(self, acc, v, q):
        if q == 0:
            return FixedComplex(fxcore.add(acc.re, v.re), fxcore.add(acc.im, v.im))
        if q == 1:  # + j v = -v.im + j v.re
            return FixedComplex(fxcore.sub(acc.re, v.im), fxcore.add(acc.im, v.re))
        if q == 2:
            return FixedComplex(fxcore.sub(acc.re, v.re), fxcore.sub(acc.im, v.im))
        return FixedComplex(fxcore.add(acc.re, v.im), fxcore.sub(acc.im, v.re))

    def end_stage(self, a):
        if self.policy is not ScalingPolicy.FIXED_WIDTH:
            return a
        return [
            FixedComplex(FixedScalar(v.re.stored >> 2, v.re.spec), FixedScalar(v.im.stored >> 2, v.im.spec))
            for v in a
        ]


# ---------------------------------------------------------------------------
# vectorised integer backend


def _np_wrap(v: np.ndarray, spec: FixedSpec) -> np.ndarray:
    w = spec.width + 1
    r = v & ((1 << w) - 1)
    r = np.where(r >= (1 << (w - 1)), r - (1 << w), r)
    n = int(np.count_nonzero(r != v))
    if n:
        fxtally.record_overflow(n)
    return r


def _np_shift(v: np.ndarray, k: int) -> np.ndarray:
    return v << k if k >= 0 else v >> -k


def _np_refix(v: np.ndarray, old: FixedSpec, new: FixedSpec) -> np.ndarray:
    s = _np_shift(v, new.dec_bits - old.dec_bits)
    if new.int_bits < old.int_bits:
        mag = np.abs(s) & ((1 << new.width) - 1)
        fits = (s >= new.min_stored) & (s <= new.max_stored)
        s = np.where(fits, s, np.where(s < 0, -mag, mag))
    return s


class BatchFixedArith:
    """Elements are ``(re, im)`` pairs of integer arrays, one entry per
    transform in the batch."""

    def __init__(self, n: int, spec: FixedSpec, policy: ScalingPolicy, twiddle_spec: FixedSpec, batch: int):
        tw = twiddle_table(n, twiddle_spec)
        self.twiddle_spec = twiddle_spec
        self.policy = policy
        self.specs = _stage_specs(spec, policy, log4(n))
        self.stage = 0
        self.spec = spec
        self.batch = batch
        widest = max(s.width for s in self.specs) + 1
        prod_bits = widest + twiddle_spec.width + 1
        self.dtype = np.int64 if prod_bits <= 62 else object
        self.tw = [(int(w.re.stored), int(w.im.stored)) for w in tw.entries]
        self.n = n

    def begin_stage(self, a):
        new = self.specs[self.stage + 1]
        self.stage += 1
        if new != self.spec:
            old, self.spec = self.spec, new
            fxtally.record("refix", 2 * self.batch * len(a))
            a = [(_np_refix(re, old, new), _np_refix(im, old, new)) for re, im in a]
        return a

    def twiddle(self, v, k):
        wre, wim = self.tw[k % self.n]
        re, im = v
        d, t = self.spec, self.twiddle_spec
        ps = fxcore.promote(d, t)
        sh = ps.dec_bits - d.dec_bits - t.dec_bits
        rr = _np_wrap(_np_shift(re * wre, sh), ps)
        ii = _np_wrap(_np_shift(im * wim, sh), ps)
        ri = _np_wrap(_np_shift(re * wim, sh), ps)
        ir = _np_wrap(_np_shift(im * wre, sh), ps)
        fxtally.record("mul", 4 * self.batch)
        fxtally.record("add", 2 * self.batch)
        pre, pim = _np_wrap(rr - ii, ps), _np_wrap(ri + ir, ps)
        if ps != d:
            fxtally.record("refix", 2 * self.batch)
            pre, pim = _np_refix(pre, ps, d), _np_refix(pim, ps, d)
        return pre, pim

    def add_rot(self, acc, v, q):
        s = self.spec
        are, aim = acc
        vre, vim = v
        b = self.batch
        if q == 0:
            fxtally.record("add", 2 * b)
            return _np_wrap(are + vre, s), _np_wrap(aim + vim, s)
        if q == 1:
            fxtally.record("sub", b)
            fxtally.record("add", b)
            return _np_wrap(are - vim, s), _np_wrap(aim + vre, s)
        if q == 2:
            fxtally.record("sub", 2 * b)
            return _np_wrap(are - vre, s), _np_wrap(aim - vim, s)
        fxtally.record("add", b)
        fxtally.record("sub", b)
        return _np_wrap(are + vim, s), _np_wrap(aim - vre, s)

    def end_stage(self, a):
        if self.policy is not ScalingPolicy.FIXED_WIDTH:
            return a
        return [(re >> 2, im >> 2) for re, im in a]


# ---------------------------------------------------------------------------
# public entry points


@dataclass
class IfftResult:
    values: list
    overflows: int = 0
    spec: FixedSpec | None = None
    # output = scale * (1/N) * sum_k X[k] e^{+j 2 pi k n / N}
    scale: int = 1

    def to_complex(self) -> np.ndarray:
        return np.array([complex(v) for v in self.values])


@dataclass
class BatchIfftResult:
    re: np.ndarray
    im: np.ndarray
    spec: FixedSpec
    overflows: int = 0
    scale: int = 1

    def to_complex(self) -> np.ndarray:
        scale = math.ldexp(1.0, -self.spec.dec_bits)
        return (self.re.astype(float) + 1j * self.im.astype(float)) * scale

    def element(self, b: int, i: int) -> FixedComplex:
        return FixedComplex(
            FixedScalar(int(self.re[b, i]), self.spec), FixedScalar(int(self.im[b, i]), self.spec)
        )


def _output_scale(n: int, policy: ScalingPolicy) -> int:
    return 1 if policy is ScalingPolicy.FIXED_WIDTH else n


def _run_counted(a, ar, tally: OpTally | None):
    own = OpTally()
    with fxtally.counting(tally), fxtally.counting(own):
        out = _radix4(a, ar)
    return out, own.overflows


def ifft_radix4(
    x: Sequence,
    policy: ScalingPolicy = ScalingPolicy.FIXED_WIDTH,
    tally: OpTally | None = None,
    twiddle_spec: FixedSpec | None = None,
) -> IfftResult:
    """Radix-4 inverse transform of ``x``.

    Floating inputs (Python/numpy complex) give the normalised result for any
    policy. :class:`FixedComplex` inputs, all in one spec, run bit-true with
    ``policy``; twiddles default to ``(1, ds)`` of the input.
    """
    x = list(x)
    n = len(x)
    log4(n)
    if not x or not isinstance(x[0], FixedComplex):
        vals = _radix4([complex(v) for v in x], FloatArith(n))
        return IfftResult(vals)
    spec = x[0].re.spec
    for v in x:
        if not isinstance(v, FixedComplex) or v.re.spec != spec or v.im.spec != spec:
            raise ValueError("fixed-point inputs must all share one spec")
    if twiddle_spec is None:
        twiddle_spec = fxcore.make_spec(1, spec.dec_bits)
    ar = FixedArith(n, spec, policy, twiddle_spec)
    vals, overflows = _run_counted(x, ar, tally)
    return IfftResult(vals, overflows, ar.specs[-1], _output_scale(n, policy))


def ifft_radix4_batch(
    re: np.ndarray,
    im: np.ndarray,
    spec: FixedSpec,
    policy: ScalingPolicy = ScalingPolicy.FIXED_WIDTH,
    tally: OpTally | None = None,
    twiddle_spec: FixedSpec | None = None,
) -> BatchIfftResult:
    """Bit-true fixed IFFT of every row of the stored-integer arrays ``re``,
    ``im`` (shape ``(batch, N)``), all in ``spec``."""
    re = np.atleast_2d(np.asarray(re))
    im = np.atleast_2d(np.asarray(im))
    if re.shape != im.shape:
        raise ValueError("re and im shapes differ")
    batch, n = re.shape
    log4(n)
    for part in (re, im):
        if part.size and (part.min() < spec.min_stored or part.max() > spec.max_stored):
            raise ValueError(f"stored values outside {spec}")
    if twiddle_spec is None:
        twiddle_spec = fxcore.make_spec(1, spec.dec_bits)
    ar = BatchFixedArith(n, spec, policy, twiddle_spec, batch)
    cols = [(re[:, i].astype(ar.dtype), im[:, i].astype(ar.dtype)) for i in range(n)]
    out, overflows = _run_counted(cols, ar, tally)
    out_re = np.stack([c[0] for c in out], axis=1)
    out_im = np.stack([c[1] for c in out], axis=1)
    return BatchIfftResult(out_re, out_im, ar.specs[-1], overflows, _output_scale(n, policy))


def ifft_float(x) -> np.ndarray:
    """Normalised radix-4 IFFT along the last axis of a float array."""
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    cols = [x[..., i] for i in range(n)]
    out = _radix4(cols, FloatArith(n))
    return np.stack(out, axis=-1)


def dft_reference(x) -> np.ndarray:
    """Direct O(N^2) normalised inverse DFT."""
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    if n < 1:
        raise ValueError("empty input")
    k = np.arange(n)
    w = np.exp(2j * np.pi * (np.outer(k, k) % n) / n)
    return (x @ w.T) / n


def fft_float(x) -> np.ndarray:
    """Forward transform without scaling, the inverse of :func:`ifft_float`."""
    x = np.asarray(x, dtype=complex)
    log4(x.shape[-1])
    return np.fft.fft(x, axis=-1)
