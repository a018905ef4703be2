"""Bit-accurate twos-complement fixed-point arithmetic and a radix-4 IFFT /
OFDM modulator experiment harness."""

from .errors import (
    DimensionMismatch,
    DivisionByZero,
    FixedPointError,
    InsufficientBits,
    NonFiniteInput,
    SizeNotPowerOfFour,
    SpecOutOfRange,
)
from .fxcomplex import FixedComplex, cadd, cmake, cmul, conj, cquantize
from .fxcore import (
    FixedScalar,
    FixedSpec,
    add,
    compare,
    div,
    fixed,
    make_spec,
    min_int_bits,
    mul,
    neg,
    quantize,
    refix,
    sign,
    sub,
    to_real,
)
from .fxfft import ScalingPolicy, dft_reference, digit_reverse, fft_float, ifft_float, ifft_radix4
from .fxtally import OpTally, counting
from .fxtensor import FixedTensor, concat, get_field, map_binary, matmul, set_field, tensor_from_integers, tensor_make

__version__ = "0.1.0"
