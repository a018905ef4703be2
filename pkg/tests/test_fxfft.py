import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fxpoint import fxcore
from fxpoint.errors import SizeNotPowerOfFour, SpecOutOfRange
from fxpoint.fxcomplex import FixedComplex
from fxpoint.fxcore import FixedScalar, make_spec
from fxpoint.fxfft import (
    ScalingPolicy,
    dft_reference,
    digit_reverse,
    fft_float,
    ifft_float,
    ifft_radix4,
    ifft_radix4_batch,
    log4,
    twiddle_table,
)
from fxpoint.fxtally import OpTally


def to_fixed(re, im, spec):
    return [FixedComplex(FixedScalar(int(r), spec), FixedScalar(int(i), spec)) for r, i in zip(re, im)]


def random_stored(rng, spec, shape, frac=1.0):
    lim = int(frac * (spec.max_stored + 1))
    re = rng.integers(-lim, lim, size=shape)
    im = rng.integers(-lim, lim, size=shape)
    return re, im


# --- digit reversal / twiddles ------------------------------------------------


def _reverse_by_string(i, digits):
    s = np.base_repr(i, 4).zfill(digits)
    return int(s[::-1], 4) if digits else 0


@pytest.mark.parametrize("n", [1, 4, 16, 64, 256])
def test_digit_reverse_matches_string_oracle(n):
    d = log4(n)
    assert digit_reverse(n) == [_reverse_by_string(i, d) for i in range(n)]


def test_digit_reverse_examples():
    assert digit_reverse(16)[0] == 0
    assert digit_reverse(16)[1] == 4
    assert digit_reverse(64)[1] == 16


@pytest.mark.parametrize("n", [4, 16, 64, 256, 1024])
def test_digit_reverse_involution(n):
    p = digit_reverse(n)
    assert [p[p[i]] for i in range(n)] == list(range(n))


@pytest.mark.parametrize("n", [0, 2, 8, 32, 60, 128])
def test_size_not_power_of_four(n):
    with pytest.raises(SizeNotPowerOfFour):
        digit_reverse(n)


def test_twiddle_examples():
    t = twiddle_table(4)
    assert t[0] == 1 and t[1] == 1j
    q = twiddle_table(8 * 8, make_spec(1, 8))
    assert q[0].x == 1 + 0j
    # cos(pi/4) at ds = 8: round(0.70710678 * 256) = 181
    k = 64 // 8
    assert q[k].re.stored == 181 and q[k].re.x == 0.70703125
    assert q[k].im.stored == 181


def test_twiddle_fixed_needs_integer_bit():
    with pytest.raises(SpecOutOfRange):
        twiddle_table(16, make_spec(0, 8))


@pytest.mark.parametrize("ds", [4, 8, 16, 28])
def test_twiddle_magnitude_bound(ds):
    t = twiddle_table(64, make_spec(1, ds))
    for w in t.entries:
        assert abs(w.x) <= 1 + 2.0**-ds


# --- floating transform ------------------------------------------------------


def test_ifft_delta_and_ones():
    X = np.zeros(64)
    X[0] = 1
    assert np.allclose(ifft_float(X), 1 / 64, atol=1e-15)
    x = ifft_float(np.ones(64))
    assert abs(x[0] - 1) < 1e-15 and np.abs(x[1:]).max() < 1e-15


@pytest.mark.parametrize("n", [1, 4, 16, 64, 256])
def test_float_vs_dft(n):
    rng = np.random.default_rng(n)
    X = rng.normal(size=(10, n)) + 1j * rng.normal(size=(10, n))
    assert np.abs(ifft_float(X) - dft_reference(X)).max() < 1e-9


def test_scalar_float_path_matches_vector_path():
    rng = np.random.default_rng(2)
    X = rng.normal(size=16) + 1j * rng.normal(size=16)
    r = ifft_radix4(list(X))
    assert np.abs(r.to_complex() - ifft_float(X)).max() < 1e-14


def test_dft_reference_properties():
    rng = np.random.default_rng(3)
    n = 12  # any length
    d = np.zeros(n)
    d[0] = 1
    assert np.allclose(dft_reference(d), 1 / n)
    x = dft_reference(np.ones(n))
    assert abs(x[0] - 1) < 1e-12 and np.abs(x[1:]).max() < 1e-12
    X, Y = rng.normal(size=n), rng.normal(size=n) * 1j
    a, b = 2.5, -0.75
    assert np.abs(dft_reference(a * X + b * Y) - (a * dft_reference(X) + b * dft_reference(Y))).max() < 1e-12


def test_fft_float_round_trip_and_parseval():
    rng = np.random.default_rng(4)
    X = rng.normal(size=64) + 1j * rng.normal(size=64)
    x = ifft_float(X)
    assert np.abs(fft_float(x) - X).max() < 1e-9
    d = np.zeros(64)
    d[0] = 1
    assert np.allclose(fft_float(d), 1)
    assert abs(np.sum(np.abs(x) ** 2) - np.sum(np.abs(X) ** 2) / 64) < 1e-9
    with pytest.raises(SizeNotPowerOfFour):
        fft_float(np.zeros(32))


# --- fixed transforms --------------------------------------------------------


def test_fixed_width_close_to_float():
    rng = np.random.default_rng(6)
    spec = make_spec(1, 28)
    re, im = random_stored(rng, spec, (20, 64), frac=1 / 8)
    out = ifft_radix4_batch(re, im, spec)
    ref = ifft_float((re + 1j * im) * 2.0**-28)
    assert out.overflows == 0
    assert out.spec == spec
    assert np.abs(out.to_complex() - ref).max() < 2.0**-20


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(24, 40), st.integers(4, 8))
def test_fixed_width_error_bound(seed, ds, is_):
    # with inputs below 2**(is-4) the transform never wraps and the error is
    # bounded by N * 2**(1 - ds)
    spec = make_spec(is_, ds)
    rng = np.random.default_rng(seed)
    lim = 2 ** (is_ - 4 + ds)
    re = rng.integers(-lim, lim, size=64)
    im = rng.integers(-lim, lim, size=64)
    out = ifft_radix4_batch(re, im, spec)
    ref = ifft_float((re + 1j * im) * 2.0**-ds)
    assert out.overflows == 0
    assert np.abs(out.to_complex() - ref).max() <= 64 * 2.0 ** (1 - ds)


@pytest.mark.parametrize("policy", list(ScalingPolicy))
@pytest.mark.parametrize("spec", [(1, 11), (3, 9), (2, 20), (0, 12)])
def test_batch_matches_scalar_backend(policy, spec):
    s = make_spec(*spec)
    rng = np.random.default_rng(7)
    re, im = random_stored(rng, s, (3, 16))
    t_scalar, t_batch = OpTally(), OpTally()
    b = ifft_radix4_batch(re, im, s, policy, t_batch)
    total_overflows = 0
    for row in range(3):
        r = ifft_radix4(to_fixed(re[row], im[row], s), policy, t_scalar)
        total_overflows += r.overflows
        assert r.spec == b.spec
        assert [(v.re.stored, v.im.stored) for v in r.values] == list(zip(b.re[row].tolist(), b.im[row].tolist()))
        assert all(v.re.spec == b.spec and v.im.spec == b.spec for v in r.values)
    assert total_overflows == b.overflows
    assert t_scalar.report() == t_batch.report()
    assert t_scalar.overflows == t_batch.overflows


def test_batch_object_dtype_for_wide_words():
    s = make_spec(2, 40)
    rng = np.random.default_rng(8)
    re, im = random_stored(rng, s, (2, 16), frac=1 / 16)
    b = ifft_radix4_batch(re, im, s)
    for row in range(2):
        r = ifft_radix4(to_fixed(re[row], im[row], s))
        assert [v.re.stored for v in r.values] == [int(v) for v in b.re[row]]


def test_fixed_width_wraps_and_counts():
    s = make_spec(1, 7)
    x = to_fixed([s.max_stored] * 16, [s.max_stored] * 16, s)
    r = ifft_radix4(x, ScalingPolicy.FIXED_WIDTH)
    assert r.overflows > 0
    assert r.spec == s


def test_grow_never_overflows_and_grows():
    rng = np.random.default_rng(9)
    s = make_spec(3, 10)
    re, im = random_stored(rng, s, (200, 64))
    out = ifft_radix4_batch(re, im, s, ScalingPolicy.GROW)
    assert out.overflows == 0
    assert out.spec == make_spec(3 + 6, 10)
    # unnormalised: exactly N times the normalised float transform, up to
    # twiddle rounding
    ref = ifft_float((re + 1j * im) * 2.0**-10) * 64
    assert np.abs(out.to_complex() - ref).max() < 64 * 8 * 2.0**-10


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(4, 20))
def test_grow_no_overflow_inside_disk(seed, is_, ds):
    # |X| < 0.9 * 2**is keeps every butterfly inside the grown range
    s = make_spec(is_, ds)
    rng = np.random.default_rng(seed)
    r = rng.uniform(0, 0.9, 16) * 2.0**is_
    ph = rng.uniform(0, 2 * np.pi, 16)
    z = r * np.exp(1j * ph)
    re = np.floor(z.real * 2**ds).astype(np.int64)
    im = np.floor(z.imag * 2**ds).astype(np.int64)
    out = ifft_radix4_batch(re, im, s, ScalingPolicy.GROW)
    assert out.overflows == 0


def test_grow_budget_exceeded():
    s = make_spec(50, 10)
    with pytest.raises(SpecOutOfRange):
        ifft_radix4_batch(np.zeros((1, 64), int), np.zeros((1, 64), int), s, ScalingPolicy.GROW)


def test_truncate_constant_width():
    rng = np.random.default_rng(10)
    s = make_spec(2, 14)
    re, im = random_stored(rng, s, (100, 64))
    out = ifft_radix4_batch(re, im, s, ScalingPolicy.TRUNCATE_LSB)
    assert out.overflows == 0
    assert out.spec == make_spec(8, 8) and out.spec.width == s.width
    ref = ifft_float((re + 1j * im) * 2.0**-14) * 64
    assert np.abs(out.to_complex() - ref).max() < 0.1


def test_truncate_needs_fraction_bits():
    with pytest.raises(SpecOutOfRange):
        ifft_radix4_batch(np.zeros((1, 64), int), np.zeros((1, 64), int), make_spec(1, 4), ScalingPolicy.TRUNCATE_LSB)


def test_fixed_width_tally_deterministic():
    rng = np.random.default_rng(11)
    s = make_spec(1, 15)
    re, im = random_stored(rng, s, (5, 64))
    reports = []
    for _ in range(2):
        t = OpTally()
        ifft_radix4_batch(re, im, s, tally=t)
        reports.append(t.report())
    assert reports[0] == reports[1]
    # a different input gives the same counts: the schedule depends only on N
    t = OpTally()
    ifft_radix4_batch(re[::-1], -im, s, tally=t)
    assert t.report() == reports[0]


def test_fixed_inputs_must_share_spec():
    a = FixedComplex(fxcore.fixed(1, 4, 0.5), fxcore.fixed(1, 4, 0))
    b = FixedComplex(fxcore.fixed(1, 5, 0.5), fxcore.fixed(1, 5, 0))
    with pytest.raises(ValueError):
        ifft_radix4([a, b, a, a])
