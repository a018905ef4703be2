import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fxpoint import fxcore, fxtally
from fxpoint.errors import DimensionMismatch, SpecOutOfRange
from fxpoint.fxcomplex import FixedComplex
from fxpoint.fxcore import FixedScalar, fixed, make_spec
from fxpoint.fxtensor import (
    FixedTensor,
    apply_op,
    concat,
    from_elements,
    get_field,
    map_binary,
    matmul,
    set_field,
    tensor_from_integers,
    tensor_make,
)


def test_make_per_element_specs():
    is_ = 3 * np.ones((10, 10)) + 4 * np.eye(10)
    d = tensor_make(is_, 1, np.eye(10))
    assert d.shape == (10, 10)
    for r in range(10):
        for c in range(10):
            e = d[r, c]
            assert (e.int, e.dec) == ((7, 1) if r == c else (3, 1))
            assert e.x == (1.0 if r == c else 0.0)


def test_two_argument_form():
    a = tensor_make([7, 7], [2, 2], np.zeros((1, 2)))
    b = tensor_make([7, 7], [2, 2])
    assert a == b and a.identical(b)


def test_make_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        tensor_make(np.full((2, 2), 7), 2, np.zeros((1, 2)))
    with pytest.raises(DimensionMismatch):
        tensor_make([7, 7], 2, 1.0)


def test_make_spec_error_per_element():
    with pytest.raises(SpecOutOfRange):
        tensor_make([7, 61], 2, [1.0, 1.0])


def test_make_broadcast_equals_expanded():
    f = np.array([[1.3, -2.6], [100.0, 0.1]])
    a = tensor_make(5, 3, f)
    b = tensor_make(np.full((2, 2), 5), np.full((2, 2), 3), f)
    assert a.identical(b)


def test_make_complex():
    e = tensor_make(7, 2, np.array([[1 + 1j, 255 - 300j]]))
    assert e[0, 0].x == 1 + 1j
    assert e[0, 1].x == 127.75 - 128j


def test_from_integers():
    b = tensor_from_integers([1, 2, 3, 4])
    assert b.int.ravel().tolist() == [1, 2, 2, 3]
    assert b.dec.ravel().tolist() == [0, 0, 0, 0]
    z = tensor_from_integers([0])
    assert z[0].x == 0 and (z[0].int, z[0].dec) == (0, 0)
    m = tensor_from_integers([-4])
    assert m[0].x == -4 and m[0].int == 2


def test_from_integers_complex_parts_separate():
    t = tensor_from_integers([3 - 8j])
    e = t[0]
    assert (e.re.int, e.im.int) == (2, 3)


def test_map_binary_examples():
    a = tensor_make(7, 2, [[1.5, -3.25], [100, 0]])
    assert map_binary("add", a, tensor_make(7, 2, np.zeros((2, 2)))).identical(a)
    b = tensor_make(6, 3, np.ones((2, 2)))
    assert {tuple(s) for s in (a + b).specs()} == {(7, 3)}


def test_map_binary_scalar_broadcast():
    a = tensor_make(7, 2, [[1.5, -3.25]])
    r = a * fixed(7, 2, 2)
    assert r.x.tolist() == [[3.0, -6.5]]


def test_map_binary_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        tensor_make(7, 2, [1, 2]) + tensor_make(7, 2, [1, 2, 3])


def _loop(op, a, b):
    fn = {"add": fxcore.add, "sub": fxcore.sub, "mul": fxcore.mul, "div": fxcore.div}[op]
    return [fn(x, y) for x, y in zip(a.elems, b.elems)]


@pytest.mark.parametrize("op", ["add", "sub", "mul", "div"])
def test_elementwise_exhaustive_2x2(op):
    # every 2x2 pairing over one fixed spec would be 2**32 cases; instead run
    # every stored pair through each of the four element positions
    for spec in [(1, 0), (0, 2), (2, 1), (1, 2)]:
        s = make_spec(*spec)
        vals = range(s.min_stored, s.max_stored + 1)
        for x, y in itertools.product(vals, repeat=2):
            if op == "div" and y == 0:
                continue
            for pos in range(4):
                ea = [FixedScalar(1, s)] * 4
                eb = [FixedScalar(1, s)] * 4
                ea[pos], eb[pos] = FixedScalar(x, s), FixedScalar(y, s)
                a, b = FixedTensor(2, 2, tuple(ea)), FixedTensor(2, 2, tuple(eb))
                got = map_binary(op, a, b)
                exp = _loop(op, a, b)
                assert [(e.stored, e.spec) for e in got] == [(e.stored, e.spec) for e in exp]


@pytest.mark.parametrize(
    "op,spec", [("add", (0, 0)), ("sub", (0, 0)), ("mul", (0, 0)), ("div", (0, 0)), ("add", (1, 0)), ("mul", (0, 1))]
)
def test_elementwise_fully_exhaustive_smallest_specs(op, spec):
    s = make_spec(*spec)
    vals = [FixedScalar(v, s) for v in range(s.min_stored, s.max_stored + 1)]
    divisors = [v for v in vals if v.stored] if op == "div" else vals
    tensors_a = [FixedTensor(2, 2, e) for e in itertools.product(vals, repeat=4)]
    tensors_b = [FixedTensor(2, 2, e) for e in itertools.product(divisors, repeat=4)]
    for a in tensors_a:
        for b in tensors_b:
            got = map_binary(op, a, b)
            assert [(e.stored, e.spec) for e in got] == [(e.stored, e.spec) for e in _loop(op, a, b)]


def test_matmul_identity_and_scalar():
    a = tensor_make(7, 2, [[1.25, -3.5], [2.0, 0.75]])
    eye = tensor_make(7, 2, np.eye(2))
    assert (eye @ a).identical(a)
    one = tensor_make(7, 2, [[3.5]])
    two = tensor_make(7, 2, [[-1.25]])
    assert matmul(one, two)[0].stored == fxcore.mul(one[0], two[0]).stored


def test_matmul_matches_loop_oracle():
    rng = np.random.default_rng(5)
    a = tensor_make(3, 2, rng.uniform(-8, 8, (2, 3)))
    b = tensor_make(3, 2, rng.uniform(-8, 8, (3, 2)))
    c = a @ b
    for i in range(2):
        for j in range(2):
            acc = fxcore.mul(a[i, 0], b[0, j])
            acc = fxcore.add(acc, fxcore.mul(a[i, 1], b[1, j]))
            acc = fxcore.add(acc, fxcore.mul(a[i, 2], b[2, j]))
            assert (c[i, j].stored, c[i, j].spec) == (acc.stored, acc.spec)


def test_matmul_shape_error():
    with pytest.raises(DimensionMismatch):
        tensor_make(7, 2, np.zeros((2, 3))) @ tensor_make(7, 2, np.zeros((2, 3)))


def test_matmul_counts_scalar_ops():
    a = tensor_make(7, 2, np.ones((2, 3)))
    b = tensor_make(7, 2, np.ones((3, 4)))
    t = fxtally.OpTally()
    with fxtally.counting(t):
        a @ b
    counts = dict(t.report())
    assert counts["mul"] == 2 * 4 * 3 and counts["add"] == 2 * 4 * 2


def test_complex_matmul():
    a = tensor_make(7, 2, np.array([[1j, 1]]))
    b = tensor_make(7, 2, np.array([[1j], [2]]))
    assert (a @ b)[0].x == 1 + 0j


def test_concat():
    a = tensor_make(7, 2, [[1, 2]])
    b = tensor_make(6, 3, [[3, 4]])
    c = concat("cols", a, b)
    assert c.shape == (1, 4)
    assert [tuple(s) for s in c.specs()] == [(7, 2), (7, 2), (6, 3), (6, 3)]
    with pytest.raises(DimensionMismatch):
        concat("rows", a, tensor_make(7, 2, [[1, 2, 3]]))


def test_concat_then_slice_round_trip():
    a = tensor_make(7, 2, [[1, 2], [3, 4]])
    b = tensor_make(3, 5, [[0.5, -1], [2, 2.5]])
    r = concat("rows", a, b)
    assert r[0:2, :].identical(a) and r[2:4, :].identical(b)
    c = concat("cols", a, b)
    assert c[:, 0:2].identical(a) and c[:, 2:4].identical(b)


def test_get_field_session():
    b = tensor_make(7, 2, np.arange(-3, 4))
    assert get_field(b, "sign").ravel().tolist() == [-1, -1, -1, 0, 1, 1, 1]
    assert get_field(b, "int").ravel().tolist() == [7] * 7
    assert get_field(b, "dec").ravel().tolist() == [2] * 7
    x = b.x
    assert isinstance(x, np.ndarray) and x.dtype == float
    assert x.ravel().tolist() == [-3, -2, -1, 0, 1, 2, 3]


def test_get_field_empty():
    t = FixedTensor(0, 0, ())
    assert get_field(t, "x").shape == (0, 0)


def test_set_field_session():
    b = tensor_make(7, 2, [3.25, 3.25])
    assert set_field(b, "dec", [0, 2]).x.ravel().tolist() == [3.0, 3.25]
    assert set_field(b, "dec", 2).identical(b)
    a = tensor_make(7, 2, [-127.25])
    assert set_field(a, "int", 6).x.ravel().tolist() == [-63.25]


def test_set_field_x_forbidden():
    with pytest.raises(AttributeError):
        set_field(tensor_make(7, 2, [1.0]), "x", [2.0])


@given(st.lists(st.integers(0, 20), min_size=1, max_size=6))
def test_set_then_get_dec(ds):
    t = tensor_make(7, 4, np.linspace(-5, 5, len(ds)))
    assert get_field(set_field(t, "dec", ds), "dec").ravel().tolist() == ds


def test_from_elements_and_mixed_real_complex():
    z = FixedComplex(fixed(7, 2, 1), fixed(7, 2, 2))
    t = from_elements([[fixed(7, 2, 1), z]])
    r = t + tensor_make(7, 2, [[1j, 1]])
    assert r.x.ravel().tolist() == [1 + 1j, 2 + 2j]
    assert apply_op("mul", fixed(7, 2, 2), z).x == 2 + 4j
