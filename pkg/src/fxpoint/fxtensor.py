"""2-D fixed-point matrices whose elements each carry their own representation.

Storage is row-major and indexing zero-based. Elements are either
:class:`FixedScalar` or :class:`FixedComplex`. ``*`` is elementwise and ``@``
is the matrix product, following numpy rather than Octave.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from . import fxcomplex, fxcore
from .errors import DimensionMismatch
from .fxcomplex import FixedComplex
from .fxcore import FixedScalar, FixedSpec

Element = Union[FixedScalar, FixedComplex]
FIELDS = ("x", "sign", "int", "dec")


@dataclass(frozen=True, eq=False)
class FixedTensor:
    rows: int
    cols: int
    elems: tuple

    def __post_init__(self):
        if len(self.elems) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.elems)} elements for a {self.rows}x{self.cols} tensor"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __len__(self) -> int:
        return len(self.elems)

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            r, c = idx
            if isinstance(r, slice) or isinstance(c, slice):
                rs = range(self.rows)[r] if isinstance(r, slice) else [r]
                cs = range(self.cols)[c] if isinstance(c, slice) else [c]
                return FixedTensor(
                    len(rs), len(cs), tuple(self.elems[i * self.cols + j] for i in rs for j in cs)
                )
            return self.elems[r * self.cols + c]
        return self.elems[idx]

    def __iter__(self):
        return iter(self.elems)

    @property
    def is_complex(self) -> bool:
        return any(isinstance(e, FixedComplex) for e in self.elems)

    @property
    def x(self) -> np.ndarray:
        return get_field(self, "x")

    @property
    def sign(self) -> np.ndarray:
        return get_field(self, "sign")

    @property
    def int(self) -> np.ndarray:
        return get_field(self, "int")

    @property
    def dec(self) -> np.ndarray:
        return get_field(self, "dec")

    def specs(self) -> list:
        return [_spec_of(e) for e in self.elems]

    def identical(self, other: "FixedTensor") -> bool:
        """Same shape, stored values and per-element specs."""
        return self.shape == other.shape and all(
            _key(a) == _key(b) for a, b in zip(self.elems, other.elems)
        )

    def __add__(self, other):
        return map_binary("add", self, other)

    def __sub__(self, other):
        return map_binary("sub", self, other)

    def __mul__(self, other):
        return map_binary("mul", self, other)

    def __truediv__(self, other):
        return map_binary("div", self, other)

    def __matmul__(self, other):
        return matmul(self, other)

    def __neg__(self):
        return FixedTensor(self.rows, self.cols, tuple(-e for e in self.elems))

    def __eq__(self, other):
        if not isinstance(other, FixedTensor):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for a, b in zip(self.elems, other.elems)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"FixedTensor({self.rows}x{self.cols}, x={self.x.tolist()!r})"


def _spec_of(e: Element):
    if isinstance(e, FixedComplex):
        return (tuple(e.re.spec), tuple(e.im.spec))
    return tuple(e.spec)


def _key(e: Element):
    if isinstance(e, FixedComplex):
        return (e.re.stored, tuple(e.re.spec), e.im.stored, tuple(e.im.spec))
    return (e.stored, tuple(e.spec))


def _as_matrix(v) -> np.ndarray:
    a = np.asarray(v)
    if a.ndim == 0:
        return a.reshape(1, 1)
    if a.ndim == 1:
        return a.reshape(1, -1)
    if a.ndim == 2:
        return a
    raise DimensionMismatch(f"expected at most 2 dimensions, got {a.ndim}")


def _broadcast_bits(v, shape: tuple[int, int], name: str) -> np.ndarray:
    a = np.asarray(v)
    if a.ndim == 0:
        return np.full(shape, a.item(), dtype=a.dtype)
    a = _as_matrix(a)
    if a.shape != shape:
        raise DimensionMismatch(f"{name} has shape {a.shape}, expected {shape}")
    return a


def _bits(v) -> int:
    if int(v) != v:
        raise ValueError(f"bit count must be an integer, got {v!r}")
    return int(v)


def tensor_make(is_bits, ds_bits, f=None) -> FixedTensor:
    """Quantize ``f`` elementwise with per-element specs.

    ``is_bits``/``ds_bits`` may be scalars (broadcast) or matrices matching
    ``f``. Omitting ``f`` gives zeros shaped like whichever of
    ``is_bits``/``ds_bits`` is a matrix.
    """
    is_a, ds_a = np.asarray(is_bits), np.asarray(ds_bits)
    if f is None:
        if is_a.ndim and ds_a.ndim and _as_matrix(is_a).shape != _as_matrix(ds_a).shape:
            raise DimensionMismatch("is and ds shapes differ")
        ref = is_a if is_a.ndim else ds_a
        f = np.zeros(_as_matrix(ref).shape)
    else:
        f_a = np.asarray(f)
        if f_a.ndim == 0 and (is_a.ndim or ds_a.ndim):
            raise DimensionMismatch("values must be a matrix when is or ds is")
    fm = _as_matrix(f)
    shape = fm.shape
    is_m = _broadcast_bits(is_a, shape, "is")
    ds_m = _broadcast_bits(ds_a, shape, "ds")
    cplx = np.iscomplexobj(fm)
    elems = []
    for r in range(shape[0]):
        for c in range(shape[1]):
            spec = fxcore.make_spec(_bits(is_m[r, c]), _bits(ds_m[r, c]))
            v = fm[r, c]
            if cplx:
                elems.append(fxcomplex.cquantize(spec, complex(v)))
            else:
                elems.append(fxcore.quantize(spec, float(v)))
    return FixedTensor(shape[0], shape[1], tuple(elems))


def tensor_from_integers(v) -> FixedTensor:
    """Integer part of each entry in its narrowest ds = 0 representation."""
    m = _as_matrix(v)
    elems = []
    for val in m.ravel():
        if np.iscomplexobj(m):
            z = complex(val)
            elems.append(
                FixedComplex(fxcore.from_integer(z.real), fxcore.from_integer(z.imag))
            )
        else:
            elems.append(fxcore.from_integer(val.item() if hasattr(val, "item") else val))
    return FixedTensor(m.shape[0], m.shape[1], tuple(elems))


def from_elements(rows: Sequence[Sequence[Element]]) -> FixedTensor:
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    if any(len(r) != ncols for r in rows):
        raise DimensionMismatch("ragged rows")
    return FixedTensor(len(rows), ncols, tuple(e for r in rows for e in r))


def _promote_pair(a: Element, b: Element):
    # mixing real and complex operands: lift the real one with a zero imaginary
    # part in the same spec
    if isinstance(a, FixedComplex) and isinstance(b, FixedScalar):
        b = FixedComplex(b, FixedScalar(0, b.spec))
    elif isinstance(a, FixedScalar) and isinstance(b, FixedComplex):
        a = FixedComplex(a, FixedScalar(0, a.spec))
    return a, b


_SCALAR_OPS: dict[str, Callable] = {
    "add": fxcore.add,
    "sub": fxcore.sub,
    "mul": fxcore.mul,
    "div": fxcore.div,
}
_COMPLEX_OPS: dict[str, Callable] = {
    "add": fxcomplex.cadd,
    "sub": fxcomplex.csub,
    "mul": fxcomplex.cmul,
}


def apply_op(op: str, a: Element, b: Element) -> Element:
    a, b = _promote_pair(a, b)
    if isinstance(a, FixedComplex):
        if op not in _COMPLEX_OPS:
            raise TypeError(f"{op} is not defined for complex fixed-point values")
        return _COMPLEX_OPS[op](a, b)
    return _SCALAR_OPS[op](a, b)


def map_binary(op: str, a: FixedTensor, b) -> FixedTensor:
    if op not in _SCALAR_OPS:
        raise ValueError(f"unknown operation {op!r}")
    if isinstance(b, (FixedScalar, FixedComplex)):
        out = tuple(apply_op(op, e, b) for e in a.elems)
    elif isinstance(b, FixedTensor):
        if a.shape != b.shape:
            raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
        out = tuple(apply_op(op, x, y) for x, y in zip(a.elems, b.elems))
    else:
        return NotImplemented
    return FixedTensor(a.rows, a.cols, out)


def matmul(a: FixedTensor, b: FixedTensor) -> FixedTensor:
    """Matrix product; each output cell accumulates k = 0, 1, ... in order
    (with wrap-around the accumulation order is observable)."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.cols == 0:
        raise DimensionMismatch("inner dimension is empty")
    out = []
    for i in range(a.rows):
        for j in range(b.cols):
            acc = apply_op("mul", a[i, 0], b[0, j])
            for k in range(1, a.cols):
                acc = apply_op("add", acc, apply_op("mul", a[i, k], b[k, j]))
            out.append(acc)
    return FixedTensor(a.rows, b.cols, tuple(out))


def concat(axis: str | int, a: FixedTensor, b: FixedTensor) -> FixedTensor:
    """Join along ``"rows"`` (axis 0, stack vertically) or ``"cols"`` (axis 1).
    Element specs are kept as they are."""
    axis = {"rows": 0, "cols": 1, 0: 0, 1: 1}[axis]
    if axis == 0:
        if a.cols != b.cols:
            raise DimensionMismatch(f"column counts {a.cols} and {b.cols} differ")
        return FixedTensor(a.rows + b.rows, a.cols, a.elems + b.elems)
    if a.rows != b.rows:
        raise DimensionMismatch(f"row counts {a.rows} and {b.rows} differ")
    out = []
    for r in range(a.rows):
        out.extend(a.elems[r * a.cols:(r + 1) * a.cols])
        out.extend(b.elems[r * b.cols:(r + 1) * b.cols])
    return FixedTensor(a.rows, a.cols + b.cols, tuple(out))


def _field_scalar(e: FixedScalar, field: str):
    if field == "x":
        return e.x
    if field == "sign":
        return e.sign
    if field == "int":
        return e.int
    return e.dec


def get_field(t: FixedTensor, field: str) -> np.ndarray:
    """Plain array of the same shape holding real values, signs or bit counts.

    Complex elements give complex entries (real part from ``re``, imaginary
    part from ``im``).
    """
    if field not in FIELDS:
        raise ValueError(f"unknown field {field!r}; expected one of {FIELDS}")
    cplx = t.is_complex
    vals = []
    for e in t.elems:
        if isinstance(e, FixedComplex):
            vals.append(complex(_field_scalar(e.re, field), _field_scalar(e.im, field)))
        else:
            vals.append(_field_scalar(e, field))
    if cplx:
        dtype = complex
    elif field == "x":
        dtype = float
    else:
        dtype = np.int64
    return np.array(vals, dtype=dtype).reshape(t.rows, t.cols)


def _refix_bits(e: FixedScalar, field: str, bits: int) -> FixedScalar:
    if field == "int":
        new = fxcore.make_spec(bits, e.dec)
    else:
        new = fxcore.make_spec(e.int, bits)
    return fxcore.refix(e, new)


def set_field(t: FixedTensor, field: str, v) -> FixedTensor:
    """Return ``t`` refixed so that its ``int`` or ``dec`` field equals ``v``.

    ``v`` broadcasts like the constructor's bit-count arguments; a complex
    ``v`` sets the real and imaginary parts separately. The value field ``x``
    is read-only.
    """
    if field == "x":
        raise AttributeError("the value field x cannot be assigned; construct a new tensor")
    if field not in ("int", "dec"):
        raise ValueError(f"field {field!r} is not assignable")
    vm = _broadcast_bits(v, t.shape, field)
    out = []
    for e, bits in zip(t.elems, vm.ravel()):
        if isinstance(e, FixedComplex):
            z = complex(bits)
            out.append(
                FixedComplex(
                    _refix_bits(e.re, field, _bits(z.real)),
                    _refix_bits(e.im, field, _bits(z.imag if np.iscomplexobj(vm) else z.real)),
                )
            )
        else:
            out.append(_refix_bits(e, field, _bits(bits)))
    return FixedTensor(t.rows, t.cols, tuple(out))
