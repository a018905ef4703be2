"""Golden cases reproducing the toolbox's documented interactive sessions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .fxcore import add, fixed, make_spec, min_int_bits, refix
from .fxtensor import set_field, tensor_make


@dataclass(frozen=True)
class Case:
    name: str
    expected: Any
    run: Callable[[], Any]

    def check(self) -> tuple[bool, Any]:
        actual = self.run()
        if isinstance(self.expected, list):
            ok = list(actual) == self.expected
        else:
            ok = actual == self.expected
        return ok, actual


def _signs():
    b = tensor_make(7, 2, np.arange(-3, 4))
    return [b.sign.ravel().tolist(), b.int.ravel().tolist(), b.dec.ravel().tolist()]


def _dec_change():
    b = tensor_make(7, 2, [3.25, 3.25])
    return set_field(b, "dec", [0, 2]).x.ravel().tolist()


CASES = [
    Case("saturate fixed(7,2,200)", 127.75, lambda: fixed(7, 2, 200).x),
    Case("wrap 127 + 2", -127.0, lambda: add(fixed(7, 2, 127), fixed(7, 2, 2)).x),
    Case("wrap -127 + -2", 127.0, lambda: add(fixed(7, 2, -127), fixed(7, 2, -2)).x),
    Case("refix (6,2) of -127.25", -63.25, lambda: refix(fixed(7, 2, -127.25), make_spec(6, 2)).x),
    Case("refix (6,2) of 127.25", 63.25, lambda: refix(fixed(7, 2, 127.25), make_spec(6, 2)).x),
    Case("refix (7,1) of -127.25", -127.5, lambda: refix(fixed(7, 2, -127.25), make_spec(7, 1)).x),
    Case("refix (7,1) of 127.25", 127.0, lambda: refix(fixed(7, 2, 127.25), make_spec(7, 1)).x),
    Case("promotion (7,2)+(6,3)", (7, 3), lambda: tuple(add(fixed(7, 2, 1), fixed(6, 3, 1)).spec)),
    Case("min bits of 1:4", [1, 2, 2, 3], lambda: [min_int_bits(v) for v in (1, 2, 3, 4)]),
    Case(
        "sign/int/dec of -3:3",
        [[-1, -1, -1, 0, 1, 1, 1], [7] * 7, [2] * 7],
        _signs,
    ),
    Case("dec change to [0,2]", [3.0, 3.25], _dec_change),
    Case(
        "two-argument constructor",
        True,
        lambda: tensor_make([7, 7], [2, 2]).identical(tensor_make([7, 7], [2, 2], np.zeros((1, 2)))),
    ),
]


def run_all(cases=CASES, out=print) -> bool:
    all_ok = True
    for c in cases:
        try:
            ok, actual = c.check()
        except Exception as exc:  # report and keep going
            ok, actual = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        out(f"{'PASS' if ok else 'FAIL'}  {c.name}: expected {c.expected!r}, got {actual!r}")
    return all_ok
