"""Operation counting for complexity analysis.

A tally is an explicit handle rather than global state. Arithmetic in
:mod:`fxpoint.fxcore` records into every tally activated with
:func:`counting`, so nested contexts (e.g. a transform's private tally inside
a caller's tally) both see the same operations. The active set lives in a
``ContextVar`` so threads never share it.
"""

from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator

KINDS = ("add", "sub", "mul", "div", "neg", "compare", "refix", "quantize")

_active: contextvars.ContextVar[tuple["OpTally", ...]] = contextvars.ContextVar(
    "fxpoint_active_tallies", default=()
)


@dataclass
class OpTally:
    enabled: bool = True
    counts: dict[str, int] = field(default_factory=lambda: dict.fromkeys(KINDS, 0))
    # wrap-around events inside arithmetic; not an operation kind
    overflows: int = 0

    def record(self, kind: str, n: int = 1) -> "OpTally":
        if kind not in self.counts:
            raise KeyError(f"unknown operation kind {kind!r}")
        if n < 0:
            raise ValueError("count must be non-negative")
        if self.enabled:
            self.counts[kind] += n
        return self

    def record_overflow(self, n: int = 1) -> "OpTally":
        if self.enabled:
            self.overflows += n
        return self

    def reset(self) -> "OpTally":
        for kind in self.counts:
            self.counts[kind] = 0
        self.overflows = 0
        return self

    def report(self) -> list[tuple[str, int]]:
        return [(kind, self.counts[kind]) for kind in KINDS]

    def merge(self, other: "OpTally") -> "OpTally":
        """Return a new tally holding the sum of both (enabled if either is)."""
        out = OpTally(enabled=self.enabled or other.enabled)
        for kind in KINDS:
            out.counts[kind] = self.counts[kind] + other.counts[kind]
        out.overflows = self.overflows + other.overflows
        return out

    def format(self) -> str:
        return "".join(f"{kind} {count}\n" for kind, count in self.report())


def tally_record(t: OpTally, kind: str, n: int = 1) -> OpTally:
    return t.record(kind, n)


def tally_reset(t: OpTally) -> OpTally:
    return t.reset()


def tally_report(t: OpTally) -> list[tuple[str, int]]:
    return t.report()


@contextmanager
def counting(tally: OpTally | None) -> Iterator[OpTally | None]:
    """Activate ``tally`` for the duration of the block (no-op for None)."""
    if tally is None:
        yield None
        return
    token = _active.set(_active.get() + (tally,))
    try:
        yield tally
    finally:
        _active.reset(token)


def record(kind: str, n: int = 1) -> None:
    for t in _active.get():
        t.record(kind, n)


def record_overflow(n: int = 1) -> None:
    for t in _active.get():
        t.record_overflow(n)
