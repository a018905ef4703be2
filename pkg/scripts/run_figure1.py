"""BER versus RMS backoff for several word widths.

Writes the sweep CSV and prints where each curve reaches its minimum.

    python3 scripts/run_figure1.py --symbols 700 --out figure1.csv
"""

import argparse
import sys
import time

from fxpoint import cli
from fxpoint.fxtally import OpTally


def landmarks(csv_text):
    curves = {}
    for line in csv_text.splitlines()[1:]:
        bits, bo, _, _, _, ber = line.split(",")
        curves.setdefault(int(bits), []).append((float(bo), float(ber)))
    for bits, pts in sorted(curves.items()):
        best = min(b for _, b in pts)
        at = [bo for bo, b in pts if b == best]
        yield bits, best, at, pts[0][1]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--bits", default="9,11,13")
    p.add_argument("--start", default="0")
    p.add_argument("--stop", default="24")
    p.add_argument("--step", default="1")
    p.add_argument("--symbols", type=int, default=700)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="figure1.csv")
    a = p.parse_args(argv)

    bits = [int(b) for b in a.bits.split(",")]
    grid = cli.backoff_grid(a.start, a.stop, a.step)
    tally = OpTally()
    t0 = time.perf_counter()
    text = cli.sweep_csv(bits, grid, a.symbols, a.seed, a.jobs, tally)
    with open(a.out, "w", newline="") as fh:
        fh.write(text)
    print(f"{len(text.splitlines()) - 1} points in {time.perf_counter() - t0:.1f}s -> {a.out}")
    for b, best, at, ber0 in landmarks(text):
        mid = (at[0] + at[-1]) / 2
        print(f"{b:3d} bits: min ber {best:.3g} over {at[0]:g}..{at[-1]:g} dB (mid {mid:g}), ber at {grid[0]} dB {ber0:.3g}")
    print(f"overflow events: {tally.overflows}")


if __name__ == "__main__":
    sys.exit(main())
