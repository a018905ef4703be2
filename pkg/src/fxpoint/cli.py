"""Command-line front end.

Subcommands::

    fxpoint selftest
    fxpoint ifft-check --n 64 --trials 100 --seed 1
    fxpoint ofdm-sweep --bits 9,11,13 --backoff-start 0 --backoff-stop 24 \\
        --backoff-step 1 --symbols 700 --seed 1 --out sweep.csv

Exit status: 0 success, 1 check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from decimal import Decimal, InvalidOperation

import numpy as np

from . import fxcore, fxfft, ofdmsim, selftest
from .errors import SizeNotPowerOfFour
from .fxtally import OpTally

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CSV_HEADER = ["bits", "backoff_db", "symbols", "total_bits", "bit_errors", "ber"]
FLOAT_TOL = 1e-9
FIXED_TOL = 2.0**-20


def cmd_selftest(args) -> int:
    ok = selftest.run_all()
    print("all cases passed" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_FAIL


def ifft_check(n: int, trials: int, seed: int) -> dict:
    """Max errors of the float transform against the direct DFT, of the
    forward/inverse round trip, and of the fixed (1, 28) transform against
    the float one."""
    rng = np.random.default_rng(seed)
    spec = fxcore.make_spec(1, 28)
    X = rng.normal(size=(trials, n)) + 1j * rng.normal(size=(trials, n))
    x = fxfft.ifft_float(X)
    err_dft = float(np.abs(x - fxfft.dft_reference(X)).max())
    err_rt = float(np.abs(fxfft.fft_float(x) - X).max())
    # inputs at most 2**-3 of full scale (|component| <= 0.25 for is = 1)
    Xs = (rng.uniform(-1, 1, size=(trials, n)) + 1j * rng.uniform(-1, 1, size=(trials, n))) * 0.25
    re = ofdmsim._np_quantize(Xs.real, spec)
    im = ofdmsim._np_quantize(Xs.imag, spec)
    out = fxfft.ifft_radix4_batch(re, im, spec, fxfft.ScalingPolicy.FIXED_WIDTH)
    err_fixed = float(np.abs(out.to_complex() - fxfft.ifft_float(Xs)).max())
    return {
        "float_vs_dft": err_dft,
        "roundtrip": err_rt,
        "fixed_vs_float": err_fixed,
        "overflows": out.overflows,
    }


def cmd_ifft_check(args) -> int:
    try:
        fxfft.log4(args.n)
    except SizeNotPowerOfFour as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    r = ifft_check(args.n, args.trials, args.seed)
    checks = [
        ("float_vs_dft", r["float_vs_dft"], FLOAT_TOL),
        ("roundtrip", r["roundtrip"], FLOAT_TOL),
        ("fixed_vs_float", r["fixed_vs_float"], FIXED_TOL),
    ]
    ok = True
    for name, err, tol in checks:
        passed = err < tol
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: max error {err:.3e} (tolerance {tol:.3e})")
    print(f"fixed overflows: {r['overflows']}")
    return EXIT_OK if ok else EXIT_FAIL


def backoff_grid(start: str, stop: str, step: str) -> list[Decimal]:
    a, b, s = Decimal(start), Decimal(stop), Decimal(step)
    if s <= 0:
        raise ValueError("backoff step must be positive")
    if b < a:
        raise ValueError("backoff stop is below start")
    out, i = [], 0
    while a + i * s <= b:
        out.append(a + i * s)
        i += 1
    return out


def format_backoff(d: Decimal) -> str:
    if d == d.to_integral_value():
        return str(int(d))
    return format(d.normalize(), "f")


def format_ber(ber: float) -> str:
    return f"{ber:.6g}"


def write_csv(records, backoffs_text: dict, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(
            [r.bits_n, backoffs_text[r.backoff_db], r.n_symbols, r.total_bits, r.bit_errors, format_ber(r.ber)]
        )


def sweep_csv(bits: list[int], grid: list[Decimal], symbols: int, seed: int, jobs: int = 1, tally=None) -> str:
    """Run the sweep and return the CSV text."""
    text = {float(d): format_backoff(d) for d in grid}
    records = ofdmsim.sweep(bits, [float(d) for d in grid], symbols, seed, tally=tally, jobs=jobs)
    buf = io.StringIO()
    write_csv(records, text, buf)
    return buf.getvalue()


def _parse_bits(s: str) -> list[int]:
    try:
        bits = [int(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid bit list {s!r}")
    if not bits or any(b < 2 for b in bits):
        raise argparse.ArgumentTypeError("bits must be a comma list of integers >= 2")
    return bits


def _decimal(s: str) -> str:
    try:
        Decimal(s)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}")
    return s


def cmd_ofdm_sweep(args) -> int:
    try:
        grid = backoff_grid(args.backoff_start, args.backoff_stop, args.backoff_step)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.symbols < 1:
        print("error: --symbols must be positive", file=sys.stderr)
        return EXIT_USAGE
    tally = OpTally()
    text = sweep_csv(args.bits, grid, args.symbols, args.seed, args.jobs, tally)
    summary = sys.stdout
    if args.out == "-":
        sys.stdout.write(text)
        summary = sys.stderr
    else:
        try:
            with open(args.out, "w", newline="", encoding="ascii") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"wrote {len(text.splitlines()) - 1} rows to {args.out}", file=summary)
    summary.write(tally.format())
    summary.write(f"overflows {tally.overflows}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fxpoint", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("selftest", help="run the golden session examples")
    s.set_defaults(func=cmd_selftest)

    s = sub.add_parser("ifft-check", help="verify the radix-4 IFFT against oracles")
    s.add_argument("--n", type=int, default=64)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=1)
    s.set_defaults(func=cmd_ifft_check)

    s = sub.add_parser("ofdm-sweep", help="BER versus backoff sweep, written as CSV")
    s.add_argument("--bits", type=_parse_bits, required=True, help="comma list, e.g. 9,11,13")
    s.add_argument("--backoff-start", type=_decimal, default="0")
    s.add_argument("--backoff-stop", type=_decimal, default="24")
    s.add_argument("--backoff-step", type=_decimal, default="1")
    s.add_argument("--symbols", type=int, default=700)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.set_defaults(func=cmd_ofdm_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
