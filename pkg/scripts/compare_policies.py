"""Error of each scaling policy against the float transform.

Inputs fill half the range of a (1, w-1) word; the printed figure is the
output signal-to-error ratio in dB after undoing each policy's output scale.

    python3 scripts/compare_policies.py --n 64 --trials 200
"""

import argparse

import numpy as np

from fxpoint.fxcore import make_spec
from fxpoint.fxfft import ScalingPolicy, ifft_float, ifft_radix4_batch


def measure(n, trials, width, policy, rng, amplitude):
    spec = make_spec(1, width - 1)
    scale = 2.0**spec.dec_bits
    X = (rng.uniform(-1, 1, (trials, n)) + 1j * rng.uniform(-1, 1, (trials, n))) * amplitude
    re = np.floor(X.real * scale).astype(np.int64)
    im = np.floor(X.imag * scale).astype(np.int64)
    out = ifft_radix4_batch(re, im, spec, policy)
    ref = ifft_float((re + 1j * im) / scale) * out.scale
    err = out.to_complex() - ref
    snr = 10 * np.log10(np.mean(np.abs(ref) ** 2) / max(np.mean(np.abs(err) ** 2), 1e-300))
    return snr, out.overflows, tuple(out.spec)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--amplitude", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=7)
    a = p.parse_args(argv)
    print(f"{'width':>5} {'policy':>13} {'snr_db':>8} {'overflows':>9}  out spec")
    for width in (8, 12, 16, 20):
        for policy in ScalingPolicy:
            rng = np.random.default_rng(a.seed)
            try:
                snr, ov, spec = measure(a.n, a.trials, width, policy, rng, a.amplitude)
            except ValueError as exc:
                print(f"{width:5d} {policy.name:>13}  skipped: {exc}")
                continue
            print(f"{width:5d} {policy.name:>13} {snr:8.1f} {ov:9d}  {spec}")


if __name__ == "__main__":
    main()
