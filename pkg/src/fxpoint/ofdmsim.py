"""64-QAM OFDM through a fixed-point radix-4 IFFT modulator.

Only the modulator is fixed point. The receiver is an ideal floating FFT with
genie gain knowledge, so every bit error comes from quantization and from
internal wrap-around in the IFFT. Sweeping the backoff (full scale over the
frequency-domain RMS, in dB) for several word widths gives the familiar
two-regime curve: overflow errors at small backoff, quantization noise at
large backoff.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from . import fxcomplex, fxcore, fxfft, fxtally
from .errors import InsufficientBits
from .fxfft import BatchIfftResult, IfftResult, ScalingPolicy
from .fxtally import OpTally

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
BITS_PER_POINT = 6
QAM_NORM = math.sqrt(42.0)

# 3-bit label -> amplitude level, per-axis Gray code
GRAY_LEVELS = {0b000: -7, 0b001: -5, 0b011: -3, 0b010: -1, 0b110: 1, 0b111: 3, 0b101: 5, 0b100: 7}
_LEVEL_OF = np.array([GRAY_LEVELS[k] for k in range(8)])
_LABEL_OF_INDEX = np.array(
    [k for _, k in sorted((lvl, k) for k, lvl in GRAY_LEVELS.items())]
)  # level index (-7 -> 0, ..., 7 -> 7) -> label


# ---------------------------------------------------------------------------
# splitmix64


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def prng_next(state: int) -> tuple[int, int]:
    state = (state + GOLDEN) & MASK64
    return state, _mix(state)


def prng_words(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs ``start .. start+count-1`` of the splitmix64 stream for ``seed``.

    The state is a counter, so any window can be produced directly.
    """
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = idx * np.uint64(GOLDEN) + np.uint64(seed & MASK64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def prng_bits(seed: int, start_bit: int, count: int) -> np.ndarray:
    """Bits ``start_bit ..`` of the stream, each word consumed LSB first."""
    w0 = start_bit // 64
    w1 = -(-(start_bit + count) // 64)
    words = prng_words(seed, w0, w1 - w0)
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    # view(uint8) is little-endian byte order on every supported platform
    if words.dtype.byteorder == ">":
        raise RuntimeError("big-endian hosts are not supported")
    off = start_bit - 64 * w0
    return bits[off:off + count]


# ---------------------------------------------------------------------------
# 64-QAM


def qam64_map(b: Sequence[int]) -> complex:
    """Map 6 bits (I label then Q label, MSB first) to a unit-power point."""
    if len(b) != BITS_PER_POINT:
        raise ValueError("64-QAM needs exactly 6 bits")
    i = GRAY_LEVELS[(b[0] << 2) | (b[1] << 1) | b[2]]
    q = GRAY_LEVELS[(b[3] << 2) | (b[4] << 1) | b[5]]
    return complex(i / QAM_NORM, q / QAM_NORM)


def qam64_map_array(bits: np.ndarray) -> np.ndarray:
    """Vectorised map; ``bits`` has a trailing axis that is a multiple of 6."""
    b = np.asarray(bits, dtype=np.int64).reshape(*np.shape(bits)[:-1], -1, BITS_PER_POINT)
    li = (b[..., 0] << 2) | (b[..., 1] << 1) | b[..., 2]
    lq = (b[..., 3] << 2) | (b[..., 4] << 1) | b[..., 5]
    out = np.empty(li.shape, dtype=complex)
    out.real, out.imag = _LEVEL_OF[li] / QAM_NORM, _LEVEL_OF[lq] / QAM_NORM
    return out


def _slice_axis(v: np.ndarray) -> np.ndarray:
    # decision thresholds at the even levels; a tie goes to the higher level
    idx = np.clip(np.floor((v * QAM_NORM + 8.0) / 2.0), 0, 7).astype(np.int64)
    return _LABEL_OF_INDEX[idx]


def qam64_demap_array(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    li, lq = _slice_axis(p.real), _slice_axis(p.imag)
    out = np.stack(
        [(li >> 2) & 1, (li >> 1) & 1, li & 1, (lq >> 2) & 1, (lq >> 1) & 1, lq & 1], axis=-1
    )
    return out.reshape(*p.shape[:-1], -1) if p.ndim else out.reshape(-1)


def qam64_demap(p: complex) -> list[int]:
    return [int(v) for v in qam64_demap_array(np.array(p))]


# ---------------------------------------------------------------------------
# configuration and records


@dataclass(frozen=True)
class OfdmConfig:
    bits_n: int
    backoff_db: float
    n_symbols: int = 100
    seed: int = 0
    n_fft: int = 64
    n_used: int = 52

    def __post_init__(self):
        fxfft.log4(self.n_fft)
        if not 0 < self.n_used < self.n_fft or self.n_used % 2:
            raise ValueError("n_used must be even and within (0, n_fft)")
        if self.bits_n < 2:
            raise ValueError("bits_n must be at least 2")
        if self.n_symbols < 1:
            raise ValueError("n_symbols must be positive")

    @property
    def spec(self) -> fxcore.FixedSpec:
        """Modulator word: one integer bit, ``bits_n - 1`` fractional bits."""
        return fxcore.make_spec(1, self.bits_n - 1)

    @property
    def gain(self) -> float:
        return math.ldexp(1.0, self.bits_n) * 10.0 ** (-self.backoff_db / 20.0)

    @property
    def bits_per_symbol(self) -> int:
        return self.n_used * BITS_PER_POINT


@dataclass(frozen=True)
class SweepRecord:
    bits_n: int
    backoff_db: float
    n_symbols: int
    total_bits: int
    bit_errors: int
    ber: float
    overflows: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


def used_carriers(n_fft: int, n_used: int) -> np.ndarray:
    """Carriers -n_used/2..-1, 1..n_used/2 as FFT bin indices, in that order."""
    half = n_used // 2
    freqs = list(range(-half, 0)) + list(range(1, half + 1))
    return np.array([f % n_fft for f in freqs])


# ---------------------------------------------------------------------------
# modulator / demodulator


def build_frames(bits: np.ndarray, cfg: OfdmConfig) -> np.ndarray:
    """Frames for every row of ``bits`` (shape ``(symbols, >= bits_per_symbol)``)."""
    bits = np.atleast_2d(np.asarray(bits))
    if bits.shape[-1] < cfg.bits_per_symbol:
        raise InsufficientBits(
            f"{bits.shape[-1]} bits given, {cfg.bits_per_symbol} needed per symbol"
        )
    pts = qam64_map_array(bits[:, : cfg.bits_per_symbol])
    frames = np.zeros((bits.shape[0], cfg.n_fft), dtype=complex)
    frames[:, used_carriers(cfg.n_fft, cfg.n_used)] = pts * cfg.gain
    return frames


def build_frame(bits: Sequence[int], cfg: OfdmConfig) -> np.ndarray:
    return build_frames(np.asarray(bits)[None, :], cfg)[0]


def _np_quantize(x: np.ndarray, spec: fxcore.FixedSpec) -> np.ndarray:
    # same rounding as fxcore.quantize: nearest, ties away from zero, saturate
    y = np.ldexp(x, spec.dec_bits)
    f = np.floor(y)
    frac = y - f
    f = f + ((frac > 0.5) | ((frac == 0.5) & (y > 0)))
    return np.clip(f, spec.min_stored, spec.max_stored).astype(np.int64)


def modulate_batch(frames: np.ndarray, cfg: OfdmConfig, tally: OpTally | None = None) -> BatchIfftResult:
    frames = np.atleast_2d(np.asarray(frames, dtype=complex))
    if frames.shape[-1] != cfg.n_fft:
        raise ValueError(f"frame length {frames.shape[-1]} != n_fft {cfg.n_fft}")
    if not np.all(np.isfinite(frames)):
        raise ValueError("frame contains non-finite values")
    spec = cfg.spec
    scaled = np.ldexp(frames.real, -cfg.bits_n), np.ldexp(frames.imag, -cfg.bits_n)
    re, im = _np_quantize(scaled[0], spec), _np_quantize(scaled[1], spec)
    with fxtally.counting(tally):
        fxtally.record("quantize", 2 * frames.size)
    return fxfft.ifft_radix4_batch(re, im, spec, ScalingPolicy.FIXED_WIDTH, tally)


def modulate(frame: Sequence[complex], cfg: OfdmConfig, tally: OpTally | None = None) -> IfftResult:
    """Bit-true single-frame modulator using the scalar fixed-point types."""
    frame = np.asarray(frame, dtype=complex)
    if frame.shape != (cfg.n_fft,):
        raise ValueError(f"frame length {frame.shape} != ({cfg.n_fft},)")
    spec = cfg.spec
    with fxtally.counting(tally):
        x = [
            fxcomplex.cquantize(spec, complex(math.ldexp(z.real, -cfg.bits_n), math.ldexp(z.imag, -cfg.bits_n)))
            for z in frame
        ]
    return fxfft.ifft_radix4(x, ScalingPolicy.FIXED_WIDTH, tally)


def _received_points(x: np.ndarray, cfg: OfdmConfig) -> np.ndarray:
    y = fxfft.fft_float(x)
    # ifft's 1/N and fft's missing 1/N cancel; undo the modulator's input gain
    return y[..., used_carriers(cfg.n_fft, cfg.n_used)] / (cfg.gain / math.ldexp(1.0, cfg.bits_n))


def demodulate_batch(x: np.ndarray, cfg: OfdmConfig) -> np.ndarray:
    return qam64_demap_array(_received_points(np.asarray(x, dtype=complex), cfg))


def demodulate_ideal(x, cfg: OfdmConfig) -> np.ndarray:
    if isinstance(x, BatchIfftResult):
        x = x.to_complex()
    elif isinstance(x, IfftResult):
        x = x.to_complex()
    else:
        x = np.array([complex(v) for v in x])
    if x.shape[-1] != cfg.n_fft:
        raise ValueError("wrong frame length")
    return demodulate_batch(x, cfg)


# ---------------------------------------------------------------------------
# experiment


CHUNK_SYMBOLS = 512


def run_point(cfg: OfdmConfig, tally: OpTally | None = None) -> SweepRecord:
    errors = 0
    overflows = 0
    per = cfg.bits_per_symbol
    for s0 in range(0, cfg.n_symbols, CHUNK_SYMBOLS):
        s1 = min(s0 + CHUNK_SYMBOLS, cfg.n_symbols)
        bits = prng_bits(cfg.seed, s0 * per, (s1 - s0) * per).reshape(s1 - s0, per)
        out = modulate_batch(build_frames(bits, cfg), cfg, tally)
        overflows += out.overflows
        rx = demodulate_batch(out.to_complex(), cfg)
        errors += int(np.count_nonzero(rx != bits))
    total = cfg.n_symbols * per
    return SweepRecord(cfg.bits_n, cfg.backoff_db, cfg.n_symbols, total, errors, errors / total, overflows)


def point_seed(seed: int, index: int) -> int:
    return (seed ^ prng_next(index)[1]) & MASK64


def sweep_configs(
    bits_list: Iterable[int], backoff_list: Iterable[float], n_symbols: int, seed: int
) -> list[OfdmConfig]:
    bits_list, backoff_list = list(bits_list), list(backoff_list)
    if not bits_list or not backoff_list:
        raise ValueError("empty sweep grid")
    cfgs = []
    for i, b in enumerate(bits_list):
        for j, bo in enumerate(backoff_list):
            idx = i * len(backoff_list) + j
            cfgs.append(OfdmConfig(b, bo, n_symbols, point_seed(seed, idx)))
    return cfgs


def _run_untallied(cfg: OfdmConfig) -> tuple[SweepRecord, OpTally]:
    t = OpTally()
    return run_point(cfg, t), t


def sweep(
    bits_list: Iterable[int],
    backoff_list: Iterable[float],
    n_symbols: int,
    seed: int,
    tally: OpTally | None = None,
    jobs: int = 1,
) -> list[SweepRecord]:
    """``run_point`` over the grid, bits outer and backoff inner.

    Each point gets its own derived seed, so points are independent and may
    run in worker processes; results come back in grid order.
    """
    cfgs = sweep_configs(bits_list, backoff_list, n_symbols, seed)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_run_untallied, cfgs))
    else:
        results = [_run_untallied(c) for c in cfgs]
    if tally is not None and tally.enabled:
        merged = tally
        for _, t in results:
            merged = merged.merge(t)
        tally.counts.update(merged.counts)
        tally.overflows = merged.overflows
    return [r for r, _ in results]
