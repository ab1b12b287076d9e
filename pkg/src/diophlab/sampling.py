"""Seeded, thread-count-invariant sampling and binomial confidence intervals.

Each sample index owns its own RNG substream derived from (seed, index), so
serial and parallel runs produce bit-identical results."""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Sequence, TypeVar

from .numeric import _nth_root_lower, _nth_root_upper

T = TypeVar("T")
U = TypeVar("U")

SAMPLE_DENOM_BITS = 53

_MIX1 = 0x9E3779B97F4A7C15
_MIX2 = 0xD1B54A32D192ED03
_MASK = (1 << 64) - 1


def substream(seed: int, index: int) -> random.Random:
    """Independent-looking RNG stream for one sample index."""
    key = ((seed & _MASK) * _MIX1 + (index & _MASK) * _MIX2) & _MASK
    return random.Random(key ^ (key >> 29))


def sample_point(seed: int, index: int, dim: int) -> tuple[Fraction, ...]:
    """Uniform rational point in [0,1)^dim with denominator 2^53."""
    rng = substream(seed, index)
    return tuple(
        Fraction(rng.getrandbits(SAMPLE_DENOM_BITS), 1 << SAMPLE_DENOM_BITS)
        for _ in range(dim)
    )


def grid_points(samples: int, dim: int) -> list[tuple[Fraction, ...]]:
    """Equally spaced low-discrepancy alternative to Monte Carlo sampling."""
    if dim == 1:
        return [(Fraction(2 * i + 1, 2 * samples),) for i in range(samples)]
    side = max(1, round(samples ** (1.0 / dim)))
    pts: list[tuple[Fraction, ...]] = []
    idx = [0] * dim
    while True:
        pts.append(tuple(Fraction(2 * i + 1, 2 * side) for i in idx))
        for j in range(dim - 1, -1, -1):
            idx[j] += 1
            if idx[j] < side:
                break
            idx[j] = 0
        else:
            break
    return pts


def thread_count(default: int = 1) -> int:
    """Worker count from DIOPHLAB_THREADS (the only env knob)."""
    try:
        return max(1, int(os.environ.get("DIOPHLAB_THREADS", default)))
    except ValueError:
        return default


def parallel_map(fn: Callable[[T], U], items: Sequence[T], threads: int | None = None) -> list[U]:
    """Order-preserving map; output is independent of the thread count."""
    if threads is None:
        threads = thread_count()
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def binomial_ci(successes: int, samples: int, z: Fraction = Fraction(196, 100)) -> tuple[Fraction, Fraction]:
    """Wilson 95% interval with outward-rounded rational square roots."""
    if samples <= 0:
        raise ValueError("samples must be positive")
    n = Fraction(samples)
    p = Fraction(successes, samples)
    z2 = z * z
    center = p + z2 / (2 * n)
    rad2 = p * (1 - p) / n + z2 / (4 * n * n)
    rad_lo = _nth_root_lower(rad2, 2, 64)
    rad_hi = _nth_root_upper(rad2, 2, 64)
    denom = 1 + z2 / n
    lo = (center - z * rad_hi) / denom
    hi = (center + z * rad_hi) / denom
    lo = max(Fraction(0), lo)
    hi = min(Fraction(1), hi)
    return lo, hi
