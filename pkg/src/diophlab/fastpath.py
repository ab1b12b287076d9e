"""Scaled-integer kernels for 1D torus membership at large horizons.

Centers q*alpha mod 1 are tracked as integers at a fixed binary scale with a
certified accumulated-error margin.  Every decision is either made with the
margin strictly cleared or handed to the exact arithmetic fallback, so the
fast path can never flip a verdict."""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .numeric import enclose

SHIFT = 96
MOD = 1 << SHIFT


def scale_fraction(x: Fraction, shift: int = SHIFT) -> int:
    """floor(x * 2^shift); exact when the denominator is a power of two."""
    return (x.numerator << shift) // x.denominator


class Line1D:
    """Integer model of q |-> q*alpha mod 1 with certified error bounds."""

    def __init__(self, alpha, shift: int = SHIFT):
        self.shift = shift
        self.mod = 1 << shift
        lo, hi = enclose(alpha, shift + 8)
        self.a_lo = scale_fraction(lo, shift)
        # per-step center error in scaled units
        self.unit_err = max(1, -(-(hi - lo).numerator * self.mod // (hi - lo).denominator) + 1) if hi != lo else 1

    def center(self, q: int) -> tuple[int, int]:
        """(scaled center of q*alpha mod 1, error bound), q > 0."""
        return (q * self.a_lo) % self.mod, q * self.unit_err

    def dist_bounds(self, q: int, b_scaled: int, b_err: int = 0) -> tuple[int, int]:
        """Scaled bounds on ||q*alpha - b||_Z; q may be negative."""
        c, err = self.center(abs(q))
        if q < 0:
            c = (-c) % self.mod
        v = (c - b_scaled) % self.mod
        d = min(v, self.mod - v)
        tot = err + b_err
        return max(0, d - tot), min(self.mod >> 1, d + tot)


def merge_intervals(raw: Iterable[tuple[int, int]], mod: int) -> list[tuple[int, int]]:
    """Merge possibly-wrapping integer intervals into disjoint sorted spans
    within [0, mod)."""
    parts: list[tuple[int, int]] = []
    for s, e in raw:
        length = e - s
        if length <= 0:
            continue
        if length >= mod:
            return [(0, mod)]
        s %= mod
        e = s + length
        if e <= mod:
            parts.append((s, e))
        else:
            parts.append((s, mod))
            parts.append((0, e - mod))
    parts.sort()
    merged: list[tuple[int, int]] = []
    for s, e in parts:
        if merged and s <= merged[-1][1]:
            if e > merged[-1][1]:
                merged[-1] = (merged[-1][0], e)
        else:
            merged.append((s, e))
    return merged


def _covers(spans: Sequence[tuple[int, int]], x: int) -> bool:
    i = bisect_right(spans, (x, float("inf"))) - 1
    return i >= 0 and spans[i][0] <= x < spans[i][1]


class UnionIndex1D:
    """Certified membership in U_q B(q*alpha, r_q) mod 1 over a fixed q set.

    Queries are decided by an inner (definitely covered) and an outer
    (possibly covered) merged union; the sliver between them goes to the
    exact checker supplied by the caller.
    """

    def __init__(
        self,
        line: Line1D,
        q_radii: Sequence[tuple[int, Fraction]],
        exact_check: Callable[[Fraction], bool],
    ):
        self.line = line
        self.exact_check = exact_check
        mod = line.mod
        outer: list[tuple[int, int]] = []
        inner: list[tuple[int, int]] = []
        for q, r in q_radii:
            if r <= 0:
                continue
            r_lo = scale_fraction(r, line.shift)
            r_hi = r_lo + 1
            c, err = line.center(q)
            # the true center lies within err of c (and of mod - c for -q)
            for cc in (c, (-c) % mod):
                outer.append((cc - err - r_hi, cc + err + r_hi + 1))
                inner.append((cc + err - r_lo + 1, cc - err + r_lo))
        self.outer = merge_intervals(outer, mod)
        self.inner = merge_intervals(inner, mod)

    def contains(self, b: Fraction) -> bool:
        """Strict membership ||q*alpha - b||_Z < r_q for some q in the set."""
        mod = self.line.mod
        num = b.numerator << self.line.shift
        x = (num // b.denominator) % mod
        if num % b.denominator == 0:
            if _covers(self.inner, x):
                return True
            if not _covers(self.outer, x):
                return False
        else:
            # true point lies strictly between grid cells x and x+1
            x2 = (x + 1) % mod
            if _covers(self.inner, x) and _covers(self.inner, x2):
                return True
            if not _covers(self.outer, x) and not _covers(self.outer, x2):
                return False
        return self.exact_check(b)
