"""Truncated limsup-set machinery: psi-approximability in windows, resonant
neighborhoods, ubiquity parameters and coverage, Monte Carlo measure
estimation for the well- and badly-approximable target sets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath

from .errors import BudgetExceeded, InvalidWindow, PrecisionExhausted
from .fastpath import Line1D, UnionIndex1D
from .lattice import (
    DEFAULT_BUDGET,
    ApproxMatrix,
    IntVec,
    ReturnSequence,
    iter_shell,
    shell_size,
)
from .numeric import (
    Comparable,
    ExactReal,
    Quadratic,
    Radical,
    RatInterval,
    _nth_root_lower,
    _nth_root_upper,
    compare,
    dec_str,
    dist_to_int,
    dist_to_int_vec,
    ex_pow,
    floor_exact,
    format_exact,
    lt,
    sign,
)
from .sampling import binomial_ci, parallel_map, sample_point, grid_points

__all__ = [
    "ApproxFunction",
    "CoverageEntry",
    "MeasureEstimate",
    "PowerLog",
    "TablePsi",
    "UbiquityParams",
    "Window",
    "check_u_regular",
    "coverage",
    "delta_membership",
    "diameter_sum",
    "measure_Bad",
    "measure_W",
    "psi_witness",
    "ubiquity_params",
]


# ---------------------------------------------------------------------------
# approximation functions
# ---------------------------------------------------------------------------


class ApproxFunction:
    """Positive nonincreasing psi on [1, oo)."""

    def value_bounds(self, q: int, bits: int = 80) -> tuple[Fraction, Fraction]:
        raise NotImplementedError

    def lt_value(self, d: Comparable, q: int, strict: bool = True) -> bool:
        """Certified d < psi(q) (or <= with strict=False)."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_json(obj: dict) -> "ApproxFunction":
        if obj.get("kind") == "table":
            return TablePsi([(int(q), Fraction(v)) for q, v in obj["points"]])
        return PowerLog(
            Fraction(obj.get("c", 1)),
            Fraction(obj.get("a", 0)),
            Fraction(obj.get("beta", 0)),
        )


@dataclass(frozen=True)
class PowerLog(ApproxFunction):
    """psi(q) = c * q^-a * max(ln q, 1)^-beta with rational c > 0, a >= 0."""

    c: Fraction
    a: Fraction
    beta: Fraction

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c > 0 required")
        if self.a < 0 or (self.a == 0 and self.beta < 0):
            raise ValueError("psi must be nonincreasing: a > 0, or a = 0, beta >= 0")

    def value_bounds(self, q: int, bits: int = 80) -> tuple[Fraction, Fraction]:
        if q < 1:
            raise ValueError("q >= 1 required")
        p, r = self.a.numerator, self.a.denominator
        base = Fraction(1, q**p)
        if r == 1:
            lo = hi = self.c * base
        else:
            lo = self.c * _nth_root_lower(base, r, bits)
            hi = self.c * _nth_root_upper(base, r, bits)
        if self.beta != 0:
            llo, lhi = _log_bounds(q, bits)
            flo = _rat_pow_bounds(llo, lhi, -self.beta, bits)
            lo, hi = lo * flo[0], hi * flo[1]
        return lo, hi

    def lt_value(self, d: Comparable, q: int, strict: bool = True) -> bool:
        if self.beta == 0:
            # d < c q^(-p/r)  <=>  d^r q^p < c^r, exact in the field
            p, r = self.a.numerator, self.a.denominator
            lhs = ex_pow(d, r) * Fraction(q**p)
            rhs = self.c**r
            c = compare(lhs, rhs)
            if not c.decided:
                raise PrecisionExhausted("psi comparison undecided")
            if strict:
                return c.kind == "less"
            return c.kind != "greater"
        for bits in (80, 160, 320):
            lo, hi = self.value_bounds(q, bits)
            c = compare(d, RatInterval(lo, hi))
            if c.decided:
                if strict:
                    return c.kind == "less"
                return c.kind != "greater"
        raise PrecisionExhausted(f"psi({q}) enclosure too wide for comparison")

    def to_json(self) -> dict:
        return {"kind": "powerlog", "c": str(self.c), "a": str(self.a), "beta": str(self.beta)}


def _log_bounds(q: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational bounds on max(ln q, 1)."""
    if q <= 2:  # ln 2 < 1, so the max clamps
        return Fraction(1), Fraction(1)
    with mpmath.workprec(bits + 16):
        sgn, man, exp, _ = mpmath.log(q)._mpf_
    f = Fraction(-man if sgn else man)
    f = f * (1 << exp) if exp >= 0 else f / (1 << -exp)
    pad = Fraction(1, 1 << bits)
    one = Fraction(1)
    return max(f - pad, one), max(f + pad, one)


def _rat_pow_bounds(lo: Fraction, hi: Fraction, e: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Bounds on x^e over x in [lo, hi] with lo >= 1 and rational e."""
    p, r = e.numerator, e.denominator
    vals = []
    for x in (lo, hi):
        xp = x**abs(p)
        root_lo = _nth_root_lower(xp, r, bits)
        root_hi = _nth_root_upper(xp, r, bits)
        if p >= 0:
            vals.append((root_lo, root_hi))
        else:
            vals.append((1 / root_hi, 1 / root_lo))
    los = [v[0] for v in vals]
    his = [v[1] for v in vals]
    return min(los), max(his)


@dataclass(frozen=True)
class TablePsi(ApproxFunction):
    """Step-interpolated table (q_j, value_j), nonincreasing."""

    points: tuple[tuple[int, Fraction], ...]

    def __init__(self, points: Sequence[tuple[int, Fraction]]):
        pts = tuple(sorted((int(q), Fraction(v)) for q, v in points))
        if not pts or pts[0][0] > 1:
            raise ValueError("table must start at q <= 1")
        if any(v <= 0 for _, v in pts):
            raise ValueError("table values must be positive")
        if any(pts[i + 1][1] > pts[i][1] for i in range(len(pts) - 1)):
            raise ValueError("table values must be nonincreasing")
        object.__setattr__(self, "points", pts)

    def value_at(self, q: int) -> Fraction:
        val = self.points[0][1]
        for qq, v in self.points:
            if qq <= q:
                val = v
            else:
                break
        return val

    def value_bounds(self, q: int, bits: int = 80) -> tuple[Fraction, Fraction]:
        v = self.value_at(q)
        return v, v

    def lt_value(self, d: Comparable, q: int, strict: bool = True) -> bool:
        v = self.value_at(q)
        c = compare(d, v)
        if not c.decided:
            raise PrecisionExhausted("table psi comparison undecided")
        if strict:
            return c.kind == "less"
        return c.kind != "greater"

    def to_json(self) -> dict:
        return {"kind": "table", "points": [[q, str(v)] for q, v in self.points]}


# ---------------------------------------------------------------------------
# windows and witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """The annulus l < ||q|| <= u."""

    l: int
    u: int

    def __post_init__(self):
        if self.l < 0 or self.u <= self.l:
            raise InvalidWindow(f"need 0 <= l < u, got ({self.l}, {self.u})")

    @property
    def shells(self) -> range:
        return range(self.l + 1, self.u + 1)


def _window_budget(n: int, w: Window, budget: int):
    total = sum(shell_size(n, s) for s in w.shells)
    if total > budget:
        raise BudgetExceeded(f"window holds {total} points, budget {budget}")


def psi_witness(
    A: ApproxMatrix,
    b: Sequence[Fraction],
    psi: ApproxFunction,
    w: Window,
    budget: int = DEFAULT_BUDGET,
) -> Optional[IntVec]:
    """First q (shell-then-lex) in the annulus with ||Aq - b||_Z < psi(||q||)."""
    _window_budget(A.n, w, budget)
    b = tuple(Fraction(x) for x in b)
    for s in w.shells:
        for q in iter_shell(A.n, s):
            diff = [v - t for v, t in zip(A.apply(q), b)]
            d = dist_to_int_vec(diff)
            if psi.lt_value(d, s):
                return IntVec(q)
    return None


def delta_membership(
    A: ApproxMatrix,
    x: Sequence[Fraction],
    rho_val: Comparable,
    w: Window,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """x within distance rho_val of some resonant point Aq, q in the annulus."""
    if isinstance(rho_val, Radical):
        c = rho_val.compare(Fraction(1, 2))
    else:
        c = compare(rho_val, Fraction(1, 2))
    if c.decided and c.kind != "less":
        return True  # balls of radius >= 1/2 cover the torus
    _window_budget(A.n, w, budget)
    x = tuple(Fraction(t) for t in x)
    for s in w.shells:
        for q in iter_shell(A.n, s):
            diff = [v - t for v, t in zip(A.apply(q), x)]
            d = dist_to_int_vec(diff)
            if isinstance(rho_val, Radical):
                cc = rho_val.compare(d)
                if not cc.decided:
                    raise PrecisionExhausted("membership radius comparison undecided")
                if cc.kind == "greater":
                    return True
            elif lt(d, rho_val):
                return True
    return False


# ---------------------------------------------------------------------------
# measure estimation
# ---------------------------------------------------------------------------


@dataclass
class MeasureEstimate:
    fraction: Fraction
    samples: int
    ci_low: Fraction
    ci_high: Fraction
    seed: int
    window: Window

    def to_json(self) -> dict:
        return {
            "fraction": str(self.fraction),
            "fraction_dec": dec_str(self.fraction),
            "samples": self.samples,
            "ci_low": dec_str(self.ci_low),
            "ci_high": dec_str(self.ci_high),
            "seed": self.seed,
            "window": {"l": self.window.l, "u": self.window.u},
        }


def _witness_tester(
    A: ApproxMatrix, psi: ApproxFunction, w: Window, budget: int
) -> Callable[[tuple[Fraction, ...]], bool]:
    """Per-target strict-witness predicate; indexed fast path in 1D."""
    if (A.m, A.n) == (1, 1) and not isinstance(A.rows[0][0], Fraction):
        alpha = A.rows[0][0]
        line = Line1D(alpha)

        def exact_check(b: Fraction) -> bool:
            for s in w.shells:
                for q in (-s, s):
                    val = A.apply((q,))[0]
                    d = dist_to_int(val - b)
                    if psi.lt_value(d, s):
                        return True
            return False

        bounds = [(s, psi.value_bounds(s)) for s in w.shells]
        if all(lo == hi for _, (lo, hi) in bounds):
            index = UnionIndex1D(line, [(s, lo) for s, (lo, _) in bounds], exact_check)
            return lambda b: index.contains(b[0])
        # irrational psi values: sandwich between two indices, exact scan
        # only for points landing in the slack between them
        inner_ix = UnionIndex1D(line, [(s, lo) for s, (lo, _) in bounds], exact_check)
        outer_ix = UnionIndex1D(line, [(s, hi) for s, (_, hi) in bounds], exact_check)

        def test(b: tuple[Fraction, ...]) -> bool:
            if inner_ix.contains(b[0]):
                return True
            if not outer_ix.contains(b[0]):
                return False
            return exact_check(b[0])

        return test

    _window_budget(A.n, w, budget)

    def test(b: tuple[Fraction, ...]) -> bool:
        return psi_witness(A, b, psi, w, budget) is not None

    return test


def measure_W(
    A: ApproxMatrix,
    psi: ApproxFunction,
    w: Window,
    samples: int,
    seed: int,
    mode: str = "mc",
    budget: int = DEFAULT_BUDGET,
    threads: int | None = None,
) -> MeasureEstimate:
    """Fraction of random targets admitting a witness in the window."""
    test = _witness_tester(A, psi, w, budget)
    pts = _points(A.m, samples, seed, mode)
    hits = parallel_map(test, pts, threads)
    k = sum(hits)
    lo, hi = binomial_ci(k, samples)
    return MeasureEstimate(Fraction(k, samples), samples, lo, hi, seed, w)


def measure_Bad(
    A: ApproxMatrix,
    delta: Fraction,
    w: Window,
    samples: int,
    seed: int,
    mode: str = "mc",
    budget: int = DEFAULT_BUDGET,
    threads: int | None = None,
) -> MeasureEstimate:
    """Fraction of targets with NO witness for psi_delta(q) = delta q^(-n/m)."""
    psi = PowerLog(Fraction(delta), Fraction(A.n, A.m), Fraction(0))
    test = _witness_tester(A, psi, w, budget)
    pts = _points(A.m, samples, seed, mode)
    hits = parallel_map(test, pts, threads)
    k = samples - sum(hits)
    lo, hi = binomial_ci(k, samples)
    return MeasureEstimate(Fraction(k, samples), samples, lo, hi, seed, w)


def _points(dim: int, samples: int, seed: int, mode: str) -> list[tuple[Fraction, ...]]:
    if samples < 1:
        raise ValueError("samples >= 1 required")
    if mode == "grid":
        return grid_points(samples, dim)
    if mode != "mc":
        raise ValueError(f"unknown sampling mode {mode!r}")
    return [sample_point(seed, i, dim) for i in range(samples)]


# ---------------------------------------------------------------------------
# ubiquity parameters and coverage
# ---------------------------------------------------------------------------


@dataclass
class UbiquityLevel:
    ell: int
    u: ExactReal
    l: ExactReal
    rho_pow_m: ExactReal  # rho_i^m, exact

    def rho(self, m: int) -> Comparable:
        return self.rho_pow_m if m == 1 else Radical(self.rho_pow_m, m)


@dataclass
class UbiquityParams:
    epsilon: ExactReal
    m: int
    n: int
    c1: Fraction
    c2_pow_m: ExactReal  # c2^m = eps^m ((eps^-m + 1)/2)^(m+n), exact
    equid_constant: Fraction
    levels: list[UbiquityLevel]

    def to_json(self) -> dict:
        return {
            "epsilon": format_exact(self.epsilon),
            "m": self.m,
            "n": self.n,
            "c1": str(self.c1),
            "c2_dec": dec_str(Radical(self.c2_pow_m, self.m)),
            "equid_constant": str(self.equid_constant),
            "levels": [
                {
                    "ell": lv.ell,
                    "u_dec": dec_str(lv.u),
                    "l_dec": dec_str(lv.l),
                    "rho_dec": dec_str(Radical(lv.rho_pow_m, self.m)),
                }
                for lv in self.levels
            ],
        }


def ubiquity_params(
    ret: ReturnSequence, equid_constant: Fraction
) -> UbiquityParams:
    """Scale sequences u_i = (eps^-m + 1)/2 * 2^l_i, l_i = c1 u_i and the
    ubiquitous radius rho_i = c2 u_i^(-n/m), with c1 the largest power of 1/2
    satisfying the separation constraint (2 c2)^m C c1^n < 1/2."""
    if not ret.levels:
        raise InvalidWindow("empty return sequence")
    m, n = ret.m, ret.n
    eps = ret.epsilon
    scale = (ex_pow(eps, -m) + 1) * Fraction(1, 2)
    c2_pow_m = ex_pow(eps, m) * ex_pow(scale, m + n)
    C = Fraction(equid_constant)
    if C <= 0:
        raise ValueError("equidistribution constant must be positive")
    c1 = None
    for j in range(1, 4096):
        cand = Fraction(1, 1 << j)
        # (2 c2)^m C c1^n < 1/2  compared exactly on m-th powers of c2
        lhs = c2_pow_m * Fraction(2**m) * C * cand**n
        if lt(lhs, Fraction(1, 2)):
            c1 = cand
            break
    if c1 is None:
        raise ValueError("no admissible c1 found")
    levels = []
    for ell in ret.levels:
        u = scale * (1 << ell)
        rho_pow_m = c2_pow_m * ex_pow(u, -n)
        levels.append(UbiquityLevel(ell, u, c1 * u, rho_pow_m))
    return UbiquityParams(eps, m, n, c1, c2_pow_m, C, levels)


def check_u_regular(params: UbiquityParams, lam: Comparable | Radical) -> bool:
    """rho_{i+1} <= lam * rho_i along consecutive levels, on m-th powers."""
    if len(params.levels) < 2:
        raise InvalidWindow("need at least two levels")
    m = params.m
    lam_pow_m = lam.radicand if isinstance(lam, Radical) and lam.root == m else ex_pow(lam, m)
    for a, b in zip(params.levels, params.levels[1:]):
        c = compare(b.rho_pow_m, lam_pow_m * a.rho_pow_m)
        if not c.decided:
            raise PrecisionExhausted("u-regularity comparison undecided")
        if c.kind == "greater":
            return False
    return True


@dataclass
class CoverageEntry:
    ell: int
    l_dec: str
    u_dec: str
    rho_dec: str
    estimate: MeasureEstimate

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "l": self.l_dec,
            "u": self.u_dec,
            "rho": self.rho_dec,
            "covered_fraction": self.estimate.to_json(),
        }


def coverage(
    A: ApproxMatrix,
    params: UbiquityParams,
    ball: tuple[Sequence[Fraction], Fraction],
    level_index: int,
    samples: int,
    seed: int,
    budget: int = DEFAULT_BUDGET,
    threads: int | None = None,
) -> CoverageEntry:
    """Monte Carlo estimate of |B cap Delta(rho, i)| / |B| at one level."""
    lv = params.levels[level_index]
    m = params.m
    center, radius = ball
    center = tuple(Fraction(x) for x in center)
    radius = Fraction(radius)
    if radius <= 0 or radius > Fraction(1, 2):
        raise ValueError("ball radius must be in (0, 1/2]")
    l_int = floor_exact(lv.l)
    u_int = floor_exact(lv.u)
    if l_int >= u_int:
        raise InvalidWindow(f"annulus ({l_int}, {u_int}] is empty")
    w = Window(l_int, u_int)
    rho = lv.rho(m)

    def sample(i: int) -> tuple[Fraction, ...]:
        pt = sample_point(seed, i, m)
        return tuple(c + radius * (2 * t - 1) for c, t in zip(center, pt))

    rc = rho.compare(Fraction(1, 2)) if isinstance(rho, Radical) else compare(rho, Fraction(1, 2))
    if rc.decided and rc.kind != "less":
        est = MeasureEstimate(Fraction(1), samples, Fraction(1), Fraction(1), seed, w)
        return CoverageEntry(lv.ell, dec_str(lv.l), dec_str(lv.u), dec_str(Radical(lv.rho_pow_m, m)), est)

    if (A.m, A.n) == (1, 1) and not isinstance(A.rows[0][0], Fraction):
        line = Line1D(A.rows[0][0])
        if isinstance(rho, Radical):
            r_lo, r_hi = rho.enclose(line.shift)
        else:
            r_lo = r_hi = rho

        def exact_check(b: Fraction) -> bool:
            return delta_membership(A, (b,), rho, w, budget)

        if r_lo == r_hi:
            index = UnionIndex1D(line, [(s, r_lo) for s in w.shells], exact_check)
            test = lambda b: index.contains(b[0])  # noqa: E731
        else:
            inner_ix = UnionIndex1D(line, [(s, r_lo) for s in w.shells], exact_check)
            outer_ix = UnionIndex1D(line, [(s, r_hi) for s in w.shells], exact_check)

            def test(b):
                if inner_ix.contains(b[0]):
                    return True
                if not outer_ix.contains(b[0]):
                    return False
                return exact_check(b[0])

    else:
        _window_budget(A.n, w, budget)

        def test(b):
            return delta_membership(A, b, rho, w, budget)

    pts = [sample(i) for i in range(samples)]
    hits = parallel_map(test, pts, threads)
    k = sum(hits)
    lo, hi = binomial_ci(k, samples)
    est = MeasureEstimate(Fraction(k, samples), samples, lo, hi, seed, w)
    return CoverageEntry(lv.ell, dec_str(lv.l), dec_str(lv.u), dec_str(Radical(lv.rho_pow_m, m)), est)


# ---------------------------------------------------------------------------
# Borel-Cantelli diameter sums
# ---------------------------------------------------------------------------


def diameter_sum(
    psi: ApproxFunction, w: Window, n: int, s: Fraction, bits: int = 60
) -> tuple[Fraction, Fraction]:
    """Enclosure of sum over the annulus of diam(B(Aq, psi(||q||)))^s,
    grouping the (2k+1)^n - (2k-1)^n points of each shell."""
    lo_total = Fraction(0)
    hi_total = Fraction(0)
    p, r = s.numerator, s.denominator
    for k in w.shells:
        cnt = shell_size(n, k)
        vlo, vhi = psi.value_bounds(k, bits)
        dlo, dhi = 2 * vlo, 2 * vhi
        if s == 1:
            lo_total += cnt * dlo
            hi_total += cnt * dhi
        else:
            lo_total += cnt * _nth_root_lower(dlo**p, r, bits)
            hi_total += cnt * _nth_root_upper(dhi**p, r, bits)
    return lo_total, hi_total
