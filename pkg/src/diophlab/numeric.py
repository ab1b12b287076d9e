"""Exact real scalars: rationals, quadratic irrationals and CF-defined reals.

Every strict inequality downstream is decided on these values either exactly
(rational / quadratic sign tests) or through certified convergent enclosures
(CF-defined reals).  Values are immutable; all functions are pure.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence, Union

from .errors import PrecisionExhausted, UnsupportedEntry

__all__ = [
    "CFReal",
    "ExactReal",
    "Ordering",
    "Quadratic",
    "Radical",
    "RatInterval",
    "compare",
    "dec_str",
    "dist_to_int",
    "dist_to_int_vec",
    "enclose",
    "ex_abs",
    "ex_pow",
    "floor_exact",
    "format_exact",
    "nearest_int",
    "parse_exact",
    "quadratic",
    "sign",
    "sup_norm",
]

DEFAULT_CF_BUDGET = 64


class Ordering:
    """Result of a certified comparison: <, =, > or undecided-within-budget."""

    __slots__ = ("kind", "width")

    LESS: "Ordering"
    EQUAL: "Ordering"
    GREATER: "Ordering"

    def __init__(self, kind: str, width: Fraction | None = None):
        self.kind = kind
        self.width = width

    @classmethod
    def uncertain(cls, width: Fraction) -> "Ordering":
        return cls("uncertain", width)

    @property
    def decided(self) -> bool:
        return self.kind != "uncertain"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ordering) and self.kind == other.kind

    def __hash__(self) -> int:
        return hash(self.kind)

    def __repr__(self) -> str:
        if self.kind == "uncertain":
            return f"Ordering.uncertain({self.width!r})"
        return f"Ordering.{self.kind.upper()}"


Ordering.LESS = Ordering("less")
Ordering.EQUAL = Ordering("equal")
Ordering.GREATER = Ordering("greater")


def _squarefree(d: int) -> bool:
    if d < 2:
        return False
    p = 2
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 1
    return True


class Quadratic:
    """a + b*sqrt(d) with rational a, b != 0 and squarefree d >= 2."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Fraction, b: Fraction, d: int):
        if b == 0:
            raise ValueError("use quadratic() which normalizes b == 0 to Fraction")
        if not _squarefree(d):
            raise ValueError(f"radicand {d} is not squarefree >= 2")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def _coerce(self, other) -> "Quadratic | None":
        if isinstance(other, Quadratic):
            if other.d != self.d:
                raise UnsupportedEntry(
                    f"mixing radicands sqrt({self.d}) and sqrt({other.d})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return None  # rational operand, handled inline
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return quadratic(self.a + other, self.b, self.d)
        return quadratic(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return Quadratic(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Quadratic) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            r = Fraction(other)
            if r == 0:
                return Fraction(0)
            return quadratic(self.a * r, self.b * r, self.d)
        return quadratic(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "ExactReal":
        # (a + b sqrt d)^-1 = (a - b sqrt d) / (a^2 - b^2 d); denominator is
        # nonzero since sqrt(d) is irrational.
        nrm = self.a * self.a - self.b * self.b * self.d
        return quadratic(self.a / nrm, -self.b / nrm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return quadratic(self.a / Fraction(other), self.b / Fraction(other), self.d)
        return self * o.inverse()

    def __rtruediv__(self, other):
        inv = self.inverse()
        return inv * other

    def __pow__(self, k: int):
        if k < 0:
            base = self.inverse()
            k = -k
        else:
            base = self
        out: ExactReal = Fraction(1)
        while k:
            if k & 1:
                out = out * base if isinstance(out, Quadratic) else base * out
            k >>= 1
            if k:
                base = base * base  # type: ignore[operator]
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Quadratic):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return False  # b != 0 makes it irrational
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.d))

    def __repr__(self) -> str:
        return f"Quadratic({self.a!r}, {self.b!r}, {self.d})"

    def __float__(self) -> float:
        lo, hi = enclose(self, 80)
        return float((lo + hi) / 2)


def quadratic(a, b, d: int) -> "ExactReal":
    """Build a + b*sqrt(d), collapsing to Fraction when b == 0."""
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        return a
    return Quadratic(a, b, d)


class CFReal:
    """A real specified by finitely many continued-fraction partial quotients.

    The value is only known to lie strictly between the last two convergents;
    all derived quantities carry that enclosure.
    """

    __slots__ = ("pq", "precision_budget", "_conv")

    def __init__(self, pq: Sequence[int], precision_budget: int = DEFAULT_CF_BUDGET):
        pq = tuple(int(a) for a in pq)
        if not pq:
            raise ValueError("need at least a0")
        if any(a < 1 for a in pq[1:]):
            raise ValueError("partial quotients a_k must be >= 1 for k >= 1")
        if precision_budget < 1:
            raise ValueError("precision budget must be positive")
        self.pq = pq
        self.precision_budget = precision_budget
        self._conv: list[tuple[int, int]] | None = None

    def convergents(self) -> list[tuple[int, int]]:
        """(p_k, q_k) for the partial quotients within budget."""
        if self._conv is None:
            p0, q0, p1, q1 = 1, 0, self.pq[0], 1
            out = [(p1, q1)]
            for a in self.pq[1 : self.precision_budget]:
                p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
                out.append((p1, q1))
            self._conv = out
        return self._conv

    def enclosure(self) -> tuple[Fraction, Fraction]:
        """Open interval (lo, hi) certified to contain the value."""
        conv = self.convergents()
        if len(conv) == 1:
            p, q = conv[0]
            return Fraction(p, q), Fraction(p + 1, q)
        (p0, q0), (p1, q1) = conv[-2], conv[-1]
        x, y = Fraction(p0, q0), Fraction(p1, q1)
        return (x, y) if x < y else (y, x)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CFReal):
            return self.pq == other.pq
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.pq)

    def __repr__(self) -> str:
        return f"CFReal({list(self.pq)!r})"

    def __float__(self) -> float:
        lo, hi = self.enclosure()
        return float((lo + hi) / 2)


class RatInterval:
    """Certified rational enclosure of a derived quantity (CF arithmetic)."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Fraction, hi: Fraction):
        lo, hi = Fraction(lo), Fraction(hi)
        if hi < lo:
            raise ValueError("empty interval")
        self.lo = lo
        self.hi = hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __add__(self, other):
        if isinstance(other, RatInterval):
            return RatInterval(self.lo + other.lo, self.hi + other.hi)
        if isinstance(other, (int, Fraction)):
            return RatInterval(self.lo + other, self.hi + other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other >= 0:
                return RatInterval(self.lo * other, self.hi * other)
            return RatInterval(self.hi * other, self.lo * other)
        if isinstance(other, RatInterval):
            prods = [a * b for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
            return RatInterval(min(prods), max(prods))
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"RatInterval({self.lo!r}, {self.hi!r})"

    def __float__(self) -> float:
        return float((self.lo + self.hi) / 2)


ExactReal = Union[Fraction, Quadratic, CFReal]
Comparable = Union[Fraction, Quadratic, CFReal, RatInterval, int]


# ---------------------------------------------------------------------------
# signs, comparisons, floors
# ---------------------------------------------------------------------------


def _sign_rational(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _sign_quadratic(a: Fraction, b: Fraction, d: int) -> int:
    if b == 0:
        return _sign_rational(a)
    if a == 0:
        return _sign_rational(b)
    sa, sb = _sign_rational(a), _sign_rational(b)
    if sa == sb:
        return sa
    # a and b of opposite sign: sign(a + b sqrt d) = sa * sign(a^2 - b^2 d)
    return sa * _sign_rational(a * a - b * b * d)


def sign(x: Comparable) -> int:
    """Exact sign, raising PrecisionExhausted for straddling CF enclosures."""
    if isinstance(x, int):
        return (x > 0) - (x < 0)
    if isinstance(x, Fraction):
        return _sign_rational(x)
    if isinstance(x, Quadratic):
        return _sign_quadratic(x.a, x.b, x.d)
    lo, hi = _as_interval(x)
    if lo > 0 or (lo == 0 and isinstance(x, CFReal)):
        # CF enclosures are open intervals, so lo == 0 still means positive.
        return 1
    if hi < 0 or (hi == 0 and isinstance(x, CFReal)):
        return -1
    if lo == hi == 0:
        return 0
    raise PrecisionExhausted(f"sign undecided within enclosure [{lo}, {hi}]")


def _as_interval(x: Comparable) -> tuple[Fraction, Fraction]:
    if isinstance(x, CFReal):
        return x.enclosure()
    if isinstance(x, RatInterval):
        return x.lo, x.hi
    raise TypeError(x)


def compare(x: Comparable, y: Comparable) -> Ordering:
    """Certified three-way comparison; Uncertain only with CF-backed operands."""
    fuzzy_x = isinstance(x, (CFReal, RatInterval))
    fuzzy_y = isinstance(y, (CFReal, RatInterval))
    if not fuzzy_x and not fuzzy_y:
        diff = _exact_sub(x, y)
        s = sign(diff)
        return (Ordering.LESS, Ordering.EQUAL, Ordering.GREATER)[s + 1]
    xlo, xhi = _as_interval(x) if fuzzy_x else _tight(x)
    ylo, yhi = _as_interval(y) if fuzzy_y else _tight(y)
    x_open = isinstance(x, CFReal) and len(x.pq) > 1
    y_open = isinstance(y, CFReal) and len(y.pq) > 1
    if xhi < ylo or (xhi == ylo and (x_open or y_open)):
        return Ordering.LESS
    if xlo > yhi or (xlo == yhi and (x_open or y_open)):
        return Ordering.GREATER
    if xlo == xhi == ylo == yhi:
        return Ordering.EQUAL
    if fuzzy_x and fuzzy_y and isinstance(x, CFReal) and isinstance(y, CFReal):
        if x.pq == y.pq:
            return Ordering.EQUAL
    return Ordering.uncertain((xhi - xlo) + (yhi - ylo))


def _tight(x: Comparable) -> tuple[Fraction, Fraction]:
    """Tight rational enclosure of an exactly-known operand."""
    if isinstance(x, int):
        f = Fraction(x)
        return f, f
    if isinstance(x, Fraction):
        return x, x
    return enclose(x, 160)


def _exact_sub(x, y):
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(y, int):
        y = Fraction(y)
    return x - y


def lt(x: Comparable, y: Comparable) -> bool:
    """Strict x < y; raises PrecisionExhausted on an undecided comparison."""
    c = compare(x, y)
    if not c.decided:
        raise PrecisionExhausted(f"comparison undecided (width {c.width})")
    return c is Ordering.LESS


def le(x: Comparable, y: Comparable) -> bool:
    c = compare(x, y)
    if not c.decided:
        raise PrecisionExhausted(f"comparison undecided (width {c.width})")
    return c is not Ordering.GREATER


def _floor_sqrt_mult(b_num: int, d: int) -> int:
    """floor(b_num * sqrt(d)) for integer b_num (either sign)."""
    t2 = b_num * b_num * d
    t = isqrt(t2)
    if b_num >= 0:
        return t
    return -t if t * t == t2 else -t - 1


def floor_exact(x: Comparable) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    if isinstance(x, Quadratic):
        q = (x.a.denominator * x.b.denominator) // gcd(
            x.a.denominator, x.b.denominator
        )
        av = x.a.numerator * (q // x.a.denominator)
        bv = x.b.numerator * (q // x.b.denominator)
        n = (av + _floor_sqrt_mult(bv, x.d)) // q
        # candidate can be off by one because of the nested floor; fix exactly
        while _sign_quadratic(x.a - n, x.b, x.d) < 0:
            n -= 1
        while _sign_quadratic(x.a - (n + 1), x.b, x.d) >= 0:
            n += 1
        return n
    if isinstance(x, CFReal):
        lo, hi = x.enclosure()
        flo = lo.numerator // lo.denominator
        fhi = (
            hi.numerator // hi.denominator
            if hi.denominator > 1 or len(x.pq) == 1
            else hi.numerator - 1  # open upper endpoint at an integer
        )
        if len(x.pq) > 1 and lo == flo:
            pass  # open lower endpoint: value > lo, floor still flo
        if flo == fhi:
            return flo
        raise PrecisionExhausted("floor undecided by CF enclosure")
    if isinstance(x, RatInterval):
        flo = x.lo.numerator // x.lo.denominator
        fhi = x.hi.numerator // x.hi.denominator
        if flo == fhi:
            return flo
        raise PrecisionExhausted("floor undecided by interval")
    raise TypeError(x)


def nearest_int(x: Comparable) -> int:
    """An integer minimizing |x - n| (upper one on exact ties)."""
    if isinstance(x, (CFReal, RatInterval)):
        lo, hi = _as_interval(x)
        n = floor_exact(RatInterval(lo + Fraction(1, 2), hi + Fraction(1, 2)))
        return n
    return floor_exact(_exact_sub(x, Fraction(-1, 2)))


def ex_abs(x: Comparable):
    if isinstance(x, RatInterval):
        if x.lo >= 0:
            return x
        if x.hi <= 0:
            return -x
        return RatInterval(Fraction(0), max(-x.lo, x.hi))
    s = sign(x)
    if s >= 0:
        return x
    return -x


def dist_to_int(x: Comparable):
    """Distance to the nearest integer, in [0, 1/2], kind-preserving."""
    if isinstance(x, CFReal):
        return _cf_dist_to_int(x)
    if isinstance(x, RatInterval):
        return _interval_dist_to_int(x)
    n = nearest_int(x)
    return ex_abs(_exact_sub(x, Fraction(n)))


def _frac_dist(x: Fraction) -> Fraction:
    n = floor_exact(x + Fraction(1, 2))
    return abs(x - n)


def _interval_dist_to_int(iv: RatInterval) -> "Fraction | RatInterval":
    half = Fraction(1, 2)
    if iv.width >= 1:
        return RatInterval(Fraction(0), half)
    dlo, dhi = _frac_dist(iv.lo), _frac_dist(iv.hi)

    def contains_integer(a: Fraction, b: Fraction) -> bool:
        return b.numerator // b.denominator >= -(-a.numerator // a.denominator)

    # an integer inside the interval pins the minimum at 0
    has_int = contains_integer(iv.lo, iv.hi)
    # a half-integer inside pins the maximum at 1/2
    has_half = contains_integer(iv.lo - half, iv.hi - half)
    lo = Fraction(0) if has_int else min(dlo, dhi)
    hi = half if has_half else max(dlo, dhi)
    if lo == hi:
        return lo
    return RatInterval(lo, hi)


def _cf_frac_part(x: CFReal) -> CFReal:
    if len(x.pq) == 1:
        raise PrecisionExhausted("fractional part of bare-a0 CF is unconstrained")
    return CFReal((0,) + x.pq[1:], x.precision_budget)


def _cf_dist_to_int(x: CFReal) -> CFReal:
    f = _cf_frac_part(x)  # in (0, 1)
    c = compare(f, Fraction(1, 2))
    if not c.decided:
        raise PrecisionExhausted("nearest integer undecided by CF enclosure")
    if c is Ordering.LESS:
        return f
    # 1 - [0; a1, a2, ...] = [0; 1, a1-1, a2, ...]  (a1 >= 2)
    #                      = [0; a2+1, a3, ...]      (a1 == 1)
    tail = f.pq[1:]
    if tail[0] >= 2:
        return CFReal((0, 1, tail[0] - 1) + tail[1:], x.precision_budget)
    if len(tail) < 2:
        raise PrecisionExhausted("CF too short to reflect around 1/2")
    return CFReal((0, tail[1] + 1) + tail[2:], x.precision_budget)


def sup_norm(v: Iterable[Comparable]):
    """max_i |v_i|, exact."""
    best = None
    for x in v:
        ax = ex_abs(x)
        if best is None or lt(best, ax):
            best = ax
    if best is None:
        raise ValueError("empty vector")
    return best


def dist_to_int_vec(v: Iterable[Comparable]):
    """Sup-norm distance to the integer lattice."""
    return sup_norm([dist_to_int(x) for x in v])


def ex_pow(x: Comparable, k: int):
    """x**k for integer k (k >= 0 unless x is invertible)."""
    if isinstance(x, Quadratic):
        return x**k
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return x**k
    if isinstance(x, RatInterval):
        if k < 0:
            raise ValueError("negative powers of intervals unsupported")
        out = RatInterval(Fraction(1), Fraction(1))
        for _ in range(k):
            out = out * x
        return out
    raise TypeError(x)


# ---------------------------------------------------------------------------
# m-th roots represented implicitly
# ---------------------------------------------------------------------------


class Radical:
    """The nonnegative root-th root of a nonnegative exact value.

    Fractional powers t^(n/m) are only ever compared, never evaluated: all
    comparisons cross-multiply to integer powers in the underlying field.
    """

    __slots__ = ("radicand", "root")

    def __init__(self, radicand: Comparable, root: int):
        if root < 1:
            raise ValueError("root must be >= 1")
        if sign(radicand) < 0:
            raise ValueError("negative radicand")
        self.radicand = radicand
        self.root = root

    def compare(self, other: Comparable | "Radical") -> Ordering:
        if isinstance(other, Radical):
            g = gcd(self.root, other.root)
            l = self.root * other.root // g
            return compare(
                ex_pow(self.radicand, l // self.root),
                ex_pow(other.radicand, l // other.root),
            )
        if sign(other) < 0:
            return Ordering.GREATER
        return compare(self.radicand, ex_pow(other, self.root))

    def enclose(self, bits: int) -> tuple[Fraction, Fraction]:
        lo, hi = _tight(self.radicand) if not isinstance(
            self.radicand, (CFReal, RatInterval)
        ) else _as_interval(self.radicand)
        return (_nth_root_lower(lo, self.root, bits), _nth_root_upper(hi, self.root, bits))

    def __float__(self) -> float:
        lo, hi = self.enclose(60)
        return float((lo + hi) / 2)

    def __repr__(self) -> str:
        return f"Radical({self.radicand!r}, {self.root})"


def _inth_root(x: int, r: int) -> int:
    """floor(x**(1/r)) for x >= 0."""
    if x < 0:
        raise ValueError
    if x == 0 or r == 1:
        return x
    g = 1 << (-(-x.bit_length() // r))
    while True:
        nxt = ((r - 1) * g + x // g ** (r - 1)) // r
        if nxt >= g:
            return g
        g = nxt


def _nth_root_lower(x: Fraction, r: int, bits: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    scale = 1 << (bits * r)
    num = x.numerator * scale // x.denominator
    return Fraction(_inth_root(num, r), 1 << bits)


def _nth_root_upper(x: Fraction, r: int, bits: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    scale = 1 << (bits * r)
    num = -(-x.numerator * scale // x.denominator)
    root = _inth_root(num, r)
    if root**r < num:
        root += 1
    return Fraction(root, 1 << bits)


def lt_root(x: Comparable, radicand: Comparable, root: int, strict: bool = True) -> bool:
    """x < radicand**(1/root) (or <= with strict=False), certified."""
    c = Radical(radicand, root).compare(x)
    if not c.decided:
        raise PrecisionExhausted(f"root comparison undecided (width {c.width})")
    if strict:
        return c is Ordering.GREATER
    return c is not Ordering.LESS


# ---------------------------------------------------------------------------
# enclosures and display
# ---------------------------------------------------------------------------


def enclose(x: Comparable, bits: int) -> tuple[Fraction, Fraction]:
    """Rational interval containing x, of width <= 2^-bits when achievable."""
    if isinstance(x, int):
        f = Fraction(x)
        return f, f
    if isinstance(x, Fraction):
        return x, x
    if isinstance(x, Quadratic):
        k = bits + max(x.b.numerator.bit_length() - x.b.denominator.bit_length(), 0) + 2
        s = isqrt(x.d << (2 * k))
        slo, shi = Fraction(s, 1 << k), Fraction(s + 1, 1 << k)
        if x.b > 0:
            return x.a + x.b * slo, x.a + x.b * shi
        return x.a + x.b * shi, x.a + x.b * slo
    if isinstance(x, (CFReal, RatInterval)):
        return _as_interval(x)
    if isinstance(x, Radical):
        return x.enclose(bits)
    raise TypeError(x)


def dec_str(x: Comparable, digits: int = 12) -> str:
    """Decimal rendering from a certified enclosure (midpoint, rounded)."""
    if isinstance(x, Radical):
        lo, hi = x.enclose(4 * digits)
    else:
        lo, hi = enclose(x, 4 * digits)
    mid = (lo + hi) / 2
    scaled = mid * 10**digits
    n = scaled.numerator
    d = scaled.denominator
    r = (2 * n + d) // (2 * d) if n >= 0 else -((2 * -n + d) // (2 * d))
    s = f"{abs(r):0{digits + 1}d}"
    txt = ("-" if r < 0 else "") + s[:-digits] + "." + s[-digits:]
    return txt


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------

_QUAD_RE = re.compile(
    r"^\(\s*(-?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*/\s*(-?\d+)$"
)
_CF_RE = re.compile(r"^cf:\[\s*(-?\d+)\s*(?:;\s*([\d\s,]*\d)\s*)?\]$")


def parse_exact(text: str) -> ExactReal:
    """Parse "p/q", "(a+b*sqrt(d))/c" or "cf:[a0;a1,a2,...]"."""
    text = text.strip().replace("−", "-")  # accept unicode minus
    m = _CF_RE.match(text)
    if m:
        pq = [int(m.group(1))]
        if m.group(2):
            pq.extend(int(t) for t in m.group(2).replace(",", " ").split())
        return CFReal(pq)
    m = _QUAD_RE.match(text)
    if m:
        a, sgn, b, d, c = m.groups()
        c_int = int(c)
        if c_int == 0:
            raise ValueError(f"zero denominator in {text!r}")
        b_signed = int(b) if sgn == "+" else -int(b)
        return quadratic(Fraction(int(a), c_int), Fraction(b_signed, c_int), int(d))
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse exact literal {text!r}") from exc


def format_exact(x: ExactReal) -> str:
    """Canonical literal; parse_exact(format_exact(x)) == x."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Quadratic):
        c = (x.a.denominator * x.b.denominator) // gcd(
            x.a.denominator, x.b.denominator
        )
        a = x.a.numerator * (c // x.a.denominator)
        b = x.b.numerator * (c // x.b.denominator)
        sgn = "+" if b >= 0 else "-"
        return f"({a}{sgn}{abs(b)}*sqrt({x.d}))/{c}"
    if isinstance(x, CFReal):
        head = str(x.pq[0])
        if len(x.pq) == 1:
            return f"cf:[{head}]"
        return f"cf:[{head};{','.join(str(a) for a in x.pq[1:])}]"
    raise TypeError(x)
