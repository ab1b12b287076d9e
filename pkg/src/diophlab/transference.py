"""Constructive homogeneous-to-inhomogeneous transference with exact constants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import BudgetExceeded
from .fastpath import Line1D
from .lattice import (
    DEFAULT_BUDGET,
    ApproxMatrix,
    IntVec,
    ReturnSequence,
    iter_shell,
    shell_size,
    _solve_homogeneous_pow,
)
from .numeric import (
    Comparable,
    ExactReal,
    Quadratic,
    Radical,
    dec_str,
    dist_to_int,
    dist_to_int_vec,
    ex_pow,
    floor_exact,
    format_exact,
    le,
    sign,
)


@dataclass
class TransferBounds:
    C: ExactReal
    X: int
    h: ExactReal
    C1: ExactReal
    X1: ExactReal


def transfer_bounds(C: ExactReal, X: int, m: int, n: int) -> TransferBounds:
    """h = X^-n C^-m, C1 = (h+1)C/2, X1 = (h+1)X/2, all exact in C's field."""
    if sign(C) <= 0 or X < 1:
        raise ValueError("need C > 0 and X >= 1")
    h = ex_pow(C, -m) * Fraction(1, X**n)
    scale = (h + 1) * Fraction(1, 2)
    return TransferBounds(C=C, X=X, h=h, C1=scale * C, X1=scale * X)


def solve_inhomogeneous(
    A: ApproxMatrix,
    b: Sequence[Fraction],
    C1: Comparable,
    X1: Comparable,
    budget: int = DEFAULT_BUDGET,
) -> Optional[IntVec]:
    """Minimal-norm, lexicographically-least q with ||q|| <= X1 and
    ||Aq - b||_Z <= C1 (non-strict), or None."""
    if sign(C1) <= 0:
        raise ValueError("C1 > 0 required")
    x_cap = floor_exact(X1)
    if x_cap < 0:
        raise ValueError("X1 >= 0 required")
    return _solve_inhomogeneous_pow(A, b, ex_pow(C1, 1), 1, x_cap, budget)


def _solve_inhomogeneous_pow(
    A: ApproxMatrix,
    b: Sequence[Fraction],
    C_pow: Comparable,
    pw: int,
    x_cap: int,
    budget: int,
) -> Optional[IntVec]:
    if (A.m, A.n) == (1, 1) and not isinstance(A.rows[0][0], Fraction):
        return _solve_inhomogeneous_1d(A, b[0], C_pow, pw, x_cap)
    total = 0
    for s in range(0, x_cap + 1):
        total += shell_size(A.n, s)
        if total > budget:
            raise BudgetExceeded(f"enumeration of {total} points exceeds {budget}")
        for q in iter_shell(A.n, s):
            diff = [v - t for v, t in zip(A.apply(q), b)]
            d = dist_to_int_vec(diff)
            if le(ex_pow(d, pw), C_pow):
                return IntVec(q)
    return None


def _solve_inhomogeneous_1d(
    A: ApproxMatrix, b: Fraction, C_pow: Comparable, pw: int, x_cap: int
) -> Optional[IntVec]:
    """Scaled-integer prefilter with exact confirmation, preserving the
    shell-then-lex search order of the generic scan."""
    alpha = A.rows[0][0]
    line = Line1D(alpha)
    mod = line.mod
    b_scaled = (b.numerator << line.shift) // b.denominator
    b_err = 0 if (b.numerator << line.shift) % b.denominator == 0 else 1
    thr = Radical(C_pow, pw)
    t_lo, t_hi = thr.enclose(line.shift)
    thr_lo = (t_lo.numerator << line.shift) // t_lo.denominator
    thr_hi = -((-t_hi.numerator << line.shift) // t_hi.denominator)

    def exact_ok(q: int) -> bool:
        val = A.apply((q,))[0]
        d = dist_to_int(val - b if q != 0 else -b + Fraction(0))
        return le(ex_pow(d, pw), C_pow)

    for s in range(0, x_cap + 1):
        for q in ((0,) if s == 0 else (-s, s)):
            d_lo, d_hi = line.dist_bounds(q, b_scaled, b_err) if q != 0 else (
                _b_dist_scaled(b_scaled, mod),
                _b_dist_scaled(b_scaled, mod) + b_err,
            )
            if d_hi <= thr_lo - 2:
                return IntVec((q,))
            if d_lo > thr_hi + 2:
                continue
            if exact_ok(q):
                return IntVec((q,))
    return None


def _b_dist_scaled(b_scaled: int, mod: int) -> int:
    v = b_scaled % mod
    return min(v, mod - v)


@dataclass
class Cor33Target:
    b: tuple[Fraction, ...]
    witness: Optional[IntVec]
    lhs_dec: str
    slack_dec: str
    ok: bool

    def to_json(self) -> dict:
        return {
            "b": [str(x) for x in self.b],
            "witness_q": list(self.witness.coords) if self.witness else None,
            "lhs_value": self.lhs_dec,
            "slack": self.slack_dec,
            "ok": self.ok,
        }


@dataclass
class Cor33Report:
    epsilon: ExactReal
    ell: int
    m: int
    n: int
    C1_pow_m: ExactReal
    X1: ExactReal
    targets: list[Cor33Target]

    @property
    def successes(self) -> int:
        return sum(t.ok for t in self.targets)

    @property
    def all_ok(self) -> bool:
        return all(t.ok for t in self.targets)

    def to_json(self) -> dict:
        return {
            "epsilon": format_exact(self.epsilon),
            "ell": self.ell,
            "C1": {
                "pow_m_exact": format_exact(self.C1_pow_m),
                "dec": dec_str(Radical(self.C1_pow_m, self.m)),
            },
            "X1": {"exact": format_exact(self.X1), "dec": dec_str(self.X1)},
            "successes": self.successes,
            "targets": [t.to_json() for t in self.targets],
        }


def corollary_bounds(epsilon: Comparable, ell: int, m: int, n: int):
    """(C1^m exact, X1 exact) for the return-time specialization:
    C1 = (eps^-m + 1)/2 * eps * 2^(-(n/m) l), X1 = (eps^-m + 1)/2 * 2^l."""
    scale = (ex_pow(epsilon, -m) + 1) * Fraction(1, 2)
    C1_pow_m = ex_pow(scale, m) * ex_pow(epsilon, m) * Fraction(1, 1 << (n * ell))
    X1 = scale * (1 << ell)
    return C1_pow_m, X1


def verify_corollary_3_3(
    A: ApproxMatrix,
    epsilon: Comparable,
    ell: int,
    targets: Sequence[Sequence[Fraction]],
    budget: int = DEFAULT_BUDGET,
    check_level: bool = True,
) -> Cor33Report:
    """Every target must admit an inhomogeneous witness within the
    transferred bounds; a miss is flagged as a theorem violation."""
    m, n = A.m, A.n
    if check_level:
        eps_m = ex_pow(epsilon, m)
        hom = _solve_homogeneous_pow(
            A, eps_m * Fraction(1, 1 << (n * ell)), m, 1 << ell, budget
        )
        if hom is not None:
            raise ValueError(f"level {ell} is not in the return sequence")
    C1_pow_m, X1 = corollary_bounds(epsilon, ell, m, n)
    x_cap = floor_exact(X1)
    out: list[Cor33Target] = []
    for b in targets:
        b = tuple(Fraction(x) for x in b)
        q = _solve_inhomogeneous_pow(A, b, C1_pow_m, m, x_cap, budget)
        if q is None:
            out.append(Cor33Target(b, None, "", "", False))
            continue
        diff = [v - t for v, t in zip(A.apply(q), b)]
        d = dist_to_int_vec(diff)
        lhs = dec_str(d)
        c1_dec = dec_str(Radical(C1_pow_m, m))
        slack = f"{float(Radical(C1_pow_m, m)) - float(d):.12e}"
        out.append(Cor33Target(b, q, lhs, slack, True))
    return Cor33Report(epsilon, ell, m, n, C1_pow_m, X1, out)
