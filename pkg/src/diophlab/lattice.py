"""Integer-point enumeration: small-solution search, return sequences,
best-approximation records, badly-approximable witnesses, rank check."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import (
    BudgetExceeded,
    RankDeficient,
    UnsupportedEntry,
)
from .numeric import (
    CFReal,
    Comparable,
    ExactReal,
    Quadratic,
    Radical,
    RatInterval,
    compare,
    dec_str,
    dist_to_int,
    dist_to_int_vec,
    ex_pow,
    floor_exact,
    format_exact,
    lt,
    parse_exact,
    sign,
)

DEFAULT_BUDGET = 1 << 22


@dataclass(frozen=True)
class IntVec:
    coords: tuple[int, ...]

    @property
    def norm(self) -> int:
        return max(abs(c) for c in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


class ApproxMatrix:
    """m x n matrix of exact reals; all quadratic entries share one radicand,
    CF entries are only allowed in the 1 x 1 case."""

    def __init__(self, rows: Sequence[Sequence[ExactReal]]):
        self.rows = tuple(tuple(r) for r in rows)
        self.m = len(self.rows)
        if self.m == 0 or any(len(r) != len(self.rows[0]) for r in self.rows):
            raise ValueError("matrix must be rectangular and nonempty")
        self.n = len(self.rows[0])
        d = None
        has_cf = False
        for r in self.rows:
            for e in r:
                if isinstance(e, Quadratic):
                    if d is None:
                        d = e.d
                    elif e.d != d:
                        raise UnsupportedEntry("entries mix distinct radicands")
                elif isinstance(e, CFReal):
                    has_cf = True
                elif not isinstance(e, Fraction):
                    raise TypeError(f"bad entry {e!r}")
        if has_cf and (self.m, self.n) != (1, 1):
            raise UnsupportedEntry("CF entries only supported for 1x1 matrices")
        self.radicand = d
        self.has_cf = has_cf

    def apply(self, q: Sequence[int]):
        """A q as a list of m exact values (intervals for CF entries)."""
        return [_dot(row, q) for row in self.rows]

    def apply_transpose(self, y: Sequence[int]):
        """(t)A y as a list of n exact values."""
        return [
            _dot([self.rows[i][j] for i in range(self.m)], y) for j in range(self.n)
        ]

    def transpose(self) -> "ApproxMatrix":
        return ApproxMatrix(
            [[self.rows[i][j] for i in range(self.m)] for j in range(self.n)]
        )

    def to_text(self) -> str:
        head = f"{self.m} {self.n}"
        body = "\n".join(" ".join(format_exact(e) for e in r) for r in self.rows)
        return head + "\n" + body + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ApproxMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix file")
        m, n = (int(t) for t in lines[0].split())
        if len(lines) != m + 1:
            raise ValueError(f"expected {m} rows, got {len(lines) - 1}")
        rows = []
        for ln in lines[1:]:
            toks = ln.split()
            if len(toks) != n:
                raise ValueError(f"expected {n} entries per row, got {len(toks)}")
            rows.append([parse_exact(t) for t in toks])
        return cls(rows)


def _dot(entries: Sequence[ExactReal], q: Sequence[int]):
    acc: Comparable = Fraction(0)
    for e, c in zip(entries, q):
        if c == 0:
            continue
        if isinstance(e, CFReal):
            lo, hi = e.enclosure()
            term: Comparable = RatInterval(lo * c, hi * c) if c > 0 else RatInterval(
                hi * c, lo * c
            )
        else:
            term = e * c
        acc = term + acc if isinstance(acc, Fraction) else acc + term
    return acc


def iter_shell(dim: int, s: int) -> Iterator[tuple[int, ...]]:
    """Vectors with sup-norm exactly s, in ascending lexicographic order."""
    if s == 0:
        yield (0,) * dim
        return

    def rec(prefix: tuple[int, ...], maxed: bool) -> Iterator[tuple[int, ...]]:
        depth = len(prefix)
        if depth == dim - 1:
            choices = range(-s, s + 1) if maxed else (-s, s)
            for c in choices:
                yield prefix + (c,)
            return
        for c in range(-s, s + 1):
            yield from rec(prefix + (c,), maxed or abs(c) == s)

    yield from rec((), False)


def shell_size(dim: int, s: int) -> int:
    if s == 0:
        return 1
    return (2 * s + 1) ** dim - (2 * s - 1) ** dim


# ---------------------------------------------------------------------------
# homogeneous search and return sequences
# ---------------------------------------------------------------------------


def solve_homogeneous(
    A: ApproxMatrix,
    C: Comparable,
    X: int,
    budget: int = DEFAULT_BUDGET,
) -> Optional[IntVec]:
    """First q (shell-then-lex order) with 0 < ||q|| < X and ||Aq||_Z < C."""
    if sign(C) <= 0 or X < 1:
        raise ValueError("need C > 0 and X >= 1")
    return _solve_homogeneous_pow(A, ex_pow(C, 1), 1, X, budget)


def _solve_homogeneous_pow(
    A: ApproxMatrix, C_pow: Comparable, pw: int, X: int, budget: int
) -> Optional[IntVec]:
    """Same search with the threshold given as C^pw (strict comparison)."""
    total = 0
    for s in range(1, X):
        total += shell_size(A.n, s)
        if total > budget:
            raise BudgetExceeded(f"enumeration of {total} points exceeds {budget}")
        for q in iter_shell(A.n, s):
            d = dist_to_int_vec(A.apply(q))
            if lt(ex_pow(d, pw), C_pow):
                return IntVec(q)
    return None


@dataclass
class ReturnSequence:
    """L(eps) truncated to [1, ell_max]: levels with no small homogeneous
    solution below the eps * 2^(-(n/m) l) threshold."""

    epsilon: ExactReal
    ell_max: int
    levels: list[int]
    m: int
    n: int

    def csv_rows(self) -> list[list[str]]:
        rows = [["ell", "in_return_sequence", "threshold_pow_m", "threshold_dec"]]
        lv = set(self.levels)
        for ell in range(1, self.ell_max + 1):
            thr = ex_pow(self.epsilon, self.m) * Fraction(1, 1 << (self.n * ell))
            rows.append(
                [
                    str(ell),
                    "1" if ell in lv else "0",
                    format_exact(thr),
                    dec_str(Radical(thr, self.m)),
                ]
            )
        return rows


def return_sequence(
    A: ApproxMatrix,
    epsilon: Comparable,
    ell_max: int,
    budget: int = DEFAULT_BUDGET,
) -> ReturnSequence:
    """Levels l in [1, ell_max] with no q, 0 < ||q|| < 2^l and
    ||Aq||_Z < eps * 2^(-(n/m) l); the threshold is compared on m-th powers."""
    if sign(epsilon) <= 0 or ell_max < 1:
        raise ValueError("need eps > 0 and ell_max >= 1")
    m, n = A.m, A.n
    eps_m = ex_pow(epsilon, m)
    levels = []
    for ell in range(1, ell_max + 1):
        C_pow = eps_m * Fraction(1, 1 << (n * ell))
        if _solve_homogeneous_pow(A, C_pow, m, 1 << ell, budget) is None:
            levels.append(ell)
    return ReturnSequence(epsilon, ell_max, levels, m, n)


def bad_witness(
    A: ApproxMatrix, Q: int, budget: int = DEFAULT_BUDGET
) -> tuple[Comparable, IntVec]:
    """min over 0 < ||q|| <= Q of ||q||^(n/m) ||Aq||_Z, minimized on m-th
    powers; reported exactly for m = 1 and as an m-th root otherwise."""
    if Q < 1:
        raise ValueError("Q >= 1 required")
    m, n = A.m, A.n
    best_key = None
    best_q = None
    total = 0
    for s in range(1, Q + 1):
        total += shell_size(n, s)
        if total > budget:
            raise BudgetExceeded(f"enumeration of {total} points exceeds {budget}")
        for q in iter_shell(n, s):
            d = dist_to_int_vec(A.apply(q))
            key = ex_pow(d, m) * Fraction(s**n)
            if best_key is None or lt(key, best_key):
                best_key = key
                best_q = IntVec(q)
    assert best_key is not None and best_q is not None
    if m == 1:
        return best_key, best_q
    return Radical(best_key, m), best_q


# ---------------------------------------------------------------------------
# best approximations for the transpose
# ---------------------------------------------------------------------------


@dataclass
class BestApproxEntry:
    y: IntVec
    Y: int
    M: Comparable  # ||(t)A y||_Z


@dataclass
class BestApproxSequence:
    entries: list[BestApproxEntry]
    y_max: int

    @property
    def Y(self) -> list[int]:
        return [e.Y for e in self.entries]

    def csv_rows(self) -> list[list[str]]:
        rows = [["k", "y", "Y", "M_exact", "M_dec"]]
        for k, e in enumerate(self.entries, start=1):
            m_lit = (
                f"[{dec_str(e.M)}]"
                if isinstance(e.M, RatInterval)
                else format_exact(e.M)
            )
            rows.append(
                [str(k), " ".join(str(c) for c in e.y.coords), str(e.Y), m_lit, dec_str(e.M)]
            )
        return rows


def best_approximations(
    A: ApproxMatrix, Y_max: int, budget: int = DEFAULT_BUDGET
) -> BestApproxSequence:
    """Record-improving ||(t)A y||_Z minimizers over shells ||y|| = 1..Y_max.

    For 1 x 1 irrational matrices the records are the CF convergent
    denominators; a CF fast path avoids the shell scan at large horizons.
    """
    if Y_max < 1:
        raise ValueError("Y_max >= 1 required")
    if not A.has_cf and not check_rank(A):
        raise RankDeficient("integer-translate group is not of maximal rank")
    if (A.m, A.n) == (1, 1) and not isinstance(A.rows[0][0], Fraction):
        return _best_approximations_1d(A, Y_max)
    return _best_approximations_scan(A, Y_max, budget)


def _best_approximations_scan(
    A: ApproxMatrix, Y_max: int, budget: int
) -> BestApproxSequence:
    record: Comparable = Fraction(1, 2)
    entries: list[BestApproxEntry] = []
    total = 0
    for s in range(1, Y_max + 1):
        total += shell_size(A.m, s)
        if total > budget:
            raise BudgetExceeded(f"enumeration of {total} points exceeds {budget}")
        shell_best = None
        shell_y = None
        for y in iter_shell(A.m, s):
            d = dist_to_int_vec(A.apply_transpose(y))
            if shell_best is None or lt(d, shell_best):
                shell_best = d
                shell_y = y
        if shell_best is not None and lt(shell_best, record):
            record = shell_best
            entries.append(BestApproxEntry(IntVec(shell_y), s, shell_best))
    return BestApproxSequence(entries, Y_max)


def _best_approximations_1d(A: ApproxMatrix, Y_max: int) -> BestApproxSequence:
    """CF convergent denominators q_k are exactly the record norms in 1D."""
    alpha = A.rows[0][0]
    entries: list[BestApproxEntry] = []
    if isinstance(alpha, Quadratic):
        gen = _quadratic_convergents(alpha, Y_max)
    else:
        gen = _cf_convergents_bounded(alpha, Y_max)
    record: Comparable = Fraction(1, 2)
    for p, q, M in gen:
        if lt(M, record):
            record = M
            # lexicographic tie-break over the shell {-q, q} picks -q
            entries.append(BestApproxEntry(IntVec((-q,)), q, M))
    return BestApproxSequence(entries, Y_max)


def _quadratic_convergents(alpha: Quadratic, Y_max: int):
    for a, p, q in _cf_steps(alpha, Y_max):
        if q > Y_max:
            return
        val = alpha * q - p
        M = val if sign(val) >= 0 else -val
        yield p, q, M


def _cf_steps(alpha, Y_max: int):
    """(a_k, p_k, q_k) from the exact CF algorithm while q_k <= Y_max."""
    x = alpha
    p0, q0, p1, q1 = 1, 0, 0, 1  # (p_{k-1}, q_{k-1}), (p_{k-2}, q_{k-2})
    while True:
        a = floor_exact(x)
        p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        yield a, p0, q0
        if q0 > Y_max:
            return
        frac = x - a
        if isinstance(frac, Fraction) and frac == 0:
            return
        frac_inv = 1 / frac if isinstance(frac, Fraction) else frac.inverse()
        x = frac_inv


def _cf_convergents_bounded(alpha: CFReal, Y_max: int):
    conv = alpha.convergents()
    n_pq = min(len(alpha.pq), alpha.precision_budget)
    for k, (p, q) in enumerate(conv):
        if q > Y_max:
            return
        # |q_k alpha - p_k| = 1/(alpha_{k+1} q_k + q_{k-1}) with the tail
        # alpha_{k+1} in (a_{k+1}, a_{k+1} + 1); the last convergent has no
        # tail bound, so it is withheld rather than guessed.
        if k + 1 >= n_pq:
            return
        q_prev = conv[k - 1][1] if k >= 1 else 0
        a_next = alpha.pq[k + 1]
        lo = Fraction(1, (a_next + 1) * q + q_prev)
        hi = Fraction(1, a_next * q + q_prev)
        yield p, q, RatInterval(lo, hi)


# ---------------------------------------------------------------------------
# rank of (t)A Z^m + Z^n
# ---------------------------------------------------------------------------


def check_rank(A: ApproxMatrix) -> bool:
    """True iff the group (t)A Z^m + Z^n has full rank m + n over Z.

    Equivalent to: no nonzero y in Z^m has (t)A y in Z^n.  A nonzero y with
    integral image must kill every sqrt(d)-coefficient, and any rational
    vector in that kernel scales to an integral witness, so full rank holds
    exactly when the irrational-part matrix has trivial left kernel.
    """
    if A.has_cf:
        raise UnsupportedEntry("rank check unsupported for CF entries")
    # rows of S: the sqrt(d)-coefficient of each entry, one row per i
    S = [
        [e.b if isinstance(e, Quadratic) else Fraction(0) for e in row]
        for row in A.rows
    ]
    return _rational_rank(S) == A.m


def _rational_rank(rows: list[list[Fraction]]) -> int:
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [v / pv for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [v - f * w for v, w in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


# ---------------------------------------------------------------------------
# continued-fraction diagnostics
# ---------------------------------------------------------------------------


@dataclass
class CFExpansion:
    quotients: list[int]
    terminated: bool = False
    period: Optional[list[int]] = None
    preperiod: int = 0


def continued_fraction(alpha: ExactReal, k: int) -> CFExpansion:
    """First k partial quotients; detects the period for quadratics."""
    if k < 1:
        raise ValueError("k >= 1 required")
    if isinstance(alpha, Fraction):
        qs = []
        x = alpha
        while len(qs) < k:
            a = x.numerator // x.denominator
            qs.append(a)
            x -= a
            if x == 0:
                return CFExpansion(qs, terminated=True)
            x = 1 / x
        return CFExpansion(qs)
    if isinstance(alpha, Quadratic):
        qs: list[int] = []
        seen: dict[Quadratic, int] = {}
        period: Optional[list[int]] = None
        preperiod = 0
        x: Comparable = alpha
        while len(qs) < k:
            if isinstance(x, Quadratic) and period is None:
                if x in seen:
                    preperiod = seen[x]
                    period = qs[preperiod:]
                    break
                seen[x] = len(qs)
            a = floor_exact(x)
            qs.append(a)
            frac = x - a
            if isinstance(frac, Fraction):
                if frac == 0:
                    return CFExpansion(qs, terminated=True)
                x = 1 / frac
            else:
                x = frac.inverse()
        if period is not None:
            while len(qs) < k:
                qs.append(period[(len(qs) - preperiod) % len(period)])
            return CFExpansion(qs[:k], period=period, preperiod=preperiod)
        return CFExpansion(qs)
    raise UnsupportedEntry("continued_fraction needs a rational or quadratic")
