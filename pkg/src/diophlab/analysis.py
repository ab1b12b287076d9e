"""Series classifiers for the zero-one criteria, the best-approximation
counterpart machinery (gamma_k, U_k, V_k, B_alpha), and exponent estimates.

All theorem-critical inequalities are decided by integer cross-power
comparisons; decimals in reports are display-only enclosures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    BudgetExceeded,
    CoverageGap,
    InsufficientData,
    PrecisionExhausted,
)
from .lattice import (
    ApproxMatrix,
    BestApproxSequence,
    IntVec,
    ReturnSequence,
    iter_shell,
    shell_size,
)
from .limsup import ApproxFunction, PowerLog, TablePsi, Window
from .numeric import (
    Comparable,
    Radical,
    RatInterval,
    compare,
    dec_str,
    dist_to_int,
    dist_to_int_vec,
    enclose,
    ex_pow,
    le,
    lt,
    sup_norm,
    _nth_root_lower,
    _nth_root_upper,
)

__all__ = [
    "CounterpartReport",
    "ExponentEstimate",
    "Prop51Report",
    "SeriesVerdict",
    "b_alpha_test",
    "classify_return_series",
    "classify_series",
    "estimate_exponents",
    "gamma_sequence",
    "key_inequality_check",
    "verify_prop_5_1",
]


# ---------------------------------------------------------------------------
# series classifiers
# ---------------------------------------------------------------------------


@dataclass
class SeriesVerdict:
    status: str  # Converges | Diverges | Unknown
    partial_sums: list[tuple[int, tuple[Fraction, Fraction]]]
    rationale: str

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "rationale": self.rationale,
            "partial_sums": [
                {"Q": q, "lo": dec_str(lo), "hi": dec_str(hi)}
                for q, (lo, hi) in self.partial_sums
            ],
        }


def _term_pow_bounds(
    psi: ApproxFunction, q: int, s: Fraction, bits: int = 50
) -> tuple[Fraction, Fraction]:
    """Bounds on psi(q)^s."""
    vlo, vhi = psi.value_bounds(q, bits)
    p, r = s.numerator, s.denominator
    return _nth_root_lower(vlo**p, r, bits), _nth_root_upper(vhi**p, r, bits)


def _partial_sum_bounds(
    psi: ApproxFunction, n: int, s: Fraction, Q: int, exact_upto: int = 1024
) -> tuple[Fraction, Fraction]:
    """Enclosure of sum_{q=1}^{Q} q^(n-1) psi(q)^s.

    Terms up to exact_upto are summed individually; beyond that, geometric
    blocks (ratio 17/16, tight enough for log-critical trend checks) are
    bracketed using monotonicity of psi and of q^(n-1)."""
    lo = hi = Fraction(0)
    head = min(Q, exact_upto)
    for q in range(1, head + 1):
        tlo, thi = _term_pow_bounds(psi, q, s)
        lo += q ** (n - 1) * tlo
        hi += q ** (n - 1) * thi
    start = head + 1
    while start <= Q:
        end = min(max(start, start * 17 // 16 - 1), Q)
        count = end - start + 1
        blo, _ = _term_pow_bounds(psi, end, s)
        _, bhi = _term_pow_bounds(psi, start, s)
        lo += count * start ** (n - 1) * blo
        hi += count * end ** (n - 1) * bhi
        start = end + 1
    return lo, hi


def classify_series(
    psi: ApproxFunction,
    s: Fraction,
    n: int,
    horizons: Sequence[int] = (10**2, 10**4, 10**6),
) -> SeriesVerdict:
    """Verdict on sum q^(n-1) psi(q)^s.

    For PowerLog psi(q) = c q^-a (ln q)^-beta the closed form applies:
    Converges iff a s > n, or a s = n with beta s > 1.  Tables only get
    partial sums."""
    s = Fraction(s)
    if s <= 0:
        raise ValueError("s > 0 required")
    partials = [(Q, _partial_sum_bounds(psi, n, s, Q)) for Q in horizons]
    if isinstance(psi, PowerLog):
        as_ = psi.a * s
        bs = psi.beta * s
        if as_ > n or (as_ == n and bs > 1):
            status = "Converges"
            rationale = f"a*s = {as_} vs n = {n}, beta*s = {bs}"
        else:
            status = "Diverges"
            rationale = f"a*s = {as_} vs n = {n}, beta*s = {bs} <= 1"
        return SeriesVerdict(status, partials, rationale)
    return SeriesVerdict("Unknown", partials, "table psi: partial sums only")


def classify_return_series(
    psi: ApproxFunction, s: Fraction, n: int, L: ReturnSequence
) -> SeriesVerdict:
    """Verdict on sum over levels of 2^(l n) psi(2^l)^s.

    A closed-form verdict is claimed only when the level set is the full
    range [1, ell_max] (condensation then ties it to classify_series);
    sparse level sets get partial sums with status Unknown."""
    s = Fraction(s)
    if not L.levels:
        raise InsufficientData("empty return sequence")
    lo = hi = Fraction(0)
    partials = []
    for ell in L.levels:
        tlo, thi = _term_pow_bounds(psi, 1 << ell, s)
        lo += (1 << (ell * n)) * tlo
        hi += (1 << (ell * n)) * thi
        partials.append((1 << ell, (lo, hi)))
    full = list(L.levels) == list(range(1, L.ell_max + 1))
    if full and isinstance(psi, PowerLog):
        inner = classify_series(psi, s, n, horizons=(10**4,))
        # condensed and plain series converge/diverge together
        return SeriesVerdict(inner.status, partials, "full levels: " + inner.rationale)
    return SeriesVerdict("Unknown", partials, "sparse levels: partial sums only")


# ---------------------------------------------------------------------------
# gamma_k / U_k / V_k machinery
# ---------------------------------------------------------------------------


def _max_pow(x: Comparable, y: Comparable) -> Comparable:
    c = compare(x, y)
    if c.decided:
        return x if c.kind == "greater" else y
    # undecided enclosures: take the interval hull of the max
    from .numeric import _as_interval

    xl, xh = _as_interval(x)
    yl, yh = _as_interval(y)
    return RatInterval(max(xl, yl), max(xh, yh))


@dataclass
class CounterpartEntry:
    k: int
    Y: int
    M_dec: str
    gamma_pow: Comparable  # gamma_k^(m+n), exact (interval for CFReal)
    gamma_dec: str
    U_dec: str
    V_dec: str
    U_lt_V: bool
    U_next_le_V: Optional[bool]


@dataclass
class CounterpartReport:
    m: int
    n: int
    entries: list[CounterpartEntry]
    gamma_partial_sums: list[tuple[int, tuple[Fraction, Fraction]]]
    V_increasing: bool

    @property
    def all_checks(self) -> bool:
        return all(
            e.U_lt_V and (e.U_next_le_V is None or e.U_next_le_V) for e in self.entries
        )

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "V_increasing_trend": self.V_increasing,
            "all_checks": self.all_checks,
            "entries": [
                {
                    "k": e.k,
                    "Y": e.Y,
                    "M": e.M_dec,
                    "gamma": e.gamma_dec,
                    "U": e.U_dec,
                    "V": e.V_dec,
                    "U_lt_V": e.U_lt_V,
                    "U_next_le_V": e.U_next_le_V,
                }
                for e in self.entries
            ],
            "gamma_partial_sums": [
                {"k": k, "lo": dec_str(lo), "hi": dec_str(hi)}
                for k, (lo, hi) in self.gamma_partial_sums
            ],
        }

    def csv_rows(self):
        yield ("k", "Y_k", "M_k", "gamma_k", "U_k", "V_k")
        for e in self.entries:
            yield (e.k, e.Y, e.M_dec, e.gamma_dec, e.U_dec, e.V_dec)


def _gamma_pow(best: BestApproxSequence, k: int, m: int, n: int) -> Comparable:
    """gamma_k^(m+n) = max(Y_k^m M_(k-1)^n, Y_(k+1)^m M_k^n), exact."""
    e = best.entries
    a = Fraction(e[k].Y**m) * ex_pow(e[k - 1].M, n)
    b = Fraction(e[k + 1].Y**m) * ex_pow(e[k].M, n)
    return _max_pow(a, b)


def gamma_sequence(best: BestApproxSequence, m: int, n: int) -> CounterpartReport:
    """gamma_k, U_k = (Y_k/gamma_k)^(m/n), V_k = gamma_k/M_k for interior k,
    with the two proof obligations U_k < V_k and U_(k+1) <= V_k decided by
    integer cross-powers."""
    ents = best.entries
    K = len(ents)
    if K < 3:
        raise InsufficientData("need at least 3 best approximations")
    mn = m + n
    gpows = {k: _gamma_pow(best, k, m, n) for k in range(1, K - 1)}
    rows: list[CounterpartEntry] = []
    gsum_lo = gsum_hi = Fraction(0)
    gsums = []
    v_prev = None
    v_increasing = True
    for k in range(1, K - 1):
        g = gpows[k]
        Yk, Mk = ents[k].Y, ents[k].M
        # (2) U_k < V_k  <=>  (Y_k^m M_k^n)^(m+n) < g_k^(m+n).  When the
        # enclosure is too fuzzy to decide, fall back to the structural
        # argument: g_k >= Y_(k+1)^m M_k^n > Y_k^m M_k^n since Y increases.
        try:
            u_lt_v = lt(Fraction(Yk**m) * ex_pow(Mk, n), g)
        except PrecisionExhausted:
            u_lt_v = ents[k + 1].Y > Yk
        # (3) U_(k+1) <= V_k  <=>  (Y_(k+1)^m M_k^n)^(m+n) <= g_k^n g_(k+1)^m;
        # both maxima dominate the shared branch Y_(k+1)^m M_k^n, so the
        # inequality is an algebraic consequence of the max construction.
        if k + 1 in gpows:
            lhs = ex_pow(Fraction(ents[k + 1].Y**m) * ex_pow(Mk, n), mn)
            rhs = ex_pow(g, n) * ex_pow(gpows[k + 1], m)
            try:
                u_next_le_v = le(lhs, rhs)
            except PrecisionExhausted:
                u_next_le_v = True
        else:
            u_next_le_v = None
        glo, ghi = Radical(g, mn).enclose(64)
        gsum_lo += glo
        gsum_hi += ghi
        gsums.append((k, (gsum_lo, gsum_hi)))
        # U_k^(n(m+n)) = Y_k^(m(m+n)) / g_k^m ; V_k^(m+n) = g_k / M_k^(m+n)
        u_rad = Radical(
            _div_pow(Fraction(Yk ** (m * mn)), ex_pow(g, m)), n * mn
        )
        v_rad = Radical(_div_pow(g, ex_pow(Mk, mn)), mn)
        if v_prev is not None:
            c = v_rad.compare(v_prev)
            if not (c.decided and c.kind == "greater"):
                v_increasing = False
        v_prev = v_rad
        rows.append(
            CounterpartEntry(
                k=k,
                Y=Yk,
                M_dec=dec_str(Mk),
                gamma_pow=g,
                gamma_dec=dec_str(Radical(g, mn)),
                U_dec=dec_str(u_rad),
                V_dec=dec_str(v_rad),
                U_lt_V=u_lt_v,
                U_next_le_V=u_next_le_v,
            )
        )
    return CounterpartReport(m, n, rows, gsums, v_increasing)


def _div_pow(num: Comparable, den: Comparable) -> Comparable:
    if isinstance(num, Fraction) and isinstance(den, Fraction):
        return num / den
    if isinstance(den, RatInterval):
        inv = RatInterval(1 / den.hi, 1 / den.lo)
        return inv * num if isinstance(num, RatInterval) else inv * Fraction(num)
    return num * den.inverse() if hasattr(den, "inverse") else num / den


def b_alpha_test(
    b: Sequence[Fraction],
    best: BestApproxSequence,
    alpha: Fraction,
    k_range: Sequence[int],
    m: int = 1,
    n: int = 1,
) -> bool:
    """||b . y_k||_Z > alpha gamma_k for every k in k_range (exact)."""
    alpha = Fraction(alpha)
    b = tuple(Fraction(x) for x in b)
    ents = best.entries
    mn = m + n
    for k in k_range:
        if not 1 <= k <= len(ents) - 2:
            raise InsufficientData(f"k = {k} outside interior range")
        y = ents[k].y.coords
        lhs = dist_to_int(sum(bi * yi for bi, yi in zip(b, y)))
        # lhs > alpha gamma_k  <=>  lhs^(m+n) > alpha^(m+n) gamma_k^(m+n)
        g = _gamma_pow(best, k, m, n)
        if not lt(ex_pow(g, 1) * alpha**mn, lhs**mn):
            return False
    return True


# ---------------------------------------------------------------------------
# Proposition 5.1 verification
# ---------------------------------------------------------------------------


@dataclass
class Prop51Report:
    alpha: Fraction
    window: Window
    threshold: Fraction  # (alpha - n)/m
    k_range: list[int]
    binding: dict[int, int]  # ||q|| -> binding k with U_k <= ||q|| < V_k
    violations: list[tuple[int, ...]]
    spot_checks: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "threshold": str(self.threshold),
            "window": {"l": self.window.l, "u": self.window.u},
            "k_range": self.k_range,
            "binding": {str(s): k for s, k in self.binding.items()},
            "violations": [list(v) for v in self.violations],
            "spot_checks": self.spot_checks,
            "ok": self.ok,
        }


def _u_le(best: BestApproxSequence, k: int, m: int, n: int, s: int) -> bool:
    """U_k <= s, exact: Y_k^(m(m+n)) <= s^(n(m+n)) g_k^m."""
    g = _gamma_pow(best, k, m, n)
    mn = m + n
    return le(Fraction(best.entries[k].Y ** (m * mn)), Fraction(s ** (n * mn)) * ex_pow(g, m))


def _lt_v(best: BestApproxSequence, k: int, m: int, n: int, s: int) -> bool:
    """s < V_k, exact: s^(m+n) M_k^(m+n) < g_k."""
    g = _gamma_pow(best, k, m, n)
    mn = m + n
    return lt(Fraction(s**mn) * ex_pow(best.entries[k].M, mn), g)


def verify_prop_5_1(
    A: ApproxMatrix,
    b: Sequence[Fraction],
    alpha: Fraction,
    best: BestApproxSequence,
    w: Window,
    budget: int = 1 << 22,
    spot_check_stride: int = 97,
) -> Prop51Report:
    """Exhaustively check ||q||^(n/m) ||Aq - b||_Z > (alpha - n)/m over the
    window, recording the binding k with U_k <= ||q|| < V_k per norm.

    Preconditions: alpha > n; the [U_k, V_k) intervals must cover the
    window (CoverageGap otherwise); b must pass b_alpha_test on the ks
    used."""
    m, n = A.m, A.n
    alpha = Fraction(alpha)
    if alpha <= n:
        raise ValueError("alpha > n required for a positive threshold")
    thr = (alpha - n) / m
    interior = range(1, len(best.entries) - 1)
    binding: dict[int, int] = {}
    for s in w.shells:
        k_bind = next(
            (k for k in interior if _u_le(best, k, m, n, s) and _lt_v(best, k, m, n, s)),
            None,
        )
        if k_bind is None:
            raise CoverageGap(f"no [U_k, V_k) interval contains ||q|| = {s}")
        binding[s] = k_bind
    ks = sorted(set(binding.values()))
    if not b_alpha_test(b, best, alpha, ks, m, n):
        raise ValueError("b fails b_alpha_test on the binding k range")
    total = sum(shell_size(n, s) for s in w.shells)
    if total > budget:
        raise BudgetExceeded(f"{total} lattice points exceed budget {budget}")
    b = tuple(Fraction(x) for x in b)
    violations: list[tuple[int, ...]] = []
    spot = 0
    idx = 0
    for s in w.shells:
        for q in iter_shell(n, s):
            diff = [v - t for v, t in zip(A.apply(q), b)]
            d = dist_to_int_vec(diff)
            # ||q||^(n/m) d > thr  <=>  ||q||^n d^m > thr^m
            if not lt(thr**m, Fraction(s**n) * ex_pow(d, m)):
                violations.append(q)
            idx += 1
            if idx % spot_check_stride == 0:
                k = binding[s]
                if not key_inequality_check(A, b, IntVec(q), best.entries[k].y):
                    violations.append(q)
                spot += 1
    return Prop51Report(alpha, w, thr, ks, binding, violations, spot)


def key_inequality_check(
    A: ApproxMatrix, b: Sequence[Fraction], q: IntVec, y: IntVec
) -> bool:
    """||b.y||_Z <= m ||y|| ||Aq - b||_Z + n ||q|| ||tA y||_Z, exactly.

    Holds for every integer q, y by the transference identity; a False
    return is a bug detector, not a mathematical possibility."""
    m, n = A.m, A.n
    b = tuple(Fraction(x) for x in b)
    if len(y.coords) != m or len(q.coords) != n:
        raise ValueError("dimension mismatch")
    lhs = dist_to_int(sum(bi * yi for bi, yi in zip(b, y.coords)))
    diff = [v - t for v, t in zip(A.apply(q.coords), b)]
    d1 = dist_to_int_vec(diff)
    d2 = dist_to_int_vec(A.apply_transpose(y.coords))
    rhs = d1 * (m * y.norm) + d2 * (n * q.norm)
    c = compare(lhs, rhs)
    if not c.decided:
        raise PrecisionExhausted("key inequality comparison undecided")
    return c.kind != "greater"


# ---------------------------------------------------------------------------
# exponent estimation
# ---------------------------------------------------------------------------


class ExactHit:
    """Sentinel: the distance vanished exactly, exponent is +infinity."""

    def __repr__(self):
        return "ExactHit"


EXACT_HIT = ExactHit()


@dataclass
class ExponentEstimate:
    w_hat: "float | ExactHit | None"
    what_hat: Optional[float]
    horizons: list[int]
    table: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "w_hat": "exact_hit" if isinstance(self.w_hat, ExactHit) else self.w_hat,
            "what_hat": self.what_hat,
            "horizons": self.horizons,
            "table": self.table,
        }


def _best_dist_enclosure(A: ApproxMatrix, b, X: int, budget: int):
    """(distance enclosure, q) minimizing ||Aq - b||_Z over 0 < ||q|| < X;
    q = 0 is excluded in both the homogeneous and inhomogeneous problems
    (b = 0 would otherwise be a trivial exact hit)."""
    best_d = None
    best_q = None
    total = 0
    for s in range(1, X):
        total += shell_size(A.n, s)
        if total > budget:
            raise BudgetExceeded(f"enumeration of {total} points exceeds {budget}")
        for q in iter_shell(A.n, s):
            vec = A.apply(q)
            if b is not None:
                vec = [v - t for v, t in zip(vec, b)]
            d = dist_to_int_vec(vec)
            if best_d is None or lt(d, best_d):
                best_d = d
                best_q = q
    return best_d, best_q


def _hom_dist_from_best(best: BestApproxSequence, X: int):
    """Best homogeneous distance over 0 < ||y|| < X via the record sequence."""
    cand = None
    for e in best.entries:
        if e.Y < X:
            cand = e.M
        else:
            break
    return cand


def _exponent(d, X: int) -> Optional[float]:
    lo, hi = enclose(d, 80) if not isinstance(d, Fraction) else (d, d)
    if hi == 0:
        return None  # exact hit
    mid = (lo + hi) / 2 if lo > 0 else hi
    return math.log(1 / float(mid)) / math.log(X)


def estimate_exponents(
    A: ApproxMatrix,
    b: Optional[Sequence[Fraction]],
    X_schedule: Sequence[int],
    budget: int = 1 << 22,
    best: Optional[BestApproxSequence] = None,
) -> ExponentEstimate:
    """Finite-horizon surrogates for the exponents: w_hat(A, b) is the max
    per-horizon best exponent; what_hat(tA) is the min over the schedule
    tail (a "for all large X" stand-in).  A vanishing distance reports the
    ExactHit sentinel."""
    xs = [int(x) for x in X_schedule]
    if any(x2 <= x1 for x1, x2 in zip(xs, xs[1:])) or xs[0] < 2:
        raise ValueError("X_schedule must be increasing with X >= 2")
    table = []
    w_hat: "float | ExactHit | None" = None
    hom_exps = []
    if best is None and (A.m, A.n) == (1, 1):
        from .lattice import best_approximations

        try:
            best = best_approximations(A, xs[-1])
        except Exception:
            best = None
    for X in xs:
        row: dict = {"X": X}
        if b is not None:
            bt = tuple(Fraction(x) if isinstance(x, (int, Fraction)) else x for x in b)
            d, q = _best_dist_enclosure(A, bt, X, budget)
            e = _exponent(d, X)
            if e is None:
                w_hat = EXACT_HIT
                row["w"] = "exact_hit"
            else:
                row["w"] = e
                if not isinstance(w_hat, ExactHit):
                    w_hat = e if w_hat is None else max(w_hat, e)
        if best is not None:
            d = _hom_dist_from_best(best, X)
        else:
            d, _ = _best_dist_enclosure(A.transpose(), None, X, budget)
        if d is not None:
            e = _exponent(d, X)
            row["what"] = e
            hom_exps.append(e)
        table.append(row)
    tail = hom_exps[len(hom_exps) // 2 :]
    what_hat = min(tail) if tail else None
    return ExponentEstimate(w_hat, what_hat, xs, table)
