"""Lattice layer: shell enumeration, homogeneous solver vs a brute-force
oracle, return sequences, best approximations vs continued fractions."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from diophlab.errors import RankDeficient, UnsupportedEntry
from diophlab.lattice import (
    ApproxMatrix,
    IntVec,
    bad_witness,
    best_approximations,
    check_rank,
    continued_fraction,
    iter_shell,
    return_sequence,
    shell_size,
    solve_homogeneous,
)
from diophlab.numeric import CFReal, Quadratic, dist_to_int, enclose, lt, quadratic


class TestShells:
    @given(n=st.integers(min_value=1, max_value=3), s=st.integers(min_value=0, max_value=4))
    def test_shell_size_matches_enumeration(self, n, s):
        pts = list(iter_shell(n, s))
        assert len(pts) == shell_size(n, s)
        assert len(set(pts)) == len(pts)
        assert all(max(abs(c) for c in p) == s for p in pts) or s == 0

    def test_shells_partition_box(self):
        box = {p for s in range(4) for p in iter_shell(2, s)}
        assert box == {(i, j) for i in range(-3, 4) for j in range(-3, 4)}

    def test_lex_order_within_shell(self):
        pts = list(iter_shell(1, 2))
        assert pts == [(-2,), (2,)]


def brute_solve(A, C, X):
    """Independent oracle: scan every q with 0 < ||q|| < X in any order,
    return the set of solutions of ||Aq||_Z < C (floats are fine: the cases
    below are far from the boundary)."""
    import itertools, math

    sols = set()
    rng = range(-X + 1, X)
    for q in itertools.product(rng, repeat=A.n):
        if all(c == 0 for c in q):
            continue
        ok = True
        for i in range(A.m):
            v = sum(float(A.rows[i][j]) * q[j] for j in range(A.n))
            if abs(v - round(v)) >= C:
                ok = False
                break
        if ok:
            sols.add(q)
    return sols


class TestSolveHomogeneous:
    def test_agrees_with_brute_oracle_1d(self, A_golden):
        for C, X in [(0.2, 8), (0.05, 16), (0.3, 32)]:
            got = solve_homogeneous(A_golden, F(C).limit_denominator(100), X)
            want = brute_solve(A_golden, C, X)
            if want:
                assert got is not None and got.coords in want
            else:
                assert got is None

    def test_agrees_with_brute_oracle_2d(self, sqrt2):
        # entries must share the radicand; perturb the second one rationally
        A = ApproxMatrix([[sqrt2, sqrt2 * 3 + F(1, 7)]])
        for C, X in [(0.25, 5), (0.1, 7)]:
            got = solve_homogeneous(A, F(C).limit_denominator(1000), X)
            want = brute_solve(A, C, X)
            assert (got is None) == (not want)
            if got is not None:
                assert got.coords in want

    def test_minimal_norm_first(self, A_golden):
        q = solve_homogeneous(A_golden, F(3, 10), 32)
        assert q is not None
        # no strictly smaller shell contains a solution
        want = brute_solve(A_golden, 0.3, 32)
        assert q.norm == min(max(abs(c) for c in w) for w in want)


class TestReturnSequence:
    def test_golden_full_range(self, A_golden):
        ret = return_sequence(A_golden, F(2, 5), 12)
        assert ret.levels == list(range(1, 13))

    def test_rational_entry_dies_fast(self):
        A = ApproxMatrix([[F(1, 2)]])
        ret = return_sequence(A, F(2, 5), 6)
        # q = 2 kills every level with 2 < 2^l; level 1 survives (q = 1
        # gives distance 1/2, not < 0.2)
        assert ret.levels == [1]

    def test_epsilon_monotone(self, A_golden):
        # smaller eps -> weaker homogeneous demand -> more levels survive
        small = return_sequence(A_golden, F(1, 5), 8)
        large = return_sequence(A_golden, F(2, 5), 8)
        assert set(large.levels) <= set(small.levels)

    def test_brute_oracle(self, A_golden, golden):
        # independent double loop, exact arithmetic
        eps = F(2, 5)
        want = []
        for ell in range(1, 9):
            hit = False
            for q in range(1, 2**ell):
                if lt(dist_to_int(golden * q), eps * F(1, 2**ell)):
                    hit = True
                    break
            if not hit:
                want.append(ell)
        assert return_sequence(A_golden, eps, 8).levels == want


class TestBadWitness:
    def test_golden_small_horizon(self, A_golden):
        val, q = bad_witness(A_golden, 8)
        # min over q of |q| * ||q phi|| is attained at |q| = 1: (3 - sqrt5)/2
        lo, hi = enclose(val, 60)
        assert abs(float(lo) - 0.3819660112501051) < 1e-12
        assert q.norm == 1


class TestBestApproximations:
    def test_golden_fibonacci(self, A_golden):
        seq = best_approximations(A_golden, 21)
        assert [e.Y for e in seq.entries] == [1, 2, 3, 5, 8, 13, 21]

    def test_sqrt2(self, A_sqrt2):
        seq = best_approximations(A_sqrt2, 12)
        assert [e.Y for e in seq.entries] == [1, 2, 5, 12]

    def test_matches_cf_convergents(self, A_sqrt2, sqrt2):
        cf = continued_fraction(sqrt2, 10)
        # convergent denominators from the quotients
        p0, q0, p1, q1 = 1, 0, 0, 1
        dens = []
        for a in cf.quotients:
            p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
            dens.append(q0)
        got = [e.Y for e in best_approximations(A_sqrt2, 1000).entries]
        assert got == [d for d in dens if 1 <= d <= 1000]

    def test_records_strictly_decrease(self, A_golden):
        seq = best_approximations(A_golden, 100)
        for a, b in zip(seq.entries, seq.entries[1:]):
            assert lt(b.M, a.M)
            assert b.Y > a.Y

    def test_cfreal_fast_path(self, A_cf):
        seq = best_approximations(A_cf, 2**40)
        assert [e.Y for e in seq.entries] == [1, 4, 65, 16644, 1090781249]

    def test_rational_rank_deficient(self):
        with pytest.raises(RankDeficient):
            best_approximations(ApproxMatrix([[F(1, 2)]]), 10)

    def test_generic_scan_agrees_with_fast_path(self, golden):
        A = ApproxMatrix([[golden]])
        from diophlab.lattice import _best_approximations_scan

        fast = best_approximations(A, 60)
        slow = _best_approximations_scan(A, 60, 1 << 22)
        assert [e.Y for e in fast.entries] == [e.Y for e in slow.entries]


class TestRank:
    def test_single_irrational(self, A_sqrt2):
        assert check_rank(A_sqrt2)

    def test_rational_fails(self):
        assert not check_rank(ApproxMatrix([[F(1, 2)]]))

    def test_dependent_combination_fails(self, sqrt2):
        # second entry = first entry rational multiple modulo rationals:
        # y = (1, -1)... for a 2x1 matrix rows (sqrt2, sqrt2) the difference
        # of rows is rational
        A = ApproxMatrix([[sqrt2], [sqrt2 + F(1, 3)]])
        assert not check_rank(A)

    def test_independent_pair(self, sqrt2):
        A = ApproxMatrix([[sqrt2, sqrt2 * 3 + F(1, 7)]])
        assert check_rank(A)

    def test_cf_unsupported(self, A_cf):
        with pytest.raises(UnsupportedEntry):
            check_rank(A_cf)


class TestContinuedFraction:
    def test_rational_terminates(self):
        cf = continued_fraction(F(7, 3), 20)
        assert cf.quotients == [2, 3] and cf.terminated

    def test_golden_period(self, golden):
        cf = continued_fraction(golden, 12)
        assert cf.quotients[0] == 0
        assert cf.period == [1]

    def test_sqrt2_period(self, sqrt2):
        cf = continued_fraction(sqrt2, 12)
        assert cf.quotients[0] == 1 and cf.period == [2]

    @given(x=st.fractions(min_value=F(-50), max_value=F(50), max_denominator=500))
    def test_rational_roundtrip(self, x):
        cf = continued_fraction(x, 60)
        # rebuild from quotients
        v = F(cf.quotients[-1])
        for a in reversed(cf.quotients[:-1]):
            v = a + 1 / v
        assert v == x


class TestMatrixIO:
    def test_text_roundtrip(self, golden, sqrt2):
        A = ApproxMatrix([[golden]])
        assert ApproxMatrix.from_text(A.to_text()).rows == A.rows
        B = ApproxMatrix([[F(1, 3), sqrt2]])
        assert ApproxMatrix.from_text(B.to_text()).rows == B.rows

    def test_bad_header(self):
        with pytest.raises(ValueError):
            ApproxMatrix.from_text("1\n1/2\n")
