"""Window machinery, psi witnesses, measure estimation, ubiquity parameters
and coverage."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from diophlab.errors import InvalidWindow, PrecisionExhausted
from diophlab.lattice import ApproxMatrix, return_sequence
from diophlab.limsup import (
    PowerLog,
    TablePsi,
    Window,
    check_u_regular,
    coverage,
    delta_membership,
    diameter_sum,
    measure_Bad,
    measure_W,
    psi_witness,
    ubiquity_params,
)
from diophlab.numeric import Radical, dist_to_int, ex_pow, lt, quadratic
from diophlab.sampling import sample_point


class TestApproxFunction:
    def test_powerlog_monotone_required(self):
        with pytest.raises(ValueError):
            PowerLog(F(1), F(-1), F(0))
        with pytest.raises(ValueError):
            PowerLog(F(-1), F(1), F(0))

    def test_value_bounds_rational_power(self):
        psi = PowerLog(F(1, 2), F(1), F(0))
        lo, hi = psi.value_bounds(10)
        assert lo == hi == F(1, 20)

    def test_value_bounds_fractional_power(self):
        psi = PowerLog(F(1), F(1, 2), F(0))  # q^(-1/2)
        lo, hi = psi.value_bounds(2)
        assert lo < hi
        assert float(lo) == pytest.approx(2 ** -0.5, rel=1e-9)

    def test_lt_value_exact_no_beta(self):
        psi = PowerLog(F(1), F(2), F(0))
        assert psi.lt_value(F(1, 101), 10)
        assert not psi.lt_value(F(1, 100), 10)  # equality, strict
        assert psi.lt_value(F(1, 100), 10, strict=False)

    def test_lt_value_with_log(self):
        psi = PowerLog(F(1), F(1), F(1))  # 1/(q ln q)
        # psi(100) = 1/(100 ln 100) ~ 0.00217
        assert psi.lt_value(F(1, 500), 100)
        assert not psi.lt_value(F(1, 100), 100)

    def test_table_monotone_validated(self):
        with pytest.raises(ValueError):
            TablePsi([(1, F(1, 4)), (10, F(1, 2))])
        t = TablePsi([(1, F(1, 2)), (10, F(1, 4))])
        assert t.value_at(5) == F(1, 2)
        assert t.value_at(10) == F(1, 4)

    @given(q=st.integers(min_value=1, max_value=10**6))
    def test_powerlog_bounds_bracket(self, q):
        psi = PowerLog(F(3, 2), F(2, 3), F(1, 2))
        lo, hi = psi.value_bounds(q)
        assert 0 < lo <= hi


class TestWindowWitness:
    def test_window_validation(self):
        with pytest.raises(InvalidWindow):
            Window(5, 5)

    def test_witness_golden(self, A_golden, golden):
        psi = PowerLog(F(1, 2), F(1), F(0))
        q = psi_witness(A_golden, (F(1, 3),), psi, Window(1, 64))
        assert q is not None
        s = q.norm
        assert lt(dist_to_int(golden * q.coords[0] - F(1, 3)), F(1, 2 * s))

    def test_witness_none_when_psi_tiny(self, A_golden):
        psi = PowerLog(F(1, 10**9), F(2), F(0))
        assert psi_witness(A_golden, (F(1, 3),), psi, Window(1, 32)) is None

    def test_delta_membership_halftorus(self, A_golden):
        # radius >= 1/2 covers everything
        assert delta_membership(A_golden, (F(1, 3),), F(1, 2), Window(1, 4))


class TestMeasure:
    def test_measure_w_matches_bruteforce(self, A_golden, golden):
        psi = PowerLog(F(1, 3), F(1), F(0))
        w = Window(1, 128)
        est = measure_W(A_golden, psi, w, 100, seed=11)
        hits = 0
        for i in range(100):
            b = sample_point(11, i, 1)[0]
            if any(
                lt(dist_to_int(golden * q - b), F(1, 3 * abs(q)))
                for s in w.shells
                for q in (-s, s)
            ):
                hits += 1
        assert est.fraction == F(hits, 100)

    def test_bad_complements_w(self, A_golden):
        w = Window(1, 256)
        delta = F(1, 100)
        bad = measure_Bad(A_golden, delta, w, 300, seed=3)
        psi = PowerLog(delta, F(1), F(0))
        good = measure_W(A_golden, psi, w, 300, seed=3)
        assert bad.fraction + good.fraction == 1

    def test_thread_invariance(self, A_golden):
        psi = PowerLog(F(1, 2), F(1), F(0))
        w = Window(1, 512)
        runs = [measure_W(A_golden, psi, w, 200, seed=9, threads=t) for t in (1, 4, 8)]
        assert runs[0].fraction == runs[1].fraction == runs[2].fraction
        assert runs[0].ci_low == runs[1].ci_low == runs[2].ci_low

    def test_grid_mode(self, A_golden):
        psi = PowerLog(F(1, 2), F(1), F(0))
        est = measure_W(A_golden, psi, Window(1, 64), 50, seed=0, mode="grid")
        assert est.samples == 50

    def test_ci_brackets_fraction(self, A_golden):
        psi = PowerLog(F(1), F(2), F(0))
        est = measure_W(A_golden, psi, Window(4, 64), 200, seed=1)
        assert est.ci_low <= est.fraction <= est.ci_high


class TestUbiquity:
    @pytest.fixture
    def params(self, A_golden):
        ret = return_sequence(A_golden, F(2, 5), 10)
        return ubiquity_params(ret, F(3))

    def test_scales(self, params):
        # u_i = (eps^-1 + 1)/2 * 2^l = 7/4 * 2^l for eps = 2/5
        assert params.levels[0].u == F(7, 2)
        assert params.levels[4].u == F(7, 4) * 32
        assert all(lv.l == params.c1 * lv.u for lv in params.levels)

    def test_c1_constraint(self, params):
        # (2 c2)^m C c1^n < 1/2, and c1 is the largest power of 1/2
        c2m = params.c2_pow_m
        assert lt(c2m * 2 * 3 * params.c1, F(1, 2))
        assert not lt(c2m * 2 * 3 * (2 * params.c1), F(1, 2))

    def test_rho_identity(self, params):
        # rho_i = (eps^-m + 1)/2 * eps * 2^(-(n/m) l_i) for m = n = 1
        for lv in params.levels:
            assert lv.rho_pow_m == F(7, 4) * F(2, 5) * F(1, 1 << lv.ell)

    def test_u_regular(self, params):
        assert check_u_regular(params, F(1, 2))
        # and it is sharp: rho ratio is exactly 1/2, so any smaller lambda fails
        assert not check_u_regular(params, F(49, 100))

    def test_coverage_high_at_top_level(self, A_golden, params):
        ce = coverage(A_golden, params, ((F(1, 2),), F(1, 8)), len(params.levels) - 1, 400, seed=2)
        assert ce.estimate.fraction > F(1, 2)

    def test_coverage_shortcircuit_large_rho(self, A_golden):
        ret = return_sequence(A_golden, F(2, 5), 2)
        params = ubiquity_params(ret, F(3))
        # level 1: rho = 7/20 but annulus tiny; force the rho >= 1/2 path
        params.levels[0].rho_pow_m = F(3, 4)
        ce = coverage(A_golden, params, ((F(1, 2),), F(1, 8)), 0, 50, seed=1)
        assert ce.estimate.fraction == 1


def test_diameter_sum_harmonic():
    # sum of 2 * psi(q) over q in (1, 1000], psi = 1/(2q): harmonic tail
    psi = PowerLog(F(1, 2), F(1), F(0))
    lo, hi = diameter_sum(psi, Window(1, 1000), 1, F(1))
    import math

    target = 2 * (sum(1 / (2 * q) for q in range(2, 1001)))
    assert float(lo) <= target * 2 + 1e-9  # counts each shell's 2 points
    assert float(lo) <= float(hi)
