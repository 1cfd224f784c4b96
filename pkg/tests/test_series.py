import math
import random
from fractions import Fraction

import numpy as np
import pytest

from thompson_density import series as S
from thompson_density.bbsets import find_special_occurrences, marked_height_fraction
from thompson_density.forest import count_marked_forests, enumerate_forests
from thompson_density.interval import Interval
from thompson_density.series import (
    GuardError,
    Polynomial,
    RootInterval,
    SeriesTable,
    bound_suite,
    phi_eval,
    phi_fixed,
    phi_polynomial,
    recurrence_check,
    series_alpha,
    series_beta,
    series_gamma,
    series_sigma,
    special_polynomial,
    xi,
)

GOLDEN = (math.sqrt(5) - 1) / 2


def fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def poly_eval(coeffs, x):
    return sum(c * x**i for i, c in enumerate(coeffs))


class TestPhi:
    def test_polynomials(self):
        assert phi_polynomial(0).coeffs == (0, 1)
        assert phi_polynomial(1).coeffs == (0, 1, 1)
        assert phi_polynomial(2).coeffs == (0, 1, 1, 2, 1)

    @pytest.mark.parametrize("k", range(0, 11))
    def test_degree_and_end_coefficients(self, k):
        p = phi_polynomial(k).coeffs
        assert len(p) - 1 == 2**k
        assert p[1] == 1 and p[-1] == 1
        assert all(c > 0 for c in p[1:])

    def test_coefficients_count_trees(self):
        # coefficient of x^n in Phi_k counts trees with n leaves and height <= k
        from thompson_density.forest import enumerate_trees

        for k in range(4):
            p = phi_polynomial(k).coeffs
            for n in range(1, len(p)):
                assert p[n] == len(enumerate_trees(n, k))

    def test_guard(self):
        with pytest.raises(GuardError):
            phi_polynomial(S.MAX_K + 1)

    def test_eval_examples(self):
        assert phi_eval(0, Fraction(1, 4)) == Fraction(1, 4)
        assert phi_eval(1, Fraction(1, 4)) == Fraction(5, 16)
        with pytest.raises(ValueError):
            phi_eval(-1, Fraction(1, 2))

    def test_eval_matches_expansion(self):
        rng = random.Random(2024)
        for k in range(0, 13):
            coeffs = phi_polynomial(k).coeffs
            for _ in range(100 if k < 9 else 5):
                x = Fraction(rng.randint(-50, 50), rng.randint(1, 60))
                if k >= 9:
                    x = Fraction(rng.randint(0, 9), 40)
                assert phi_eval(k, x) == poly_eval(coeffs, x)

    @pytest.mark.parametrize("k", [1, 2, 5, 10, 100, 1000, 7200])
    def test_quarter_below_half(self, k):
        assert phi_eval(k, Interval.exact(Fraction(1, 4))).hi < 0.5

    def test_interval_eval_encloses_exact(self):
        for k in range(1, 9):
            for x in (Fraction(1, 3), Fraction(2, 7), Fraction(5, 11)):
                assert phi_eval(k, Interval.exact(x)).contains(phi_eval(k, x))

    def test_fixed_point_bounds(self):
        for k in range(1, 9):
            x = Fraction(3, 10)
            lo, hi = phi_fixed(k, x, bits=64)
            assert lo <= phi_eval(k, x) <= hi
        lo, hi = phi_fixed(3, Fraction(1, 4))
        assert lo == hi == phi_eval(3, Fraction(1, 4))
        lo, hi = phi_fixed(40, Fraction(1), cap=Fraction(10))
        assert hi is None and lo > 10


class TestXi:
    def test_k0(self):
        r = xi(0)
        assert r.lo == r.hi == 1.0

    def test_k1_golden(self):
        r = xi(1, 1e-13)
        assert r.lo <= GOLDEN <= r.hi
        assert abs(r.interval.mid - GOLDEN) < 1e-12

    def test_k2_against_numpy(self):
        roots = np.roots([1, 2, 1, 1, -1])
        real_pos = [z.real for z in roots if abs(z.imag) < 1e-12 and z.real > 0]
        assert len(real_pos) == 1
        r = xi(2)
        assert r.lo - 1e-12 <= real_pos[0] <= r.hi + 1e-12
        assert abs(r.interval.mid - 0.4840) < 1e-4

    @pytest.mark.parametrize("k", range(3, 9))
    def test_against_numpy(self, k):
        coeffs = phi_polynomial(k).coeffs
        roots = np.roots(list(reversed([c - (1 if i == 0 else 0) for i, c in enumerate(coeffs)])))
        real_pos = [z.real for z in roots if abs(z.imag) < 1e-9 and z.real > 0]
        assert len(real_pos) == 1
        # companion-matrix roots lose accuracy as the degree 2^k grows
        assert abs(real_pos[0] - xi(k).interval.mid) < (1e-9 if k <= 6 else 1e-6)

    def test_certificate(self):
        for k in (1, 2, 3, 10, 64, 500):
            r = xi(k)
            assert S.phi_upper(k, r.lo) <= 1.0 <= S.phi_lower(k, r.hi)
            assert r.hi - r.lo <= r.tol

    @pytest.mark.parametrize("k", range(1, 65))
    def test_root_location(self, k):
        r = xi(k)
        assert r.lo > 0.25
        assert r.hi < 0.25 + 1.5 / k

    def test_monotone_decreasing(self):
        mids = [xi(k).interval.mid for k in range(1, 40)]
        assert all(a > b for a, b in zip(mids, mids[1:]))

    def test_rejects(self):
        with pytest.raises(ValueError):
            xi(-1)
        with pytest.raises(ValueError):
            xi(2, 0)

    def test_json_roundtrip(self):
        r = xi(7)
        assert RootInterval.from_json(r.to_json()) == r
        assert '"lo_hex"' in S.root_interval_json(r)

    def test_large_k_fast(self):
        r = xi(7200)
        assert 0.25 < r.lo < r.hi < 0.2501


class TestSeries:
    def test_alpha_fibonacci(self):
        assert series_alpha(1, 5).coefficients == (1, 1, 2, 3, 5, 8)
        a = series_alpha(1, 30)
        assert all(a[n] == fib(n + 1) for n in range(31))

    def test_spot_values(self):
        assert series_beta(1, 3)[2] == 3
        assert series_beta(1, 3)[3] == 7
        assert series_gamma(1, 4)[4] == 20

    def test_gamma_is_convolution_square(self):
        a = series_alpha(2, 20).coefficients
        g = series_gamma(2, 20)
        for n in range(21):
            assert g[n] == sum(a[i] * a[n - i] for i in range(n + 1))

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_against_enumeration(self, k):
        N = 11 if k == 3 else 12
        a, b = series_alpha(k, N), series_beta(k, N)
        for n in range(1, N + 1):
            assert a[n] == sum(1 for _ in enumerate_forests(n, k))
            assert b[n] == count_marked_forests(n, k)

    @pytest.mark.parametrize("k", [1, 2])
    def test_sigma_against_enumeration(self, k):
        s = series_sigma(k, 13)
        for n in range(1, 14):
            assert s[n] == sum(1 for _ in find_special_occurrences(n, k))

    def test_sigma_examples(self):
        s2 = series_sigma(2, 12)
        assert all(s2[n] == 0 for n in range(10))
        assert s2[10] == 4
        assert series_sigma(1, 8)[8] == 1

    def test_special_polynomial(self):
        assert list(special_polynomial(1).coeffs) == [0] * 8 + [1]
        c = special_polynomial(2).coeffs
        assert c[0] == 0 and min(i for i, v in enumerate(c) if v) == 10
        with pytest.raises(ValueError):
            special_polynomial(0)

    def test_dispatch(self):
        assert S.series("beta", 1, 3) == series_beta(1, 3)
        with pytest.raises(ValueError):
            S.series("delta", 1, 3)

    def test_work_guard(self):
        with pytest.raises(GuardError):
            series_alpha(20, 5000)
        with pytest.raises(GuardError):
            series_alpha(21, 1)
        with pytest.raises(ValueError):
            series_alpha(1, -1)

    def test_csv_roundtrip(self):
        t = series_sigma(2, 12)
        text = t.to_csv()
        assert text.splitlines()[0] == "kind,k,n,coefficient"
        assert text.splitlines()[11] == "sigma,2,10,4"
        assert SeriesTable.from_csv(text) == t
        with pytest.raises(ValueError):
            SeriesTable.from_csv("kind,k,n,coefficient\n")


class TestRecurrence:
    @pytest.mark.parametrize("kind", ["alpha", "gamma", "beta", "sigma"])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_tables_pass(self, kind, k):
        assert recurrence_check(k, S.series(kind, k, 30))

    @pytest.mark.parametrize("kind", ["alpha", "gamma", "beta", "sigma"])
    def test_corruption_detected(self, kind):
        t = S.series(kind, 2, 30)
        for pos in (0, 5, 17, 30):
            c = list(t.coefficients)
            c[pos] += 1
            assert not recurrence_check(2, SeriesTable(kind, 2, tuple(c)))

    def test_custom_table(self):
        # the recurrence alone: shifted Fibonacci-like seeds still satisfy it
        c = [2, 5]
        for _ in range(20):
            c.append(c[-1] + c[-2])
        assert recurrence_check(1, SeriesTable("custom", 1, tuple(c)))

    def test_alpha2_mixed_oracle(self):
        # enumeration up to 14, then the recurrence extends independently
        p = phi_polynomial(2).coeffs
        vals = [1] + [sum(1 for _ in enumerate_forests(n, 2)) for n in range(1, 15)]
        while len(vals) <= 30:
            n = len(vals)
            vals.append(sum(p[i] * vals[n - i] for i in range(1, 5)))
        assert tuple(vals) == series_alpha(2, 30).coefficients
        assert recurrence_check(2, SeriesTable("alpha", 2, tuple(vals)))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            recurrence_check(1, SeriesTable("zeta", 1, (1, 1, 2, 3, 5)))


class TestRatios:
    def test_alpha1_golden(self):
        assert S.ratio_limit_check(series_alpha(1, 30), 1) < 1e-6

    def test_beta2_decreasing(self):
        b = series_beta(2, 60)
        devs = [d for n, d in S.ratio_deviations(b, xi(2).interval.mid) if 40 <= n <= 60]
        assert all(x > y for x, y in zip(devs, devs[1:]))
        assert S.ratio_limit_check(b, 2, window=1) < 1e-2

    def test_beta2_eventually_below_1e3(self):
        # the double pole makes the error decay like 1/n
        b = series_beta(2, 700)
        assert S.ratio_limit_check(b, 2, window=1) < 1e-3

    def test_sigma_over_gamma(self):
        s, g = series_sigma(2, 60), series_gamma(2, 60)
        assert S.ratio_limit_check(s, 2, window=1, denominator=g) < 1e-2


class TestClosedForms:
    def test_p_limit(self):
        p = S.p_limit()
        assert p.certainly_gt(Fraction(1, 1200))
        assert abs(p.mid - 3 / 64 * (1 - math.sqrt(3) / 2) ** 2) < 1e-15
        assert ((p / 2) / (1 - 3 * p)).certainly_gt(Fraction(1, 2400))

    def test_p_limit_exact_integer_oracle(self):
        # p > 1/1200  <=>  1 - sqrt3/2 > 2/15  <=>  sqrt3 < 26/15  <=>  3 * 15^2 < 26^2
        assert 3 * 15**2 < 26**2
        assert Fraction(3, 64) * (Fraction(2, 15)) ** 2 == Fraction(1, 1200)

    def test_p_at_xi_k1(self):
        closed = S.p_at_xi(1)
        assert abs(closed.mid - GOLDEN**8) < 1e-12
        assert abs(closed.mid - poly_eval(special_polynomial(1).coeffs, GOLDEN)) < 1e-12
        assert abs(closed.mid - 0.021286) < 1e-5

    @pytest.mark.parametrize("k", [2, 3, 5])
    def test_p_closed_form_matches_polynomial(self, k):
        r = xi(k).interval.mid
        assert abs(S.p_at_xi(k).mid - poly_eval(special_polynomial(k).coeffs, r)) < 1e-9

    def test_p_converges(self):
        p = S.p_limit().mid
        dists = [abs(S.p_at_xi(k).mid - p) for k in (10, 100, 1000)]
        assert dists[0] > dists[1] > dists[2]

    def test_p_rejects_k0(self):
        with pytest.raises(ValueError):
            S.p_at_xi(0)

    def test_density_bb(self):
        assert S.density_limit_bb(0).contains(2)
        assert abs(S.density_limit_bb(2).mid - 3.0320) < 1e-4
        assert abs(S.density_limit_bb(10**5).mid - 3.5) < 1e-3
        assert abs(S.density_limit_bb_three(1).mid - (6 - 4 * GOLDEN)) < 1e-12

    def test_bb_prime(self):
        assert S.density_limit_bb_prime(7200).certainly_gt(3.5004)
        assert S.density_limit_bb_prime(2).certainly_lt(S.density_limit_bb(2))
        assert S.limit_bb_prime_infinity().certainly_gt(3.5 + 1 / 2400)

    def test_thm2(self):
        assert S.density_limit_thm2(7200).certainly_gt(5.0008)
        assert S.limit_thm2_infinity().certainly_gt(5 + 1 / 1200)
        with pytest.raises(ValueError):
            S.density_limit_thm2(0)

    def test_limits_approach_infinity_values(self):
        inf = S.limit_bb_prime_infinity().mid
        assert S.density_limit_bb_prime(100).mid < S.density_limit_bb_prime(10**4).mid < inf

    def test_minimal_k(self):
        k = S.minimal_k_exceeding(3.5)
        assert k is not None
        assert S.density_limit_bb_prime(k).certainly_gt(3.5)
        assert not S.density_limit_bb_prime(k - 1).certainly_gt(3.5)

    def test_prob_marked_height(self):
        assert abs(S.prob_marked_height_k(1).mid - 0.3820) < 1e-4
        assert abs(S.prob_marked_height_k(10**5).mid - (1 - math.sqrt(3) / 2)) < 1e-3
        emp = marked_height_fraction(14, 1)
        assert abs(float(emp) - S.prob_marked_height_k(1).mid) < 0.05

    def test_fit_exponent_is_finite(self):
        e = S.xi_fit_exponent([100, 200, 400, 800])
        assert -3 < e < -1


class TestBoundSuite:
    def test_k0_equality_case(self):
        assert phi_eval(0, Fraction(1, 4)) == Fraction(1, 2) - Fraction(1, 4)

    def test_d_at_k1(self):
        assert phi_eval(1, Fraction(1, 4) + Fraction(3, 2)) == Fraction(7, 4) + Fraction(49, 16)

    def test_all_pass_to_64(self):
        rep = bound_suite(64)
        assert rep.ok and rep.checked == 64 and rep.first_failure is None

    def test_w_coefficient(self):
        assert S.w_coefficient(0) == Fraction(4, 3) - Fraction(1, 3)

    def test_report_json(self):
        assert bound_suite(3).to_json() == {"k_max": 3, "checked": 3, "first_failure": None, "ok": True}


class TestPolynomial:
    def test_arithmetic(self):
        x = Polynomial([0, 1])
        assert list((x * x + x).coeffs) == list(phi_polynomial(1).coeffs)
        assert list((phi_polynomial(2) - phi_polynomial(1)).coeffs[:4]) == [0, 0, 0, 2]

    def test_convolve_limit(self):
        assert S.convolve([1, 1], [1, 1]) == [1, 2, 1]
        assert S.convolve([1, 1], [1, 1], 2) == [1, 2]
