"""Closed-form checks for the Yule-Simon visitor-count distribution.

Derived expectations are computed from independent oracles inside the tests:
partial sums of the pmf for the survival function, telescoping sums for the
mean, symbolic simplifications at alpha = 2 and alpha = 3 for the pmf, and
mpmath's arbitrary-precision loggamma for the log-Gamma wrapper.
"""

import math
import random

import mpmath
import numpy as np
import pytest
from scipy import stats

from yulesim import (
    ALPHA_MAX,
    DIVERGENT,
    DomainError,
    InconsistentExponentError,
    alpha_from_nu,
    log_gamma,
    nu_from_alpha,
    sample_yule,
    theory_rows,
    yule_mean,
    yule_pmf,
    yule_survival,
    yule_tail_approx,
)


class TestLogGamma:
    def test_known_values(self):
        assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
        assert log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)

    @pytest.mark.parametrize("x", [0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 170.5, 1e4, 1e6, 1e9])
    def test_against_mpmath(self, x):
        """Relative error stays below 1e-12 across the working range."""
        want = float(mpmath.loggamma(x))
        got = log_gamma(x)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-13)

    def test_array_path_matches_scalar(self):
        xs = np.array([0.5, 1.0, 2.5, 100.0, 1e6])
        out = log_gamma(xs)
        for x, v in zip(xs, out):
            assert v == pytest.approx(log_gamma(float(x)), rel=1e-13)

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)
        with pytest.raises(DomainError):
            log_gamma(np.array([1.0, x]))


class TestExponentMapping:
    def test_exact_points(self):
        assert alpha_from_nu(0.0) == 2.0
        assert alpha_from_nu(0.5) == pytest.approx(3.0, rel=1e-15)
        assert alpha_from_nu(0.1) == pytest.approx(19.0 / 9.0, rel=1e-15)

    def test_inverse_exact_points(self):
        assert nu_from_alpha(2.0) == 0.0
        assert nu_from_alpha(3.0) == pytest.approx(0.5, rel=1e-15)
        # alpha = 2.03 implies a novelty rate just under 0.03
        nu = nu_from_alpha(2.03)
        assert nu == pytest.approx(0.03 / 1.03, rel=1e-12)
        assert nu < 0.1

    def test_roundtrip(self):
        for nu in np.linspace(0.0, 0.99, 100):
            assert nu_from_alpha(alpha_from_nu(nu)) == pytest.approx(nu, abs=1e-12)

    def test_strictly_increasing(self):
        grid = np.linspace(0.0, 0.99, 250)
        alphas = alpha_from_nu(grid)
        assert np.all(np.diff(alphas) > 0)

    @pytest.mark.parametrize("nu", [-0.1, 1.0, 1.5])
    def test_nu_domain(self, nu):
        with pytest.raises(DomainError):
            alpha_from_nu(nu)

    def test_alpha_below_two_is_inconsistent(self):
        with pytest.raises(InconsistentExponentError):
            nu_from_alpha(1.8)

    @pytest.mark.parametrize("alpha", [1.0, 0.5, -2.0])
    def test_alpha_domain(self, alpha):
        with pytest.raises(DomainError):
            nu_from_alpha(alpha)


class TestPmf:
    def test_alpha2_closed_form(self):
        """At alpha=2 the pmf telescopes to 1/(n(n+1))."""
        for n in range(1, 101):
            assert yule_pmf(n, 2.0) == pytest.approx(1.0 / (n * (n + 1)), rel=1e-12)

    def test_alpha3_closed_form(self):
        """At alpha=3 the pmf telescopes to 4/(n(n+1)(n+2))."""
        for n in range(1, 101):
            want = 4.0 / (n * (n + 1) * (n + 2))
            assert yule_pmf(n, 3.0) == pytest.approx(want, rel=1e-12)

    def test_specific_values(self):
        assert yule_pmf(1, 2.0) == pytest.approx(0.5, rel=1e-12)
        assert yule_pmf(3, 2.0) == pytest.approx(1.0 / 12.0, rel=1e-12)
        assert yule_pmf(1, 3.0) == pytest.approx(2.0 / 3.0, rel=1e-12)

    @pytest.mark.parametrize("alpha", [2.0, 2.03, 2.5, 3.0, 5.0])
    def test_normalization_with_survival(self, alpha):
        """Partial sum to 1e4 plus the survival tail accounts for all mass."""
        ns = np.arange(1, 10**4 + 1)
        total = yule_pmf(ns, alpha).sum() + yule_survival(10**4, alpha)
        assert total == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("alpha", [1.5, 2.0, 2.5, 3.0, 10.0])
    def test_strictly_decreasing(self, alpha):
        vals = yule_pmf(np.arange(1, 2001), alpha)
        assert np.all(np.diff(vals) < 0)

    def test_no_overflow_at_large_n(self):
        v = yule_pmf(10**6, 2.0)
        assert 0.0 < v < 1e-11

    @pytest.mark.parametrize("n", [0, -3])
    def test_domain_n(self, n):
        with pytest.raises(DomainError):
            yule_pmf(n, 2.0)

    @pytest.mark.parametrize("alpha", [1.0, 0.3])
    def test_domain_alpha(self, alpha):
        with pytest.raises(DomainError):
            yule_pmf(1, alpha)


class TestSurvival:
    def test_total_probability(self):
        assert yule_survival(0, 2.5) == 1.0

    def test_alpha2_closed_form(self):
        """At alpha=2 the survival function collapses to 1/(n+1)."""
        assert yule_survival(4, 2.0) == pytest.approx(0.2, rel=1e-12)
        for n in range(0, 50):
            assert yule_survival(n, 2.0) == pytest.approx(1.0 / (n + 1), rel=1e-12)

    def test_one_minus_pmf(self):
        assert yule_survival(1, 3.0) == pytest.approx(1.0 - 2.0 / 3.0, rel=1e-12)

    @pytest.mark.parametrize("alpha", [2.0, 2.03, 2.5, 3.0, 5.0])
    def test_against_partial_sum_oracle(self, alpha):
        """Closed form must agree with brute-force partial sums of the pmf."""
        ns = np.arange(1, 2001)
        pmf = yule_pmf(ns, alpha)
        for n in (1, 2, 5, 17, 100, 1000, 2000):
            brute = 1.0 - pmf[:n].sum()
            assert yule_survival(n, alpha) == pytest.approx(brute, abs=1e-10)

    @pytest.mark.parametrize("alpha", [2.0, 2.5, 3.7])
    def test_recurrence(self, alpha):
        """survival(n-1) - pmf(n) = survival(n)."""
        for n in range(1, 500):
            lhs = yule_survival(n - 1, alpha) - yule_pmf(n, alpha)
            assert lhs == pytest.approx(yule_survival(n, alpha), abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            yule_survival(-1, 2.0)


class TestMean:
    def test_telescoping_oracle_alpha3(self):
        """Sum of n*pmf(n,3) telescopes to 2; partial sums close in at rate ~1/N."""
        assert yule_mean(3.0) == 2.0
        big_n = 10**5
        ns = np.arange(1, big_n + 1)
        partial = float((ns * yule_pmf(ns, 3.0)).sum())
        assert abs(partial - 2.0) <= 5.0 / big_n

    def test_divergent_marker(self):
        assert yule_mean(2.0) is DIVERGENT
        assert yule_mean(1.5) is DIVERGENT
        assert repr(DIVERGENT) == "DIVERGENT"

    def test_finite_values(self):
        assert yule_mean(4.0) == pytest.approx(1.5, rel=1e-15)
        assert yule_mean(2.5) == pytest.approx(3.0, rel=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            yule_mean(1.0)


class TestTailApprox:
    def test_relative_error_far_in_tail(self):
        exact = yule_pmf(1000, 2.0)
        approx = yule_tail_approx(1000, 2.0)
        assert abs(approx - exact) / exact < 0.005

    def test_not_valid_at_small_n(self):
        assert yule_tail_approx(1, 2.0) == pytest.approx(1.0, rel=1e-12)
        assert yule_pmf(1, 2.0) == pytest.approx(0.5, rel=1e-12)

    def test_variants_coincide_at_alpha2(self):
        full = yule_tail_approx(50, 2.0, with_prefactor=True)
        bare = yule_tail_approx(50, 2.0, with_prefactor=False)
        assert full == pytest.approx(bare, rel=1e-15)

    def test_variants_differ_elsewhere(self):
        full = yule_tail_approx(50, 3.0, with_prefactor=True)
        bare = yule_tail_approx(50, 3.0, with_prefactor=False)
        assert full == pytest.approx(2.0 * bare, rel=1e-12)

    @pytest.mark.parametrize("alpha", [2.0, 2.5, 3.0])
    def test_asymptotic_ratio(self, alpha):
        """pmf(n) * n**alpha / ((alpha-1) Gamma(alpha)) -> 1; within 1% at n=1e4."""
        n = 10**4
        ratio = yule_pmf(n, alpha) * n**alpha / ((alpha - 1.0) * math.gamma(alpha))
        assert ratio == pytest.approx(1.0, abs=0.01)


class _FixedUniform:
    def __init__(self, u):
        self.u = u

    def random(self):
        return self.u


class TestSampler:
    def test_inverse_cdf_hand_trace(self):
        """u=0.6 at alpha=2: survival(1)=0.5 < 0.6, so the draw is 1."""
        assert sample_yule(2.0, _FixedUniform(0.6)) == 1

    def test_inverse_cdf_boundaries(self):
        # survival(n, 2) = 1/(n+1): u in (1/3, 1/2] lands on n=2
        assert sample_yule(2.0, _FixedUniform(0.4)) == 2
        assert sample_yule(2.0, _FixedUniform(0.21)) == 4

    def test_deterministic_given_seed(self):
        rng_a, rng_b = random.Random(7), random.Random(7)
        a = [sample_yule(2.5, rng_a) for _ in range(200)]
        b = [sample_yule(2.5, rng_b) for _ in range(200)]
        assert a == b
        assert len(set(a)) > 3

    def test_sample_mean_matches_moment(self):
        """1e5 draws at alpha=3: sample mean within 3 estimated SEs of 2."""
        rng = random.Random(777)
        xs = np.array([sample_yule(3.0, rng) for _ in range(10**5)], dtype=float)
        se = xs.std(ddof=1) / math.sqrt(xs.size)
        assert abs(xs.mean() - 2.0) <= 3.0 * se

    def test_chi_square_against_pmf(self):
        """1e5 draws at alpha=2.5 vs exact bin probabilities on {1,2,3,4,>=5}."""
        rng = random.Random(1234)
        draws = [sample_yule(2.5, rng) for _ in range(10**5)]
        observed = np.bincount(np.minimum(draws, 5), minlength=6)[1:]
        n = len(draws)
        expected = [n * yule_pmf(k, 2.5) for k in (1, 2, 3, 4)]
        expected.append(n * yule_survival(4, 2.5))
        _, p = stats.chisquare(observed, expected)
        assert p >= 0.001

    def test_domain(self):
        with pytest.raises(DomainError):
            sample_yule(1.0, random.Random(0))


class TestTheoryRows:
    def test_alpha3_first_row(self):
        rows = list(theory_rows(3.0, 2))
        assert rows[0] == "1,0.666666666667,0.333333333333"

    def test_alpha2_first_row(self):
        rows = list(theory_rows(2.0, 1))
        assert rows == ["1,0.5,0.5"]

    def test_strictly_increasing_n_and_length(self):
        rows = list(theory_rows(2.5, 500))
        ns = [int(r.split(",")[0]) for r in rows]
        assert ns == list(range(1, 501))

    def test_chunk_boundary_consistency(self):
        """Row content must not depend on internal chunking."""
        rows = list(theory_rows(2.0, 70000))
        n, pmf, ccdf = rows[65536 - 1].split(",")
        assert int(n) == 65536
        assert float(pmf) == pytest.approx(yule_pmf(65536, 2.0), rel=1e-10)
        assert float(ccdf) == pytest.approx(yule_survival(65536, 2.0), rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            list(theory_rows(2.0, 0))

    def test_alpha_bracket_constant(self):
        assert ALPHA_MAX == 64.0
