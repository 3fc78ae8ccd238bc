import math

import numpy as np
import pytest

from flightdeck.stats.distributions import (
    betainc,
    f_cdf,
    f_sf,
    norm_cdf,
    normal_range_cdf,
    studentized_range_cdf,
    studentized_range_sf,
    t_cdf,
    t_ppf,
)


def t_cdf_nu2(x):
    """Closed form for Student's t CDF at 2 dof: 1/2 + x / (2 sqrt(2 + x^2))."""
    return 0.5 + x / (2 * math.sqrt(2 + x * x))


class TestBetainc:
    def test_endpoints(self):
        assert betainc(2, 3, 0.0) == 0.0
        assert betainc(2, 3, 1.0) == 1.0

    def test_uniform_special_case(self):
        # I_x(1, 1) is the identity.
        for x in np.linspace(0, 1, 11):
            assert betainc(1, 1, x) == pytest.approx(x, abs=1e-12)

    def test_symmetry_identity(self, rng):
        # I_x(a, b) = 1 - I_{1-x}(b, a)
        for _ in range(300):
            a, b = rng.uniform(0.2, 20, 2)
            x = rng.uniform(0, 1)
            assert betainc(a, b, x) == pytest.approx(1 - betainc(b, a, 1 - x), abs=1e-10)

    def test_closed_form_integer_case(self):
        # I_x(2, 2) = x^2 (3 - 2x)
        for x in np.linspace(0, 1, 21):
            assert betainc(2, 2, x) == pytest.approx(x * x * (3 - 2 * x), abs=1e-12)

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            betainc(0, 1, 0.5)


class TestFDistribution:
    def test_cdf_at_zero(self):
        assert f_cdf(0, 3, 10) == 0.0
        assert f_sf(0, 3, 10) == 1.0

    def test_cdf_monotone(self):
        xs = np.linspace(0, 20, 200)
        vals = [f_cdf(x, 4, 12) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_cdf_sf_complement(self, rng):
        for _ in range(100):
            x = rng.uniform(0, 10)
            d1, d2 = rng.integers(1, 30, 2)
            assert f_cdf(x, d1, d2) + f_sf(x, d1, d2) == pytest.approx(1.0, abs=1e-12)

    def test_matches_t_squared_identity_on_grid(self):
        # For df1 = 1, F = T^2: F_cdf(x; 1, nu) = 2*t_cdf(sqrt(x); nu) - 1.
        # At nu = 2 the t CDF has a closed form, giving an independent oracle.
        for x in np.linspace(0.05, 25, 100):
            expected = 2 * t_cdf_nu2(math.sqrt(x)) - 1
            assert f_cdf(x, 1, 2) == pytest.approx(expected, abs=1e-8)

    def test_median_of_f_1_1(self):
        # F(1,1) median is 1 by symmetry of the ratio.
        assert f_cdf(1.0, 1, 1) == pytest.approx(0.5, abs=1e-10)


class TestTDistribution:
    def test_cdf_against_nu2_closed_form(self):
        for x in np.linspace(-8, 8, 100):
            assert t_cdf(x, 2) == pytest.approx(t_cdf_nu2(x), abs=1e-10)

    def test_ppf_inverts_cdf(self, rng):
        for _ in range(50):
            p = rng.uniform(0.01, 0.99)
            df = int(rng.integers(2, 40))
            assert t_cdf(t_ppf(p, df), df) == pytest.approx(p, abs=1e-9)

    def test_known_quantile(self):
        # t_{0.975, 11} = 2.200985... (standard table value)
        assert t_ppf(0.975, 11) == pytest.approx(2.200985, abs=1e-5)


class TestNormalRange:
    def test_k2_closed_form(self):
        # Range of two normals: |X1 - X2| ~ |N(0, 2)|, so
        # P(range <= r) = 2 Phi(r / sqrt(2)) - 1.
        for r in np.linspace(0.1, 6, 30):
            expected = 2 * norm_cdf(r / math.sqrt(2)) - 1
            assert normal_range_cdf(r, 2) == pytest.approx(expected, abs=1e-8)

    def test_monte_carlo_oracle(self, rng):
        z = rng.standard_normal((200_000, 4))
        r = z.max(axis=1) - z.min(axis=1)
        for q in (1.0, 2.5, 4.0):
            est = float(np.mean(r <= q))
            se = math.sqrt(est * (1 - est) / len(r))
            assert abs(normal_range_cdf(q, 4) - est) < 4 * se + 1e-9


class TestStudentizedRange:
    def test_bounds_and_monotonicity(self):
        ps = [studentized_range_sf(q, 3, 12) for q in np.linspace(0.1, 12, 40)]
        assert all(0.0 <= p <= 1.0 for p in ps)
        assert all(b <= a + 1e-12 for a, b in zip(ps, ps[1:]))

    def test_increasing_df_tightens_the_tail(self):
        assert studentized_range_sf(4.0, 3, 60) < studentized_range_sf(4.0, 3, 5)

    def test_cdf_sf_complement(self):
        for q in (1.0, 3.0, 5.0):
            total = studentized_range_cdf(q, 3, 10) + studentized_range_sf(q, 3, 10)
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_monte_carlo_oracle_small(self, rng):
        # Scaled-down version of the acceptance check (10^6 samples here).
        k, df = 3, 6
        n = 1_000_000
        z = rng.standard_normal((n, k))
        s = np.sqrt(rng.chisquare(df, size=n) / df)
        q_samples = (z.max(axis=1) - z.min(axis=1)) / s
        for q in (2.0, 4.24264068711928, 6.0):
            est = float(np.mean(q_samples >= q))
            se = math.sqrt(max(est * (1 - est), 1e-12) / n)
            assert abs(studentized_range_sf(q, k, df) - est) <= 4 * se + 1e-6

    def test_tabulated_critical_value(self):
        # q_{0.05}(k=3, df=24) = 3.532 from standard studentized range tables.
        assert studentized_range_sf(3.532, 3, 24) == pytest.approx(0.05, abs=2e-3)
