import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import simpson

from weibull_benford.core_math import complex_gamma, gamma_modulus_one_plus_ix
from weibull_benford.errors import ConvergenceError, DomainError, PreconditionError
from weibull_benford.montecarlo import empirical_log_mod1_cdf
from weibull_benford.series import (
    DensityTrace,
    cdf_direct,
    cdf_series,
    density_trace,
    f_prime_direct,
    f_prime_series,
    fourier_coefficients,
    min_terms_for_bound,
    series_tail,
    terms_for_epsilon,
    truncation_bound,
    truncation_constants,
    z_grid,
)
from weibull_benford.weibull import WeibullParams

GAMMAS = [0.5, 1, 2, 5, 10]
EXP = WeibullParams(1.0, 1.0)

# mpmath, 40 digits: 1 + 2 Re Gamma(1 + 2*pi*i/ln 10)
F_PRIME_M1_Z0 = 1.082159569475578095408952150250684121968
# mpmath nsum of the scale-by-scale cdf sum over all integers k
CDF_EXACT = {
    (1.0, 0.5): 0.5251154551967661245495453204920117107263,
    (2.0, 0.5): 0.4539550529809327880811158692216333804866,
    (1.0, math.log10(2)): 0.3296569783306346144678927316780378949941,
}


def test_first_harmonic_only():
    c1 = complex_gamma(complex(1, 2 * math.pi / math.log(10)))
    v = f_prime_series(0.0, EXP, 10, 1)
    assert v == pytest.approx(1 + 2 * c1.real, rel=1e-15)
    assert v == pytest.approx(F_PRIME_M1_Z0, rel=1e-13)
    assert abs(c1) == pytest.approx(0.056959, rel=1e-4)


def test_coefficients_are_gamma_values():
    c = fourier_coefficients(2.0, 10, 3)
    for m, cm in enumerate(c, start=1):
        assert cm == complex_gamma(complex(1, 2 * math.pi * m / (2.0 * math.log(10))))


@pytest.mark.parametrize("M", [1, 3, 20])
@pytest.mark.parametrize("gamma", [0.5, 2, 10])
def test_series_integrates_to_one(M, gamma):
    z = np.linspace(0, 1, 4097)
    v = f_prime_series(z, WeibullParams(1.7, gamma), 10, M)
    assert simpson(v, x=z) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("gamma", GAMMAS)
@pytest.mark.parametrize("base", [2, 10])
def test_alpha_periodicity(gamma, base):
    z = np.linspace(0, 1, 257)
    for alpha in (1.0, 2.0, 5.0):
        p, q = WeibullParams(alpha, gamma), WeibullParams(alpha * base, gamma)
        np.testing.assert_allclose(f_prime_series(z, p, base, 30), f_prime_series(z, q, base, 30), atol=1e-12)
        np.testing.assert_allclose(f_prime_direct(z, p, base), f_prime_direct(z, q, base), atol=1e-12)


def test_series_returns_scalar_for_scalar():
    assert isinstance(f_prime_series(0.3, EXP, 10, 4), float)
    assert isinstance(cdf_series(0.3, EXP, 10, 4), float)
    assert isinstance(f_prime_direct(0.3, EXP, 10), float)
    assert isinstance(cdf_direct(0.3, EXP, 10), float)


@pytest.mark.parametrize("z", [-0.01, 1.01, float("nan")])
def test_z_outside_unit_interval(z):
    with pytest.raises(DomainError):
        f_prime_series(z, EXP, 10, 3)
    with pytest.raises(DomainError):
        cdf_direct(z, EXP, 10)


def test_conjugate_pair_is_twice_real_part():
    # two-sided sum over +m and -m before the conjugate pairing is applied
    lb = math.log(10.0)
    for gamma, alpha in [(1.0, 1.0), (2.0, 3.3), (0.5, 7.0)]:
        for z in (0.0, 0.123, 0.77):
            zeta = 10.0**z
            for m in (1, 2, 5):
                x = 2 * math.pi * m / (gamma * lb)
                plus = (zeta / alpha) ** complex(0, 2 * math.pi * m / lb) * complex_gamma(complex(1, -x))
                minus = (zeta / alpha) ** complex(0, -2 * math.pi * m / lb) * complex_gamma(complex(1, x))
                pair = plus + minus
                single = np.exp(-2j * math.pi * m * (z - math.log(alpha) / lb)) * complex_gamma(complex(1, x))
                scale = max(abs(pair), 1e-300)
                assert abs(pair.imag) <= 1e-12 * max(scale, 1.0)
                assert abs(pair.real - 2 * single.real) <= 1e-12 * max(scale, 1.0)


class TestDirect:
    def test_matches_series(self):
        z = 0.5
        plan = terms_for_epsilon(1e-10, 1.0, 10)
        assert f_prime_direct(z, EXP, 10, 1e-16) == pytest.approx(f_prime_series(z, EXP, 10, plan.terms), abs=1e-8)

    @pytest.mark.parametrize("gamma,base", [(0.5, 2), (1, 10), (10, 10)])
    def test_density_integrates_to_one(self, gamma, base):
        z = np.linspace(0, 1, 4097)
        assert simpson(f_prime_direct(z, WeibullParams(3.0, gamma), base), x=z) == pytest.approx(1.0, abs=1e-8)

    def test_cdf_endpoints(self):
        for gamma in GAMMAS:
            p = WeibullParams(2.0, gamma)
            assert cdf_direct(0.0, p, 10) == 0.0
            assert cdf_direct(1.0, p, 10) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("key", sorted(CDF_EXACT))
    def test_cdf_against_high_precision_sum(self, key):
        gamma, z = key
        assert cdf_direct(z, WeibullParams(1.0, gamma), 10) == pytest.approx(CDF_EXACT[key], abs=1e-14)

    def test_cdf_nondecreasing(self):
        v = cdf_direct(np.linspace(0, 1, 1001), WeibullParams(1.0, 4.0), 10)
        assert np.all(np.diff(v) >= 0)

    def test_cdf_against_monte_carlo(self):
        n = 1_000_000
        est = empirical_log_mod1_cdf(EXP, 10, n, seed=77, z=0.5)
        exact = cdf_direct(0.5, EXP, 10)
        se = math.sqrt(exact * (1 - exact) / n)
        assert abs(est - exact) <= 3 * se

    def test_cdf_derivative_is_density(self):
        p = WeibullParams(1.4, 2.5)
        z = np.linspace(0.05, 0.95, 19)
        h = 1e-5
        fd = (cdf_direct(z + h, p, 10) - cdf_direct(z - h, p, 10)) / (2 * h)
        np.testing.assert_allclose(fd, f_prime_direct(z, p, 10), atol=1e-8)

    def test_cap_raises(self):
        # lower tail of u*exp(-u) decays like B**(gamma*k): ~1e6 scales for gamma = 1e-5
        with pytest.raises(ConvergenceError):
            f_prime_direct(0.5, WeibullParams(1.0, 1e-5), 10)

    def test_tolerance_validated(self):
        with pytest.raises(DomainError):
            f_prime_direct(0.5, EXP, 10, tail_tol=0.0)


class TestTruncationBound:
    def test_constants_and_value(self):
        a, c = truncation_constants(1.0, 10)
        # quoted as 4.28633 and 1.6849; closed form via mpmath below
        assert a == pytest.approx(4.28633, abs=2e-5)
        assert c == pytest.approx(1.6849, abs=5e-5)
        assert a == pytest.approx(4.286314729961157049, rel=1e-15)
        assert c == pytest.approx(1.684891442412718666, rel=1e-14)
        assert truncation_bound(1, 1.0, 10) == pytest.approx(0.02318, abs=5e-6)
        # mpmath closed form
        assert truncation_bound(1, 1.0, 10) == pytest.approx(0.02317656606715488718, rel=1e-14)

    def test_decreasing_past_peak(self):
        for gamma in (1.0, 10.0, 40.0):
            a, _ = truncation_constants(gamma, 10)
            start = max(math.floor(1 / a) + 1, math.ceil(min_terms_for_bound(gamma, 10)))
            b = [truncation_bound(M, gamma, 10) for M in range(start, start + 30)]
            assert all(x > y for x, y in zip(b, b[1:]))

    def test_precondition(self):
        floor = min_terms_for_bound(40.0, 10)
        assert floor > 1
        with pytest.raises(PreconditionError):
            truncation_bound(1, 40.0, 10)
        truncation_bound(math.ceil(floor), 40.0, 10)

    @pytest.mark.parametrize("gamma", [0.5, 1, 2, 5])
    def test_dominates_true_tail(self, gamma):
        z = np.linspace(0, 1, 1024)
        p = WeibullParams(1.0, gamma)
        ref = f_prime_series(z, p, 10, 200)
        for M in range(1, 11):
            tail = np.max(np.abs(series_tail(z, p, 10, M, 200)))
            assert tail <= truncation_bound(M, gamma, 10)
            # same quantity as a difference of partial sums, down to rounding
            diff = np.max(np.abs(ref - f_prime_series(z, p, 10, M)))
            assert diff == pytest.approx(tail, abs=1e-15)

    def test_dominates_absolute_tail_sum(self):
        # sup over z can never exceed 2 * sum_{m > M} |c_m|
        for gamma in GAMMAS:
            lb = math.log(10)
            for M in range(1, 11):
                abs_tail = 2 * math.fsum(gamma_modulus_one_plus_ix(2 * math.pi * m / (gamma * lb)) for m in range(M + 1, 400))
                assert abs_tail <= truncation_bound(M, gamma, 10)


class TestTermsForEpsilon:
    def test_quoted_plan(self):
        plan = terms_for_epsilon(1e-6, 1.0, 10)
        assert plan.derivation["k"] == pytest.approx(12.882, abs=5e-4)
        assert plan.derivation["m_real"] == pytest.approx(3.72, abs=5e-3)
        assert plan.terms == 4
        assert plan.error_bound == truncation_bound(4, 1.0, 10)
        assert plan.error_bound <= 1e-6

    def test_large_epsilon_clamps_k(self):
        plan = terms_for_epsilon(1.0, 1.0, 10)
        a, _ = truncation_constants(1.0, 10)
        assert plan.derivation["k"] == 6.0
        assert plan.derivation["k_clamped"]
        assert plan.derivation["m_real"] == pytest.approx((6 + math.log(6) + 0.5) / a, rel=1e-15)

    def test_bound_is_checked(self):
        for eps in (1e-2, 1e-5, 1e-9, 1e-13):
            for gamma in (0.3, 1, 7, 30):
                plan = terms_for_epsilon(eps, gamma, 10)
                assert plan.error_bound <= eps
                assert plan.terms >= min_terms_for_bound(gamma, 10)

    @pytest.mark.parametrize("eps", [1e-4, 1e-6, 1e-8])
    def test_achieved_error(self, eps):
        z = np.linspace(0, 1, 512)
        for gamma in (0.5, 1, 2, 5):
            p = WeibullParams(1.0, gamma)
            plan = terms_for_epsilon(eps, gamma, 10)
            assert np.max(np.abs(f_prime_series(z, p, 10, plan.terms) - f_prime_direct(z, p, 10))) <= eps

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            terms_for_epsilon(0.0, 1.0, 10)


class TestCdfSeries:
    @pytest.mark.parametrize("M", [1, 5, 50])
    def test_endpoints(self, M):
        p = WeibullParams(3.3, 4.0)
        assert cdf_series(0.0, p, 10, M) == 0.0
        assert cdf_series(1.0, p, 10, M) == 1.0

    def test_exponential_deviation_from_uniform(self):
        z = np.linspace(0, 1, 4097)
        dev = cdf_series(z, EXP, 10, 20) - z
        direct = cdf_direct(z, EXP, 10) - z
        np.testing.assert_allclose(dev, direct, atol=1e-12)
        c1 = abs(complex_gamma(complex(1, 2 * math.pi / math.log(10))))
        # oscillation half-range is the first harmonic's |c_1|/pi ~ 0.018 ...
        assert (dev.max() - dev.min()) / 2 == pytest.approx(c1 / math.pi, abs=5e-4)
        # ... but anchoring F(0) = 0 offsets it, so the sup distance is ~0.0305
        assert np.max(np.abs(dev)) == pytest.approx(0.030533, abs=1e-6)

    @pytest.mark.parametrize("gamma", GAMMAS)
    def test_matches_direct(self, gamma):
        z = np.linspace(0, 1, 1024)
        p = WeibullParams(1.0, gamma)
        M = terms_for_epsilon(1e-10, gamma, 10).terms
        np.testing.assert_allclose(cdf_series(z, p, 10, M), cdf_direct(z, p, 10), atol=1e-8)

    def test_derivative_is_series_density(self):
        p = WeibullParams(2.2, 1.3)
        z = np.linspace(0.01, 0.99, 33)
        h = 1e-6
        fd = (cdf_series(z + h, p, 10, 12) - cdf_series(z - h, p, 10, 12)) / (2 * h)
        np.testing.assert_allclose(fd, f_prime_series(z, p, 10, 12), atol=1e-8)

    def test_digit_edge_value(self):
        v = cdf_series(math.log10(2), EXP, 10, terms_for_epsilon(1e-12, 1, 10).terms)
        assert v == pytest.approx(CDF_EXACT[(1.0, math.log10(2))], abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    alpha=st.floats(1e-3, 1e3),
    gamma=st.floats(0.3, 8.0),
    base=st.sampled_from([2, 3, 10, 16, math.e, 7.5]),
)
def test_series_and_direct_agree(alpha, gamma, base):
    z = np.linspace(0, 1, 65)
    p = WeibullParams(alpha, gamma)
    M = terms_for_epsilon(1e-10, gamma, base).terms
    s = f_prime_series(z, p, base, M)
    np.testing.assert_allclose(s, f_prime_direct(z, p, base), atol=1e-8)
    assert s.min() >= -1e-9
    np.testing.assert_allclose(cdf_series(z, p, base, M), cdf_direct(z, p, base), atol=1e-8)


class TestDensityTrace:
    def test_series_trace_carries_plan(self):
        tr = density_trace(EXP, 10, epsilon=1e-10, grid_size=33)
        assert tr.method == "series"
        assert tr.plan.terms == terms_for_epsilon(1e-10, 1, 10).terms
        np.testing.assert_array_equal(tr.z_grid, z_grid(33))

    def test_direct_trace(self):
        tr = density_trace(EXP, 10, grid_size=33, method="direct")
        assert tr.plan is None
        assert np.all(tr.values > 0)

    def test_single_point(self):
        tr = density_trace(EXP, 10, grid_size=1)
        assert tr.z_grid.tolist() == [0.0]
        assert np.isfinite(tr.values[0])

    def test_invalid(self):
        with pytest.raises(DomainError):
            DensityTrace([0.0, 0.5, 0.5], [1.0, 1.0, 1.0], "series")
        with pytest.raises(DomainError):
            DensityTrace([0.0, 1.0], [1.0, float("nan")], "direct")
        with pytest.raises(DomainError):
            density_trace(EXP, 10, method="spline")
