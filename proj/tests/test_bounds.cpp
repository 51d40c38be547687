#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "maskspectra/bounds.hpp"
#include "maskspectra/dft.hpp"
#include "oracles.hpp"

using namespace maskspectra;

TEST(WorstCaseBound, ReferenceTableValues)
{
	EXPECT_NEAR(worst_case_bound(127, 64), 40.426, 0.001);
	EXPECT_NEAR(worst_case_bound(127, 102), 23.439, 0.001);
	EXPECT_NEAR(worst_case_bound(127, 13), 12.778, 0.001);
	EXPECT_NEAR(worst_case_bound(1543, 772), 491.152, 0.001);
	EXPECT_NEAR(worst_case_bound(1543, 1235), 288.207, 0.001);
}

TEST(WorstCaseBound, EdgeValues)
{
	for (Index n : {2, 7, 127, 1543})
	{
		EXPECT_DOUBLE_EQ(worst_case_bound(n, 1), 1.0);
		EXPECT_NEAR(worst_case_bound(n, n), 0.0, 1e-6);
	}
	EXPECT_THROW(worst_case_bound(10, 0), InvalidArgument);
	EXPECT_THROW(worst_case_bound(10, 11), InvalidArgument);
}

TEST(WorstCaseBound, AgreesWithDirichletKernel)
{
	const auto prime = oracle::sieve(600);
	for (Index n = 2; n <= 600; ++n)
	{
		if (!prime[static_cast<std::size_t>(n)])
			continue;
		for (Index n_p = 1; n_p <= n; ++n_p)
		{
			const double a = worst_case_bound(n, n_p);
			const double b = dirichlet_closed_form(n, n_p);
			ASSERT_LE(std::abs(a - b), 1e-9 * std::max(1.0, b)) << n << " " << n_p;
		}
	}
	// Large N, where naive summation would drift.
	for (Index n_p : {13107, 65535, 104856})
		EXPECT_LE(std::abs(worst_case_bound(131071, n_p) - dirichlet_closed_form(131071, n_p)),
				  1e-9 * dirichlet_closed_form(131071, n_p));
}

TEST(DirichletClosedForm, Examples)
{
	const double expected = std::sin(64.0 * std::numbers::pi / 127.0) / std::sin(std::numbers::pi / 127.0);
	EXPECT_NEAR(dirichlet_closed_form(127, 64), expected, 1e-12);
	EXPECT_NEAR(dirichlet_closed_form(127, 64), 40.426, 0.001);
	EXPECT_NEAR(dirichlet_closed_form(127, 13), 12.778, 0.001);
	EXPECT_EQ(dirichlet_closed_form(127, 127), 0.0);
}

TEST(WorstCaseBound, AttainedByContiguousBlock)
{
	const auto prime = oracle::sieve(4096);
	for (Index n = 3; n <= 4096; ++n)
	{
		if (!prime[static_cast<std::size_t>(n)] || (n > 300 && n % 7 != 1 && n != 4093))
			continue;
		for (Index n_p : {Index{1}, n / 3, n / 2, (3 * n) / 4, n - 1})
		{
			if (n_p < 1)
				continue;
			const double peak = max_nonzero_bin(dft_fast(worst_case_mask(n, n_p))).value;
			ASSERT_NEAR(peak, worst_case_bound(n, n_p), 1e-9 * std::max(1.0, peak)) << n << " " << n_p;
		}
	}
}

TEST(WorstCaseBound, ExhaustiveMaximalityN7)
{
	// Every mask of length 7: no off-DC bin exceeds the bound for its n_p.
	const Index n = 7;
	std::vector<double> best(n + 1, 0.0);
	for (unsigned word = 1; word < (1u << n); ++word)
	{
		std::vector<double> x(n);
		int count = 0;
		for (Index i = 0; i < n; ++i)
			count += static_cast<int>(x[static_cast<std::size_t>(i)] = (word >> i) & 1u);
		best[static_cast<std::size_t>(count)] = std::max(best[static_cast<std::size_t>(count)], oracle::max_offbin(oracle::naive_dft(x)));
	}
	for (Index n_p = 1; n_p <= n; ++n_p)
		EXPECT_NEAR(best[static_cast<std::size_t>(n_p)], worst_case_bound(n, n_p), 1e-9) << n_p;
}

TEST(WorstCaseBound, UnimodalInSupportSize)
{
	for (Index n : {7, 127, 1543, 8191})
	{
		const double middle = worst_case_bound(n, n / 2);
		EXPECT_GE(middle, worst_case_bound(n, 1));
		EXPECT_GE(middle, worst_case_bound(n, n));
	}
}

TEST(RatioApproximation, ReferenceValues)
{
	EXPECT_NEAR(ratio_approximation(131071, 0.5), 0.637, 0.002);
	EXPECT_NEAR(ratio_approximation(131071, 0.1), 0.984, 0.003);
	EXPECT_LT(std::abs(ratio_approximation(1000000, 0.5) - 2.0 / std::numbers::pi), 1e-3);
}

TEST(RatioApproximation, ClampsNegativeRadicand)
{
	// N = 2, p = 0.5: 1 + 4/pi^2 - 2 < 0.
	const ClampedValue v = ratio_approximation_checked(2, 0.5);
	EXPECT_TRUE(v.clamped);
	EXPECT_EQ(v.value, 0.0);
	EXPECT_FALSE(ratio_approximation_checked(127, 0.5).clamped);
	EXPECT_THROW(ratio_approximation(10, 0.05), InvalidArgument);
	EXPECT_THROW(ratio_approximation(10, 1.0), InvalidArgument);
}

TEST(RatioApproximation, TracksExactRatioForLargeN)
{
	for (Index n : {1009, 1543, 4093, 8191, 131071})
		for (int i = 1; i <= 9; ++i)
		{
			const double p = i / 10.0;
			const Index n_p = default_support_size(n, p);
			const double exact = worst_case_bound(n, n_p) / static_cast<double>(n_p);
			EXPECT_LE(std::abs(ratio_approximation(n, p) - exact), 0.02) << n << " " << p;
		}
}

TEST(QFunction, AgainstIndependentOracle)
{
	EXPECT_DOUBLE_EQ(q_function(0.0), 0.5);
	EXPECT_NEAR(q_function(3.0), 1.3499e-3, 1e-7);
	for (int i = -800; i <= 800; ++i)
	{
		const double x = i / 100.0;
		const double expected = static_cast<double>(oracle::q_tail(x));
		ASSERT_LE(std::abs(q_function(x) - expected), 1e-12 * expected) << x;
		ASSERT_NEAR(q_function(x) + q_function(-x), 1.0, 1e-15) << x;
	}
}

TEST(QInverse, RoundTripAndExamples)
{
	EXPECT_EQ(q_inverse(0.5), 0.0);
	EXPECT_NEAR(q_inverse(q_function(2.345)), 2.345, 1e-9);

	const double bisected = oracle::bisect_decreasing([](double x) { return static_cast<double>(oracle::q_tail(x)); }, 5e-5, 0.0, 10.0);
	EXPECT_NEAR(q_inverse(5e-5), bisected, 1e-9);
	EXPECT_NEAR(q_inverse(5e-5), 3.89, 0.01);

	for (double y : {1e-300, 1e-100, 5e-51, 1e-12, 1e-6, 0.01, 0.2, 0.49, 0.51, 0.9, 0.999999})
	{
		const double x = q_inverse(y);
		EXPECT_LE(std::abs(q_function(x) - y), 1e-12 * y) << y;
	}
	EXPECT_THROW(q_inverse(0.0), InvalidArgument);
	EXPECT_THROW(q_inverse(1.0), InvalidArgument);
	EXPECT_THROW(q_inverse(-0.1), InvalidArgument);
}

namespace
{
	BoundSpec spec_of(Index n, double p, double eps, bool union_mode = false)
	{
		BoundSpec s;
		s.length = n;
		s.rate = p;
		s.epsilon = eps;
		s.union_mode = union_mode;
		return s;
	}
} // namespace

TEST(GaussianBound, Examples)
{
	const double x = oracle::bisect_decreasing([](double t) { return static_cast<double>(oracle::q_tail(t)); }, 5e-5, 0.0, 10.0);
	const double expected = std::sqrt(63.5) * x;
	EXPECT_NEAR(gaussian_bound(spec_of(127, 0.5, 1e-4)), expected, 1e-8);
	EXPECT_NEAR(gaussian_bound(spec_of(127, 0.5, 1e-4)), 31.0, 0.1);
	EXPECT_GT(gaussian_bound(spec_of(127, 0.5, 1e-4, true)), gaussian_bound(spec_of(127, 0.5, 1e-4)));
	EXPECT_NEAR(gaussian_bound(spec_of(127, 0.5, 0.999999)), 0.0, 1e-4);
}

TEST(GaussianBound, ExactVarianceHalvesPower)
{
	BoundSpec s = spec_of(1543, 0.3, 1e-4);
	const double full = gaussian_bound(s);
	s.exact_variance = true;
	EXPECT_NEAR(gaussian_bound(s), full / std::numbers::sqrt2, 1e-12 * full);
}

TEST(GaussianBound, StrictlyDecreasingInEpsilon)
{
	double previous = std::numeric_limits<double>::infinity();
	for (double eps = 1e-12; eps < 0.99; eps *= 1.7)
	{
		const double t = gaussian_bound(spec_of(8191, 0.2, eps));
		EXPECT_LT(t, previous) << eps;
		previous = t;
	}
}

TEST(GaussianBoundApprox, Examples)
{
	EXPECT_NEAR(gaussian_bound_approx(spec_of(127, 0.5, 1e-4)), 2.0 * std::sqrt(31.75 * std::log(1e4)), 1e-12);
	EXPECT_NEAR(gaussian_bound_approx(spec_of(127, 0.5, 1e-4)), 34.2, 0.1);
	// eps' -> 1 sends ln(1/eps') to 0.
	EXPECT_NEAR(gaussian_bound_approx(spec_of(127, 0.5, 1.0 - 1e-15)), 0.0, 1e-5);
}

TEST(GaussianBoundApprox, DominatesExactThreshold)
{
	for (double eps = 1e-200; eps <= 0.23; eps *= 3.0)
		for (bool union_mode : {false, true})
		{
			const BoundSpec s = spec_of(1021, 0.4, eps, union_mode);
			EXPECT_GE(gaussian_bound_approx(s), gaussian_bound(s)) << eps;
		}
}

TEST(SigmaBound, ArithmeticAndScaling)
{
	EXPECT_NEAR(sigma_bound(127, 0.5, 4), 4.0 * std::sqrt(31.75), 1e-12);
	EXPECT_NEAR(sigma_bound(127, 0.5, 4), 22.539, 0.001);
	for (Index n : {7, 127, 1543})
		for (double p : {0.1, 0.5, 0.8})
		{
			EXPECT_NEAR(sigma_bound(n, p, 4) / sigma_bound(n, p, 3), 4.0 / 3.0, 4e-16);
			EXPECT_NEAR(sigma_bound(4 * n, p, 3), 2.0 * sigma_bound(n, p, 3), 1e-12 * sigma_bound(n, p, 3));
		}
	EXPECT_THROW(sigma_bound(127, 0.5, 5), InvalidArgument);
	EXPECT_NEAR(sigma_bound(127, 0.5, 5, true), 5.0 * std::sqrt(31.75), 1e-12);
}

TEST(BoundReport, Table1Rows)
{
	BoundSpec s = spec_of(127, 0.5, 1e-4);
	s.n_p = 64;
	const BoundReport half = bound_report(s);
	EXPECT_NEAR(half.worst_case, 40.426, 0.001);
	EXPECT_NEAR(half.worst_case_ratio, 40.426 / 64.0, 1e-4);
	EXPECT_NEAR(half.worst_case_ratio_np, 0.637, 0.001);
	EXPECT_NEAR(half.ratio_approx, ratio_approximation(127, 0.5), 0.0);
	EXPECT_GT(half.sigma4, half.sigma3);
	EXPECT_TRUE(half.warnings.empty());

	const BoundReport tenth = bound_report(spec_of(127, 0.1, 1e-4));
	EXPECT_EQ(tenth.n_p, 13);
	EXPECT_NEAR(tenth.worst_case, 12.778, 0.001);
	EXPECT_NEAR(tenth.worst_case_ratio_np, 1.006, 0.005);
}

TEST(BoundReport, AllEntriesFiniteAndWarnings)
{
	const BoundReport r = bound_report(spec_of(128, 0.3, 1e-3));
	EXPECT_FALSE(r.n_is_prime);
	ASSERT_FALSE(r.warnings.empty());
	for (double v : {r.worst_case, r.worst_case_ratio, r.gaussian_T, r.gaussian_T_approx, r.sigma3, r.sigma4, r.ratio_approx})
	{
		EXPECT_TRUE(std::isfinite(v));
		EXPECT_GE(v, 0.0);
	}

	BoundSpec bad = spec_of(127, 0.5, 1e-4);
	bad.n_p = 0;
	EXPECT_THROW(bound_report(bad), InvalidArgument);
	EXPECT_THROW(bound_report(spec_of(127, 0.5, 1.0)), InvalidArgument);
	EXPECT_THROW(bound_report(spec_of(1, 0.5, 0.1)), InvalidArgument);
}

TEST(DefaultSupportSize, CeilingWithRepresentationSlack)
{
	EXPECT_EQ(default_support_size(127, 0.5), 64);
	EXPECT_EQ(default_support_size(127, 0.8), 102);
	EXPECT_EQ(default_support_size(1543, 0.8), 1235);
	EXPECT_EQ(default_support_size(1543, 0.1), 155);
	EXPECT_EQ(default_support_size(5, 0.2), 1);
	EXPECT_EQ(default_support_size(10, 0.01), 1);
}
