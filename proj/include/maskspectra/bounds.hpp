#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maskspectra/types.hpp"

namespace maskspectra
{
	/// Support size used by the bounds when none is given: ceil(N*p).
	Index default_support_size(Index length, double rate);

	/// Largest off-DC DFT magnitude any mask with n_p ones can reach:
	///   sqrt(n_p + 2 * sum_{i=1}^{n_p-1} (n_p - i) cos(2*pi*i/N)).
	/// The cosine series is accumulated with Neumaier compensation.
	/// Assumes prime N (distinct phases for every k != 0); not checked here.
	double worst_case_bound(Index length, Index n_p);

	/// |sin(pi*n_p/N) / sin(pi/N)|: the Dirichlet kernel at k = 1, i.e. the
	/// spectrum of a contiguous block. Independent route to worst_case_bound.
	double dirichlet_closed_form(Index length, Index n_p);

	struct ClampedValue
	{
		double value;
		bool clamped; // radicand was negative and forced to zero
	};

	/// Large-N closed-form approximation of worst_case_bound / (N*p).
	ClampedValue ratio_approximation_checked(Index length, double rate);
	double ratio_approximation(Index length, double rate);

	/// Standard normal upper tail probability.
	double q_function(double x);

	/// Inverse of q_function on (0, 1).
	double q_inverse(double y);

	struct BoundSpec
	{
		Index length = 0;
		double rate = 0.5;
		std::optional<Index> n_p; // defaults to ceil(N*p)
		double epsilon = 1e-4;
		// Spread epsilon over the N-1 nonzero bins (union bound) instead of
		// applying it per bin.
		bool union_mode = false;
		// Use Var(Re A_k) = p(1-p)N/2 instead of p(1-p)N.
		bool exact_variance = false;

		Index support_size() const;
		double effective_epsilon() const;
		void validate() const;
	};

	struct GaussianModel
	{
		double mean = 0.0;
		double variance = 0.0;
		double sigma = 0.0;
	};

	GaussianModel gaussian_model(Index length, double rate, bool exact_variance = false);

	/// Threshold T with P(|Re A_k| > T/sqrt(2)) <= eps'/2 under the Gaussian
	/// model: sqrt(2*variance) * Q^{-1}(eps'/2).
	double gaussian_bound(const BoundSpec &spec);

	/// Same threshold using Q(x) ~ exp(-x^2/2)/2: 2*sqrt(variance*ln(1/eps')).
	double gaussian_bound_approx(const BoundSpec &spec);

	/// m * sqrt(p(1-p)N). Only m in {3, 4} unless allow_any_multiple is set.
	double sigma_bound(Index length, double rate, int multiple, bool allow_any_multiple = false);

	struct BoundReport
	{
		Index length = 0;
		double rate = 0.0;
		Index n_p = 0;
		double epsilon = 0.0;
		double worst_case = 0.0;
		double worst_case_ratio = 0.0;    // worst_case / n_p
		double worst_case_ratio_np = 0.0; // worst_case / (N*p)
		double gaussian_T = 0.0;
		double gaussian_T_approx = 0.0;
		double sigma3 = 0.0;
		double sigma4 = 0.0;
		double ratio_approx = 0.0;
		bool ratio_approx_clamped = false;
		bool n_is_prime = true;
		std::vector<std::string> warnings;
	};

	BoundReport bound_report(const BoundSpec &spec);
} // namespace maskspectra
