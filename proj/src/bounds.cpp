#include "maskspectra/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "maskspectra/mask.hpp"

namespace maskspectra
{
	namespace
	{
		constexpr double pi = std::numbers::pi;

		// Neumaier's variant of Kahan summation.
		class CompensatedSum
		{
		public:
			void add(double x)
			{
				const double t = sum_ + x;
				if (std::abs(sum_) >= std::abs(x))
					compensation_ += (sum_ - t) + x;
				else
					compensation_ += (x - t) + sum_;
				sum_ = t;
			}
			double value() const { return sum_ + compensation_; }

		private:
			double sum_ = 0.0;
			double compensation_ = 0.0;
		};

		void check_rate(double rate, const char *where)
		{
			if (!(rate > 0.0 && rate < 1.0))
				throw InvalidArgument(std::string(where) + ": rate p must lie in (0, 1)");
		}

		void check_support(Index length, Index n_p, const char *where)
		{
			if (length < 1)
				throw InvalidArgument(std::string(where) + ": length N must be >= 1");
			if (n_p < 1 || n_p > length)
				throw InvalidArgument(std::string(where) + ": n_p must lie in [1, N]");
		}
	} // namespace

	Index default_support_size(Index length, double rate)
	{
		const double expected = static_cast<double>(length) * rate;
		// Absorb representation error such as 5 * 0.2 = 1.0000000000000002.
		const auto n_p = static_cast<Index>(std::ceil(expected * (1.0 - 1e-12)));
		return std::clamp<Index>(n_p, 1, length);
	}

	double worst_case_bound(Index length, Index n_p)
	{
		check_support(length, n_p, "worst_case_bound");
		// All N roots of unity cancel exactly; summing would leave sqrt(rounding).
		if (n_p == length)
			return 0.0;
		CompensatedSum series;
		const double step = 2.0 * pi / static_cast<double>(length);
		for (Index i = 1; i < n_p; ++i)
			series.add(static_cast<double>(n_p - i) * std::cos(step * static_cast<double>(i)));
		const double radicand = static_cast<double>(n_p) + 2.0 * series.value();
		return std::sqrt(std::max(radicand, 0.0));
	}

	double dirichlet_closed_form(Index length, Index n_p)
	{
		check_support(length, n_p, "dirichlet_closed_form");
		if (n_p == length)
			return 0.0;
		const double n = static_cast<double>(length);
		return std::abs(std::sin(pi * static_cast<double>(n_p) / n) / std::sin(pi / n));
	}

	ClampedValue ratio_approximation_checked(Index length, double rate)
	{
		check_rate(rate, "ratio_approximation");
		const double n = static_cast<double>(length);
		const double np = n * rate;
		if (length < 1 || np < 1.0)
			throw InvalidArgument("ratio_approximation: requires N*p >= 1");
		const double s = std::sin(rate * pi);
		const double radicand = np + (n * n / (pi * pi)) * s * s - n * (s - std::sin(2.0 * rate * pi) / (2.0 * pi));
		if (radicand < 0.0)
			return {0.0, true};
		return {std::sqrt(radicand) / np, false};
	}

	double ratio_approximation(Index length, double rate) { return ratio_approximation_checked(length, rate).value; }

	double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

	double q_inverse(double y)
	{
		if (!(y > 0.0 && y < 1.0))
			throw InvalidArgument("q_inverse: argument must lie in (0, 1)");
		if (y == 0.5)
			return 0.0;
		if (y > 0.5)
			return -q_inverse(1.0 - y);

		// Solve log Q(x) = log y on [0, sqrt(-2 log y)]; Q(x) <= exp(-x^2/2)
		// guarantees the upper end brackets the root.
		const double log_y = std::log(y);
		double lo = 0.0;
		double hi = std::sqrt(-2.0 * log_y);
		double x = std::sqrt(std::max(-2.0 * std::log(2.0 * y), 0.0));
		x = std::clamp(x, lo, hi);
		for (int iter = 0; iter < 200; ++iter)
		{
			const double q = q_function(x);
			const double g = std::log(q) - log_y;
			if (g > 0.0)
				lo = x;
			else
				hi = x;
			const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
			double next = x + g * q / density; // Newton on log Q, slope -density/q
			if (!(next > lo && next < hi))
				next = 0.5 * (lo + hi);
			const double step = std::abs(next - x);
			x = next;
			if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x) || hi - lo <= 0.0)
				break;
		}
		return x;
	}

	Index BoundSpec::support_size() const { return n_p ? *n_p : default_support_size(length, rate); }

	double BoundSpec::effective_epsilon() const
	{
		return union_mode ? epsilon / static_cast<double>(length - 1) : epsilon;
	}

	void BoundSpec::validate() const
	{
		if (length < 2)
			throw InvalidArgument("BoundSpec: length N must be >= 2");
		check_rate(rate, "BoundSpec");
		if (!(epsilon > 0.0 && epsilon < 1.0))
			throw InvalidArgument("BoundSpec: epsilon must lie in (0, 1)");
		if (n_p && (*n_p < 1 || *n_p > length))
			throw InvalidArgument("BoundSpec: n_p must lie in [1, N]");
	}

	GaussianModel gaussian_model(Index length, double rate, bool exact_variance)
	{
		check_rate(rate, "gaussian_model");
		if (length < 1)
			throw InvalidArgument("gaussian_model: length N must be >= 1");
		GaussianModel model;
		model.variance = rate * (1.0 - rate) * static_cast<double>(length);
		if (exact_variance)
			model.variance *= 0.5;
		model.sigma = std::sqrt(model.variance);
		return model;
	}

	double gaussian_bound(const BoundSpec &spec)
	{
		spec.validate();
		const GaussianModel model = gaussian_model(spec.length, spec.rate, spec.exact_variance);
		return std::sqrt(2.0 * model.variance) * q_inverse(0.5 * spec.effective_epsilon());
	}

	double gaussian_bound_approx(const BoundSpec &spec)
	{
		spec.validate();
		const GaussianModel model = gaussian_model(spec.length, spec.rate, spec.exact_variance);
		return 2.0 * std::sqrt(model.variance * std::log(1.0 / spec.effective_epsilon()));
	}

	double sigma_bound(Index length, double rate, int multiple, bool allow_any_multiple)
	{
		if (!allow_any_multiple && multiple != 3 && multiple != 4)
			throw InvalidArgument("sigma_bound: multiple must be 3 or 4");
		if (multiple < 0)
			throw InvalidArgument("sigma_bound: multiple must be non-negative");
		return static_cast<double>(multiple) * gaussian_model(length, rate).sigma;
	}

	BoundReport bound_report(const BoundSpec &spec)
	{
		spec.validate();
		BoundReport r;
		r.length = spec.length;
		r.rate = spec.rate;
		r.n_p = spec.support_size();
		r.epsilon = spec.epsilon;
		r.n_is_prime = is_prime(spec.length);
		if (!r.n_is_prime)
			r.warnings.push_back("N = " + std::to_string(spec.length) +
								 " is not prime; the worst-case bound assumes a prime length");

		r.worst_case = worst_case_bound(spec.length, r.n_p);
		r.worst_case_ratio = r.worst_case / static_cast<double>(r.n_p);
		r.worst_case_ratio_np = r.worst_case / (static_cast<double>(spec.length) * spec.rate);
		r.gaussian_T = gaussian_bound(spec);
		r.gaussian_T_approx = gaussian_bound_approx(spec);
		r.sigma3 = sigma_bound(spec.length, spec.rate, 3);
		r.sigma4 = sigma_bound(spec.length, spec.rate, 4);

		if (static_cast<double>(spec.length) * spec.rate >= 1.0)
		{
			const ClampedValue approx = ratio_approximation_checked(spec.length, spec.rate);
			r.ratio_approx = approx.value;
			r.ratio_approx_clamped = approx.clamped;
		}
		else
		{
			r.ratio_approx_clamped = true;
		}
		if (r.ratio_approx_clamped)
			r.warnings.push_back("ratio approximation undefined at this (N, p); reported as 0");
		return r;
	}
} // namespace maskspectra
