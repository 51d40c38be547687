#pragma once

// Reference computations used only by the tests. None of these call into
// the library, so they stay independent of the code paths they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle
{
	// Plain O(N^2) DFT with the angle formed directly in long double.
	inline std::vector<std::complex<double>> naive_dft(const std::vector<double> &x)
	{
		const std::size_t n = x.size();
		std::vector<std::complex<double>> out(n);
		for (std::size_t k = 0; k < n; ++k)
		{
			long double re = 0, im = 0;
			for (std::size_t t = 0; t < n; ++t)
			{
				const long double angle = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((k * t) % n) / n;
				re += x[t] * std::cos(angle);
				im += x[t] * std::sin(angle);
			}
			out[k] = {static_cast<double>(re), static_cast<double>(im)};
		}
		return out;
	}

	inline double max_offbin(const std::vector<std::complex<double>> &spectrum)
	{
		double best = 0.0;
		for (std::size_t k = 1; k < spectrum.size(); ++k)
			best = std::max(best, std::abs(spectrum[k]));
		return best;
	}

	inline std::vector<bool> sieve(std::size_t limit)
	{
		std::vector<bool> prime(limit + 1, true);
		prime[0] = false;
		if (limit >= 1)
			prime[1] = false;
		for (std::size_t i = 2; i * i <= limit; ++i)
			if (prime[i])
				for (std::size_t j = i * i; j <= limit; j += i)
					prime[j] = false;
		return prime;
	}

	// Standard normal tail, long double. Power series of the normal CDF
	// below |x| = 3, Lentz continued fraction above.
	inline long double q_tail(long double x)
	{
		if (x < 0)
			return 1.0L - q_tail(-x);
		const long double density = std::exp(-0.5L * x * x) / std::sqrt(2.0L * std::numbers::pi_v<long double>);
		if (x < 3.0L)
		{
			// Phi(x) - 1/2 = density * sum x^(2n+1) / (2n+1)!!
			long double term = x, sum = x;
			for (int n = 1; n < 400; ++n)
			{
				term *= x * x / (2 * n + 1);
				sum += term;
				if (term < 1e-22L * sum)
					break;
			}
			return 0.5L - density * sum;
		}
		// Q(x) = density / (x + 1/(x + 2/(x + 3/(x + ...))))
		const long double tiny = 1e-300L;
		long double f = x, c = x, d = 0;
		for (int n = 1; n < 5000; ++n)
		{
			d = x + n * d;
			d = d == 0 ? tiny : 1.0L / d;
			c = x + n / c;
			if (c == 0)
				c = tiny;
			const long double delta = c * d;
			f *= delta;
			if (std::abs(delta - 1.0L) < 1e-20L)
				break;
		}
		return density / f;
	}

	// Root of a decreasing function on [lo, hi] by plain bisection.
	inline double bisect_decreasing(const std::function<double(double)> &f, double target, double lo, double hi)
	{
		for (int i = 0; i < 200; ++i)
		{
			const double mid = 0.5 * (lo + hi);
			if (f(mid) > target)
				lo = mid;
			else
				hi = mid;
		}
		return 0.5 * (lo + hi);
	}

	// E[max of m iid Rayleigh magnitudes with E|A|^2 = power], by Simpson
	// quadrature of the survival function 1 - (1 - exp(-t^2/power))^m.
	inline double expected_rayleigh_max(double power, double m)
	{
		const double upper = std::sqrt(power * (std::log(m) + 60.0));
		const int steps = 20000;
		const double h = upper / steps;
		const auto survival = [&](double t) { return 1.0 - std::pow(1.0 - std::exp(-t * t / power), m); };
		double sum = survival(0.0) + survival(upper);
		for (int i = 1; i < steps; ++i)
			sum += (i % 2 ? 4.0 : 2.0) * survival(i * h);
		return sum * h / 3.0;
	}
} // namespace oracle
