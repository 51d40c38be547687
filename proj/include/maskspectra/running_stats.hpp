#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace maskspectra
{
	/// Welford accumulator for count, mean, variance, min and max.
	///
	/// merge() uses the pairwise update of Chan et al.; merging the same
	/// partials in the same order always gives the same bits.
	template <typename T = double>
	class RunningStats
	{
	public:
		void push(T x)
		{
			++count_;
			const T delta = x - mean_;
			mean_ += delta / static_cast<T>(count_);
			m2_ += delta * (x - mean_);
			min_ = std::min(min_, x);
			max_ = std::max(max_, x);
		}

		void merge(const RunningStats &other)
		{
			if (other.count_ == 0)
				return;
			if (count_ == 0)
			{
				*this = other;
				return;
			}
			const T na = static_cast<T>(count_);
			const T nb = static_cast<T>(other.count_);
			const T total = na + nb;
			const T delta = other.mean_ - mean_;
			mean_ += delta * (nb / total);
			m2_ += other.m2_ + delta * delta * (na * nb / total);
			count_ += other.count_;
			min_ = std::min(min_, other.min_);
			max_ = std::max(max_, other.max_);
		}

		std::int64_t count() const { return count_; }
		T mean() const { return count_ ? mean_ : std::numeric_limits<T>::quiet_NaN(); }
		T variance() const { return count_ > 1 ? m2_ / static_cast<T>(count_ - 1) : T{0}; }
		T stddev() const { return std::sqrt(variance()); }
		T min() const { return count_ ? min_ : std::numeric_limits<T>::quiet_NaN(); }
		T max() const { return count_ ? max_ : std::numeric_limits<T>::quiet_NaN(); }

		bool operator==(const RunningStats &) const = default;

	private:
		std::int64_t count_ = 0;
		T mean_ = 0;
		T m2_ = 0;
		T min_ = std::numeric_limits<T>::infinity();
		T max_ = -std::numeric_limits<T>::infinity();
	};
} // namespace maskspectra
