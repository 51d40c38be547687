#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "maskspectra/types.hpp"

namespace maskspectra
{
	bool is_prime(Index n);

	/// Parameters of a Bernoulli(p) sampling mask of length N.
	///
	/// The primality of N is recorded at construction: the worst-case
	/// analysis assumes a prime length, and consumers warn when it is not.
	class MaskConfig
	{
	public:
		MaskConfig(Index length, double rate, std::uint64_t seed = 0);

		Index length() const { return length_; }
		double rate() const { return rate_; }
		std::uint64_t seed() const { return seed_; }
		bool n_is_prime() const { return n_is_prime_; }

	private:
		Index length_;
		double rate_;
		std::uint64_t seed_;
		bool n_is_prime_;
	};

	/// A realized 0/1 mask together with its (strictly increasing) support.
	class Mask
	{
	public:
		explicit Mask(BitVector bits);

		const BitVector &bits() const { return bits_; }
		const std::vector<Index> &support() const { return support_; }
		Index n_p() const { return static_cast<Index>(support_.size()); }
		Index size() const { return bits_.size(); }

		template <typename Scalar = double>
		VectorX<Scalar> as_vector() const { return bits_.cast<Scalar>(); }

		bool operator==(const Mask &other) const { return bits_ == other.bits_; }

	private:
		BitVector bits_;
		std::vector<Index> support_;
	};

	/// Draws mask number `trial_index` of the stream identified by config.seed().
	///
	/// Each trial gets its own engine seeded from (seed, trial_index), so the
	/// result does not depend on which trials were drawn before it.
	Mask generate_mask(const MaskConfig &config, std::uint64_t trial_index);

	/// Contiguous block of n_p ones at the origin; attains the worst-case bound.
	Mask worst_case_mask(Index length, Index n_p);

	Mask all_ones_mask(Index length);

	// Single line of '0'/'1' characters terminated by '\n'.
	std::string to_text(const Mask &mask);
	Mask mask_from_text(const std::string &text);
	void write_mask(std::ostream &out, const Mask &mask);
	Mask read_mask(std::istream &in);
} // namespace maskspectra
