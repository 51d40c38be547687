#include "maskspectra/mask.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>

namespace maskspectra
{
	bool is_prime(Index n)
	{
		if (n < 2)
			return false;
		if (n % 2 == 0)
			return n == 2;
		for (Index d = 3; d * d <= n; d += 2)
			if (n % d == 0)
				return false;
		return true;
	}

	MaskConfig::MaskConfig(Index length, double rate, std::uint64_t seed)
		: length_(length), rate_(rate), seed_(seed), n_is_prime_(is_prime(length))
	{
		if (length < 2)
			throw InvalidArgument("MaskConfig: length N must be >= 2");
		if (!(rate > 0.0 && rate < 1.0))
			throw InvalidArgument("MaskConfig: rate p must lie in (0, 1)");
	}

	Mask::Mask(BitVector bits)
		: bits_(std::move(bits))
	{
		for (Index i = 0; i < bits_.size(); ++i)
		{
			if (bits_[i] > 1)
				throw InvalidArgument("Mask: entries must be 0 or 1");
			if (bits_[i])
				support_.push_back(i);
		}
	}

	Mask generate_mask(const MaskConfig &config, std::uint64_t trial_index)
	{
		std::seed_seq seq{
			static_cast<std::uint32_t>(config.seed()), static_cast<std::uint32_t>(config.seed() >> 32),
			static_cast<std::uint32_t>(trial_index), static_cast<std::uint32_t>(trial_index >> 32)};
		std::mt19937_64 engine(seq);

		// 53-bit uniform from the engine's raw output; both mt19937_64 and
		// seed_seq are fully specified, so masks are portable across platforms.
		BitVector bits(config.length());
		for (Index i = 0; i < bits.size(); ++i)
		{
			const double u = std::ldexp(static_cast<double>(engine() >> 11), -53);
			bits[i] = u < config.rate() ? 1 : 0;
		}
		return Mask(std::move(bits));
	}

	Mask worst_case_mask(Index length, Index n_p)
	{
		if (length < 1)
			throw InvalidArgument("worst_case_mask: length must be >= 1");
		if (n_p < 0 || n_p > length)
			throw InvalidArgument("worst_case_mask: n_p must lie in [0, N]");
		BitVector bits = BitVector::Zero(length);
		bits.head(n_p).setOnes();
		return Mask(std::move(bits));
	}

	Mask all_ones_mask(Index length) { return worst_case_mask(length, length); }

	std::string to_text(const Mask &mask)
	{
		std::string text;
		text.reserve(static_cast<std::size_t>(mask.size()) + 1);
		for (Index i = 0; i < mask.size(); ++i)
			text.push_back(mask.bits()[i] ? '1' : '0');
		text.push_back('\n');
		return text;
	}

	Mask mask_from_text(const std::string &text)
	{
		std::string line = text;
		if (!line.empty() && line.back() == '\n')
			line.pop_back();
		if (line.empty())
			throw InvalidArgument("mask text: empty line");
		BitVector bits(static_cast<Index>(line.size()));
		for (std::size_t i = 0; i < line.size(); ++i)
		{
			if (line[i] != '0' && line[i] != '1')
				throw InvalidArgument("mask text: unexpected character at column " + std::to_string(i + 1));
			bits[static_cast<Index>(i)] = line[i] == '1';
		}
		return Mask(std::move(bits));
	}

	void write_mask(std::ostream &out, const Mask &mask) { out << to_text(mask); }

	Mask read_mask(std::istream &in)
	{
		std::string line;
		if (!std::getline(in, line))
			throw InvalidArgument("mask text: no data");
		return mask_from_text(line);
	}
} // namespace maskspectra
