#include "maskspectra/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "maskspectra/bounds.hpp"
#include "maskspectra/dft.hpp"

namespace maskspectra
{
	namespace
	{
		constexpr double max_snr_db = 300.0;

		VectorX<double> step_with_plan(const FftPlan<double> &plan, ComplexVectorX<double> &scratch,
									   const VectorX<double> &samples, const Mask &mask,
									   const VectorX<double> &estimate, double threshold)
		{
			const VectorX<double> keep = mask.as_vector<double>();
			const VectorX<double> filled = samples + (VectorX<double>::Ones(keep.size()) - keep).cwiseProduct(estimate);
			ComplexVectorX<double> buffer = filled.cast<std::complex<double>>();
			plan.forward(buffer, scratch);
			buffer = hard_threshold(buffer, threshold);
			plan.inverse(buffer, scratch);
			return buffer.real();
		}
	} // namespace

	SignalSpec random_band_spec(Index length, const std::vector<Index> &positive_bins, bool include_dc, std::uint64_t seed)
	{
		if (length < 1)
			throw InvalidArgument("random_band_spec: length must be >= 1");
		std::mt19937_64 engine(seed);
		std::uniform_real_distribution<double> magnitude(0.5, 1.0);
		std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
		const double scale = static_cast<double>(length);

		SignalSpec spec;
		spec.length = length;
		spec.seed = seed;
		std::vector<std::complex<double>> amps;
		if (include_dc)
		{
			spec.band.push_back(0);
			amps.emplace_back(magnitude(engine) * scale, 0.0);
		}
		for (const Index k : positive_bins)
		{
			if (k <= 0 || 2 * k >= length)
				throw InvalidArgument("random_band_spec: positive bins must lie in [1, (N-1)/2]");
			const std::complex<double> a = std::polar(magnitude(engine) * scale, phase(engine));
			spec.band.push_back(k);
			amps.push_back(a);
			spec.band.push_back(length - k);
			amps.push_back(std::conj(a));
		}
		spec.amplitudes = Eigen::Map<ComplexVectorX<double>>(amps.data(), static_cast<Index>(amps.size()));
		return spec;
	}

	VectorX<double> synthesize_signal(const SignalSpec &spec)
	{
		const Index n = spec.length;
		if (n < 1)
			throw InvalidArgument("synthesize_signal: length must be >= 1");
		if (static_cast<Index>(spec.band.size()) != spec.amplitudes.size())
			throw InvalidArgument("synthesize_signal: band and amplitudes differ in length");

		std::map<Index, std::complex<double>> bins;
		double scale = 0.0;
		for (std::size_t i = 0; i < spec.band.size(); ++i)
		{
			const Index k = spec.band[i];
			if (k < 0 || k >= n)
				throw InvalidArgument("synthesize_signal: band index out of range");
			if (!bins.emplace(k, spec.amplitudes[static_cast<Index>(i)]).second)
				throw InvalidArgument("synthesize_signal: duplicate band index");
			scale = std::max(scale, std::abs(spec.amplitudes[static_cast<Index>(i)]));
		}
		const double tolerance = 1e-12 * std::max(scale, 1.0);
		for (const auto &[k, a] : bins)
		{
			const auto partner = bins.find((n - k) % n);
			if (partner == bins.end() || std::abs(partner->second - std::conj(a)) > tolerance)
				throw InvalidArgument("synthesize_signal: band is not conjugate-symmetric at bin " + std::to_string(k));
		}

		ComplexVectorX<double> spectrum = ComplexVectorX<double>::Zero(n);
		for (const auto &[k, a] : bins)
			spectrum[k] = a;
		const ComplexVectorX<double> signal = idft_fast(spectrum);
		return signal.real();
	}

	VectorX<double> sample_random(const VectorX<double> &signal, const Mask &mask)
	{
		if (signal.size() != mask.size())
			throw InvalidArgument("sample_random: signal and mask lengths differ");
		return signal.cwiseProduct(mask.as_vector<double>());
	}

	void RecoverySpec::validate() const
	{
		if (iterations < 1)
			throw InvalidArgument("RecoverySpec: iterations must be >= 1");
		if (!(t0 > 0.0))
			throw InvalidArgument("RecoverySpec: t0 must be > 0");
		if (!(alpha > 0.0))
			throw InvalidArgument("RecoverySpec: alpha must be > 0");
	}

	double default_initial_threshold(const VectorX<double> &samples, const Mask &mask)
	{
		if (samples.size() != mask.size())
			throw InvalidArgument("default_initial_threshold: samples and mask lengths differ");
		const Index n = mask.size();
		const Index n_p = mask.n_p();
		if (n_p == 0)
			throw InvalidArgument("default_initial_threshold: mask is empty");
		const double rate = static_cast<double>(n_p) / static_cast<double>(n);
		const double peak = dft_fast(samples).magnitudes().maxCoeff() / rate;

		// Full sampling leaves no aliasing noise; any small positive level works.
		if (n_p == n)
			return 1e-6 * std::max(peak, 1.0);
		const double margin = 3.0 * std::sqrt((1.0 - rate) / (static_cast<double>(n) * rate));
		return (ratio_approximation(n, rate) + margin) * peak;
	}

	double snr_db(const VectorX<double> &reference, const VectorX<double> &estimate)
	{
		if (reference.size() != estimate.size())
			throw InvalidArgument("snr_db: lengths differ");
		const double signal = reference.squaredNorm();
		const double error = (reference - estimate).squaredNorm();
		if (error == 0.0)
			return max_snr_db;
		return std::min(10.0 * std::log10(signal / error), max_snr_db);
	}

	VectorX<double> recovery_step(const VectorX<double> &samples, const Mask &mask, const VectorX<double> &estimate, double threshold)
	{
		if (samples.size() != mask.size() || estimate.size() != mask.size())
			throw InvalidArgument("recovery_step: lengths differ");
		const FftPlan<double> plan(mask.size());
		ComplexVectorX<double> scratch;
		return step_with_plan(plan, scratch, samples, mask, estimate, threshold);
	}

	RecoveryResult recover(const VectorX<double> &samples, const RecoverySpec &spec, const std::optional<VectorX<double>> &reference)
	{
		spec.validate();
		const Index n = spec.mask.size();
		if (samples.size() != n)
			throw InvalidArgument("recover: samples and mask lengths differ");
		if (reference && reference->size() != n)
			throw InvalidArgument("recover: reference and mask lengths differ");

		const FftPlan<double> plan(n);
		ComplexVectorX<double> scratch;
		RecoveryResult result;
		result.estimate = VectorX<double>::Zero(n);

		double previous_snr = -std::numeric_limits<double>::infinity();
		int decreasing = 0;
		for (int i = 0; i < spec.iterations; ++i)
		{
			const double threshold = spec.t0 * std::exp(-spec.alpha * static_cast<double>(i));
			result.estimate = step_with_plan(plan, scratch, samples, spec.mask, result.estimate, threshold);

			double snr = std::numeric_limits<double>::quiet_NaN();
			if (reference)
			{
				snr = snr_db(*reference, result.estimate);
				decreasing = snr < previous_snr ? decreasing + 1 : 0;
				previous_snr = snr;
			}
			result.history.push_back({i + 1, threshold, snr});
			if (decreasing >= 5)
			{
				result.stop = StopReason::diverged;
				break;
			}
		}
		return result;
	}
} // namespace maskspectra
