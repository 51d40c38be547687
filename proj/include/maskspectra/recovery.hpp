#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maskspectra/mask.hpp"
#include "maskspectra/types.hpp"

namespace maskspectra
{
	/// Band-limited signal described by its nonzero DFT bins.
	struct SignalSpec
	{
		Index length = 0;
		std::vector<Index> band;
		ComplexVectorX<double> amplitudes; // one per band entry
		std::uint64_t seed = 0;
	};

	/// Symmetric band {0?, +-k_1, ..., +-k_m} with random complex amplitudes
	/// of magnitude in [0.5, 1] * length; conjugate pairs keep the signal real.
	SignalSpec random_band_spec(Index length, const std::vector<Index> &positive_bins, bool include_dc, std::uint64_t seed);

	/// Inverse DFT of the banded spectrum. Throws InvalidArgument if the band
	/// is not conjugate-symmetric.
	VectorX<double> synthesize_signal(const SignalSpec &spec);

	/// Pointwise product x[n] * bits[n].
	VectorX<double> sample_random(const VectorX<double> &signal, const Mask &mask);

	/// Keeps coefficients with |X_k| > threshold, zeroes the rest.
	template <typename Derived>
	auto hard_threshold(const Eigen::MatrixBase<Derived> &coeffs, typename Eigen::NumTraits<typename Derived::Scalar>::Real threshold)
	{
		using Scalar = typename Derived::Scalar;
		return (coeffs.cwiseAbs().array() > threshold).select(coeffs, Scalar(0)).eval();
	}

	struct RecoverySpec
	{
		Mask mask;
		int iterations = 50;
		double t0 = 0.0;
		double alpha = 0.1;

		void validate() const;
	};

	/// t0 = c * max_k |DFT(xs)_k| / p with c = ratio_approximation(N, p) + 3*sqrt((1-p)/(N*p)).
	double default_initial_threshold(const VectorX<double> &samples, const Mask &mask);

	struct IterationRecord
	{
		int iteration;
		double threshold;
		double snr_db; // NaN when no reference signal was given
	};

	enum class StopReason
	{
		completed,
		diverged
	};

	struct RecoveryResult
	{
		VectorX<double> estimate;
		std::vector<IterationRecord> history;
		StopReason stop = StopReason::completed;
	};

	double snr_db(const VectorX<double> &reference, const VectorX<double> &estimate);

	/// One step of the thresholded fill-in iteration:
	///   x <- IDFT(H_T(DFT(xs + (1 - mask) .* x))).
	VectorX<double> recovery_step(const VectorX<double> &samples, const Mask &mask, const VectorX<double> &estimate, double threshold);

	/// Runs recovery_step from x = 0 with T_i = t0 * exp(-alpha * i).
	/// With a reference signal, records SNR and stops early once it has
	/// fallen for 5 consecutive iterations.
	RecoveryResult recover(const VectorX<double> &samples, const RecoverySpec &spec,
						   const std::optional<VectorX<double>> &reference = std::nullopt);
} // namespace maskspectra
