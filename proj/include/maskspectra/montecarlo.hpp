#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "maskspectra/mask.hpp"
#include "maskspectra/running_stats.hpp"
#include "maskspectra/types.hpp"

namespace maskspectra
{
	struct Threshold
	{
		std::string label;
		double value;
	};

	struct ExperimentSpec
	{
		MaskConfig config;
		std::int64_t trials = 1;
		std::vector<Threshold> thresholds;
		int workers = 1;
		// Keep per-bin mean and max of |A_k| (O(N) extra memory).
		bool track_bins = false;

		void validate() const;
	};

	/// Replaces generate_mask as the per-trial mask source (fixtures, tests).
	using MaskSource = std::function<Mask(const MaskConfig &, std::uint64_t)>;

	struct ExceedanceCount
	{
		std::string label;
		double threshold;
		std::int64_t count;

		bool operator==(const ExceedanceCount &) const = default;
	};

	struct TrialStats
	{
		std::int64_t trials = 0;
		// max_{k != 0} |A_k| of each trial; empty masks contribute 0.
		RunningStats<double> per_trial_max;
		double global_max = 0.0;
		// Mean of |A_k| over k != 0 and over all trials.
		double mean_abs_coeff = 0.0;
		std::vector<ExceedanceCount> exceedance_counts;
		RunningStats<double> n_p_stats;
		// per-trial max / n_p over trials with n_p > 0.
		RunningStats<double> per_trial_ratio;
		std::int64_t empty_masks = 0;
		// Only filled when ExperimentSpec::track_bins is set; index k = bin.
		std::vector<double> per_bin_mean_abs;
		std::vector<double> per_bin_max;

		bool operator==(const TrialStats &) const = default;
	};

	/// Runs spec.trials independent trials (mask -> FFT -> aggregate).
	///
	/// Trials are grouped into fixed blocks that are reduced in block order,
	/// so the result is bit-identical for any worker count. Throws
	/// RuntimeFailure (no partial result) if a worker runs out of memory.
	TrialStats run_experiment(const ExperimentSpec &spec);
	TrialStats run_experiment(const ExperimentSpec &spec, const MaskSource &source);

	/// Fraction of trials whose maximum strictly exceeded the labelled threshold.
	double exceedance_rate(const TrialStats &stats, const std::string &label);

	struct Table1Row
	{
		Index length;
		double rate;
		Index n_p;
		std::int64_t trials;
		double sim_max_mean;
		double sim_global_max;
		double sim_ratio;    // sim_max_mean / n_p
		double sim_ratio_np; // sim_max_mean / (N*p)
		double bound_worst;
		double bound_ratio;    // bound_worst / n_p
		double bound_ratio_np; // bound_worst / (N*p)
		double bound_ratio_approx;
	};

	struct Table1Options
	{
		std::int64_t trials = 10000;
		std::uint64_t seed = 1;
		int workers = 1;
		// Rows with N above large_n_cutoff run at most large_n_trials trials
		// unless full_trials is set.
		Index large_n_cutoff = 100000;
		std::int64_t large_n_trials = 1000;
		bool full_trials = false;
	};

	struct RateLength
	{
		Index length;
		double rate;
	};

	/// The nine (N, p) rows of the reference table; the two rows with
	/// support sizes 1235 and 155 belong to N = 1543.
	std::vector<RateLength> default_table1_rows();

	std::vector<Table1Row> table1_report(const std::vector<RateLength> &rows, const Table1Options &options);

	struct FigureRecord
	{
		Index length;
		double rate;
		Index n_p;
		std::int64_t trials;
		double sim_max_mean;
		double sim_global_max;
		double mean_abs;
		double epsilon;
		double gaussian_T;
		double gaussian_T_approx;
		double sigma3;
		double sigma4;
		double worst_case;
		double exceed_gaussian; // exceedance rates
		double exceed_sigma4;
	};

	struct FigureOptions
	{
		double epsilon = 1e-4;
		std::int64_t trials = 1000;
		std::uint64_t seed = 1;
		int workers = 1;
		bool union_mode = false;
	};

	/// Bounds and empirical curves versus N at a fixed sampling rate.
	std::vector<FigureRecord> figure_curves(double rate, const std::vector<Index> &lengths, const FigureOptions &options);

	struct NoiseRatioCurve
	{
		Index length;
		double rate;
		double sim_max_mean;
		double sim_global_max;
		// Indexed by k = 0..N-1, |A_k| / (N*p); entry 0 is left at 0.
		std::vector<double> ratio_mean;
		std::vector<double> ratio_max;
	};

	/// Per-bin noise ratio |A_k|/(N*p) versus k, one curve per rate.
	std::vector<NoiseRatioCurve> noise_ratio_curves(Index length, const std::vector<double> &rates, const FigureOptions &options);

	struct ApproximationPoint
	{
		Index length;
		double rate;
		Index n_p;
		double exact_ratio;    // worst_case_bound / n_p
		double exact_ratio_np; // worst_case_bound / (N*p)
		double approx_ratio;
	};

	/// Exact worst-case ratio next to its closed-form approximation.
	std::vector<ApproximationPoint> approximation_curve(Index length, const std::vector<double> &rates);
} // namespace maskspectra
