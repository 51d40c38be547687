#include "maskspectra/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <new>
#include <set>
#include <thread>

#include "maskspectra/bounds.hpp"
#include "maskspectra/dft.hpp"

namespace maskspectra
{
	namespace
	{
		// Trials per reduction block. Fixed so that the reduction tree does
		// not depend on the number of workers.
		constexpr std::int64_t block_trials = 64;
		constexpr int blocks_per_worker_round = 4;

		struct BlockAccumulator
		{
			RunningStats<double> per_trial_max;
			RunningStats<double> n_p_stats;
			RunningStats<double> per_trial_ratio;
			double abs_sum = 0.0;
			std::int64_t empty_masks = 0;
			std::vector<std::int64_t> exceedances;
			std::vector<double> bin_sum;
			std::vector<double> bin_max;
		};

		class TrialRunner
		{
		public:
			TrialRunner(const ExperimentSpec &spec, const MaskSource &source, const FftPlan<double> &plan)
				: spec_(spec), source_(source), plan_(plan)
			{
			}

			void run_block(std::int64_t block, BlockAccumulator &acc)
			{
				const Index n = spec_.config.length();
				acc.exceedances.assign(spec_.thresholds.size(), 0);
				if (spec_.track_bins)
				{
					acc.bin_sum.assign(static_cast<std::size_t>(n), 0.0);
					acc.bin_max.assign(static_cast<std::size_t>(n), 0.0);
				}
				const std::int64_t first = block * block_trials;
				const std::int64_t last = std::min(spec_.trials, first + block_trials);
				for (std::int64_t t = first; t < last; ++t)
				{
					const Mask mask = source_(spec_.config, static_cast<std::uint64_t>(t));
					if (mask.size() != n)
						throw InvalidArgument("run_experiment: mask source returned a mask of the wrong length");
					buffer_ = mask.as_vector<double>().cast<std::complex<double>>();
					plan_.forward(buffer_, scratch_);

					double trial_max = 0.0;
					double trial_sum = 0.0;
					for (Index k = 1; k < n; ++k)
					{
						const double magnitude = std::sqrt(std::norm(buffer_[k]));
						trial_sum += magnitude;
						trial_max = std::max(trial_max, magnitude);
						if (spec_.track_bins)
						{
							acc.bin_sum[static_cast<std::size_t>(k)] += magnitude;
							acc.bin_max[static_cast<std::size_t>(k)] = std::max(acc.bin_max[static_cast<std::size_t>(k)], magnitude);
						}
					}
					const Index n_p = mask.n_p();
					if (n_p == 0)
					{
						trial_max = 0.0;
						++acc.empty_masks;
					}
					else
					{
						acc.per_trial_ratio.push(trial_max / static_cast<double>(n_p));
					}
					acc.per_trial_max.push(trial_max);
					acc.n_p_stats.push(static_cast<double>(n_p));
					acc.abs_sum += trial_sum;
					for (std::size_t i = 0; i < spec_.thresholds.size(); ++i)
						if (trial_max > spec_.thresholds[i].value)
							++acc.exceedances[i];
				}
			}

		private:
			const ExperimentSpec &spec_;
			const MaskSource &source_;
			const FftPlan<double> &plan_;
			ComplexVectorX<double> buffer_;
			ComplexVectorX<double> scratch_;
		};

		class Reducer
		{
		public:
			explicit Reducer(const ExperimentSpec &spec)
				: spec_(spec)
			{
				const auto n = static_cast<std::size_t>(spec.config.length());
				exceedances_.assign(spec.thresholds.size(), 0);
				if (spec.track_bins)
				{
					bin_sum_.assign(n, 0.0);
					bin_max_.assign(n, 0.0);
				}
			}

			void merge(const BlockAccumulator &block)
			{
				stats_.per_trial_max.merge(block.per_trial_max);
				stats_.n_p_stats.merge(block.n_p_stats);
				stats_.per_trial_ratio.merge(block.per_trial_ratio);
				stats_.empty_masks += block.empty_masks;
				add_compensated(block.abs_sum);
				for (std::size_t i = 0; i < exceedances_.size(); ++i)
					exceedances_[i] += block.exceedances[i];
				for (std::size_t k = 0; k < bin_sum_.size(); ++k)
				{
					bin_sum_[k] += block.bin_sum[k];
					bin_max_[k] = std::max(bin_max_[k], block.bin_max[k]);
				}
			}

			TrialStats finish()
			{
				const Index n = spec_.config.length();
				stats_.trials = spec_.trials;
				stats_.global_max = stats_.per_trial_max.max();
				const double trials = static_cast<double>(spec_.trials);
				stats_.mean_abs_coeff = (abs_sum_ + abs_compensation_) / (trials * static_cast<double>(n - 1));
				for (std::size_t i = 0; i < exceedances_.size(); ++i)
					stats_.exceedance_counts.push_back({spec_.thresholds[i].label, spec_.thresholds[i].value, exceedances_[i]});
				if (spec_.track_bins)
				{
					stats_.per_bin_mean_abs.resize(bin_sum_.size());
					for (std::size_t k = 0; k < bin_sum_.size(); ++k)
						stats_.per_bin_mean_abs[k] = bin_sum_[k] / trials;
					stats_.per_bin_max = bin_max_;
				}
				return stats_;
			}

		private:
			void add_compensated(double x)
			{
				const double t = abs_sum_ + x;
				if (std::abs(abs_sum_) >= std::abs(x))
					abs_compensation_ += (abs_sum_ - t) + x;
				else
					abs_compensation_ += (x - t) + abs_sum_;
				abs_sum_ = t;
			}

			const ExperimentSpec &spec_;
			TrialStats stats_;
			double abs_sum_ = 0.0;
			double abs_compensation_ = 0.0;
			std::vector<std::int64_t> exceedances_;
			std::vector<double> bin_sum_;
			std::vector<double> bin_max_;
		};
	} // namespace

	void ExperimentSpec::validate() const
	{
		if (trials < 1)
			throw InvalidArgument("ExperimentSpec: trials must be >= 1");
		if (workers < 1)
			throw InvalidArgument("ExperimentSpec: workers must be >= 1");
		std::set<std::string> labels;
		for (const auto &t : thresholds)
			if (!labels.insert(t.label).second)
				throw InvalidArgument("ExperimentSpec: duplicate threshold label '" + t.label + "'");
	}

	TrialStats run_experiment(const ExperimentSpec &spec) { return run_experiment(spec, generate_mask); }

	TrialStats run_experiment(const ExperimentSpec &spec, const MaskSource &source)
	{
		spec.validate();
		const FftPlan<double> plan(spec.config.length());
		const std::int64_t blocks = (spec.trials + block_trials - 1) / block_trials;
		const int workers = static_cast<int>(std::min<std::int64_t>(spec.workers, blocks));
		const std::int64_t round_size = static_cast<std::int64_t>(workers) * blocks_per_worker_round;

		Reducer reducer(spec);
		std::vector<BlockAccumulator> round;
		try
		{
			for (std::int64_t round_start = 0; round_start < blocks; round_start += round_size)
			{
				const std::int64_t count = std::min(round_size, blocks - round_start);
				round.assign(static_cast<std::size_t>(count), BlockAccumulator{});

				if (workers == 1)
				{
					TrialRunner runner(spec, source, plan);
					for (std::int64_t b = 0; b < count; ++b)
						runner.run_block(round_start + b, round[static_cast<std::size_t>(b)]);
				}
				else
				{
					std::atomic<std::int64_t> next{0};
					std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
					{
						std::vector<std::jthread> pool;
						for (int w = 0; w < workers; ++w)
						{
							pool.emplace_back([&, w] {
								try
								{
									TrialRunner runner(spec, source, plan);
									for (std::int64_t b = next++; b < count; b = next++)
										runner.run_block(round_start + b, round[static_cast<std::size_t>(b)]);
								}
								catch (...)
								{
									errors[static_cast<std::size_t>(w)] = std::current_exception();
								}
							});
						}
					}
					for (const auto &e : errors)
						if (e)
							std::rethrow_exception(e);
				}

				for (const auto &block : round)
					reducer.merge(block);
			}
		}
		catch (const std::bad_alloc &)
		{
			throw RuntimeFailure("run_experiment: out of memory; partial results discarded");
		}
		return reducer.finish();
	}

	double exceedance_rate(const TrialStats &stats, const std::string &label)
	{
		for (const auto &e : stats.exceedance_counts)
			if (e.label == label)
				return static_cast<double>(e.count) / static_cast<double>(stats.trials);
		throw InvalidArgument("exceedance_rate: unknown threshold label '" + label + "'");
	}

	std::vector<RateLength> default_table1_rows()
	{
		return {{127, 0.5}, {127, 0.8}, {127, 0.1}, {1543, 0.5}, {1543, 0.8}, {1543, 0.1},
				{131071, 0.5}, {131071, 0.8}, {131071, 0.1}};
	}

	std::vector<Table1Row> table1_report(const std::vector<RateLength> &rows, const Table1Options &options)
	{
		if (rows.empty())
			throw InvalidArgument("table1_report: no rows requested");
		std::vector<Table1Row> out;
		for (const auto &row : rows)
		{
			ExperimentSpec spec{MaskConfig(row.length, row.rate, options.seed), options.trials, {}, options.workers};
			if (row.length > options.large_n_cutoff && !options.full_trials)
				spec.trials = std::min(spec.trials, options.large_n_trials);
			const TrialStats stats = run_experiment(spec);

			Table1Row r{};
			r.length = row.length;
			r.rate = row.rate;
			r.n_p = default_support_size(row.length, row.rate);
			r.trials = spec.trials;
			const double np = static_cast<double>(row.length) * row.rate;
			r.sim_max_mean = stats.per_trial_max.mean();
			r.sim_global_max = stats.global_max;
			r.sim_ratio = r.sim_max_mean / static_cast<double>(r.n_p);
			r.sim_ratio_np = r.sim_max_mean / np;
			r.bound_worst = worst_case_bound(row.length, r.n_p);
			r.bound_ratio = r.bound_worst / static_cast<double>(r.n_p);
			r.bound_ratio_np = r.bound_worst / np;
			r.bound_ratio_approx = np >= 1.0 ? ratio_approximation(row.length, row.rate) : 0.0;
			out.push_back(r);
		}
		return out;
	}

	std::vector<FigureRecord> figure_curves(double rate, const std::vector<Index> &lengths, const FigureOptions &options)
	{
		if (lengths.empty())
			throw InvalidArgument("figure_curves: no lengths requested");
		std::vector<FigureRecord> out;
		for (const Index n : lengths)
		{
			BoundSpec bounds;
			bounds.length = n;
			bounds.rate = rate;
			bounds.epsilon = options.epsilon;
			bounds.union_mode = options.union_mode;
			const BoundReport report = bound_report(bounds);

			const ExperimentSpec spec{MaskConfig(n, rate, options.seed), options.trials,
									  {{"gaussian", report.gaussian_T}, {"sigma4", report.sigma4}}, options.workers};
			const TrialStats stats = run_experiment(spec);

			FigureRecord r{};
			r.length = n;
			r.rate = rate;
			r.n_p = report.n_p;
			r.trials = options.trials;
			r.sim_max_mean = stats.per_trial_max.mean();
			r.sim_global_max = stats.global_max;
			r.mean_abs = stats.mean_abs_coeff;
			r.epsilon = options.epsilon;
			r.gaussian_T = report.gaussian_T;
			r.gaussian_T_approx = report.gaussian_T_approx;
			r.sigma3 = report.sigma3;
			r.sigma4 = report.sigma4;
			r.worst_case = report.worst_case;
			r.exceed_gaussian = exceedance_rate(stats, "gaussian");
			r.exceed_sigma4 = exceedance_rate(stats, "sigma4");
			out.push_back(r);
		}
		return out;
	}

	std::vector<NoiseRatioCurve> noise_ratio_curves(Index length, const std::vector<double> &rates, const FigureOptions &options)
	{
		if (rates.empty())
			throw InvalidArgument("noise_ratio_curves: no rates requested");
		std::vector<NoiseRatioCurve> out;
		for (const double rate : rates)
		{
			ExperimentSpec spec{MaskConfig(length, rate, options.seed), options.trials, {}, options.workers};
			spec.track_bins = true;
			const TrialStats stats = run_experiment(spec);

			NoiseRatioCurve curve;
			curve.length = length;
			curve.rate = rate;
			curve.sim_max_mean = stats.per_trial_max.mean();
			curve.sim_global_max = stats.global_max;
			const double np = static_cast<double>(length) * rate;
			curve.ratio_mean.assign(static_cast<std::size_t>(length), 0.0);
			curve.ratio_max.assign(static_cast<std::size_t>(length), 0.0);
			for (std::size_t k = 1; k < curve.ratio_mean.size(); ++k)
			{
				curve.ratio_mean[k] = stats.per_bin_mean_abs[k] / np;
				curve.ratio_max[k] = stats.per_bin_max[k] / np;
			}
			out.push_back(std::move(curve));
		}
		return out;
	}

	std::vector<ApproximationPoint> approximation_curve(Index length, const std::vector<double> &rates)
	{
		std::vector<ApproximationPoint> out;
		for (const double rate : rates)
		{
			if (!(rate > 0.0 && rate < 1.0))
				throw InvalidArgument("approximation_curve: rate p must lie in (0, 1)");
			const double np = static_cast<double>(length) * rate;
			if (np < 1.0)
				continue;
			ApproximationPoint point{};
			point.length = length;
			point.rate = rate;
			point.n_p = default_support_size(length, rate);
			const double worst = worst_case_bound(length, point.n_p);
			point.exact_ratio = worst / static_cast<double>(point.n_p);
			point.exact_ratio_np = worst / np;
			point.approx_ratio = ratio_approximation(length, rate);
			out.push_back(point);
		}
		return out;
	}
} // namespace maskspectra
