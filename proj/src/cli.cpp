#include "maskspectra/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "maskspectra/bounds.hpp"
#include "maskspectra/io.hpp"
#include "maskspectra/mask.hpp"
#include "maskspectra/montecarlo.hpp"
#include "maskspectra/recovery.hpp"

namespace maskspectra::cli
{
	namespace
	{
		constexpr std::uint64_t fallback_seed = 1;

		class UsageError : public std::runtime_error
		{
		public:
			using std::runtime_error::runtime_error;
		};

		struct OutputOptions
		{
			std::string format = "csv";
			std::string path;
		};

		struct RunOptions
		{
			std::optional<std::uint64_t> seed;
			int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
			std::int64_t trials = 0;
		};

		void add_output_options(CLI::App *cmd, OutputOptions &o)
		{
			cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
			cmd->add_option("--out", o.path, "Output file (default: standard output)");
		}

		void add_run_options(CLI::App *cmd, RunOptions &o, std::int64_t default_trials)
		{
			o.trials = default_trials;
			cmd->add_option("--seed", o.seed, "RNG seed (fallback: $MASKSPECTRA_SEED, then 1)");
			cmd->add_option("--workers", o.workers, "Worker threads; results do not depend on this")->capture_default_str();
			cmd->add_option("--trials", o.trials, "Monte Carlo trials per configuration")->capture_default_str();
		}

		std::uint64_t resolve_seed(const std::optional<std::uint64_t> &flag)
		{
			if (flag)
				return *flag;
			if (const char *env = std::getenv("MASKSPECTRA_SEED"); env && *env)
			{
				std::istringstream in(env);
				std::uint64_t seed = 0;
				if (!(in >> seed) || !in.eof())
					throw UsageError("MASKSPECTRA_SEED must be an unsigned integer (got '" + std::string(env) + "')");
				return seed;
			}
			return fallback_seed;
		}

		void require(bool ok, const std::string &message)
		{
			if (!ok)
				throw UsageError(message);
		}

		template <typename T>
		std::string show(T v)
		{
			std::ostringstream s;
			s << v;
			return s.str();
		}

		void check_length(Index n, const char *flag = "--n")
		{
			require(n >= 2, std::string(flag) + " must be >= 2 (got " + show(n) + ")");
		}

		void check_rate(double p, const char *flag)
		{
			require(p > 0.0 && p < 1.0, std::string(flag) + " must lie in (0, 1) (got " + show(p) + ")");
		}

		void check_epsilon(double eps)
		{
			require(eps > 0.0 && eps < 1.0, "--eps must lie in (0, 1) (got " + show(eps) + ")");
		}

		void check_run(const RunOptions &o)
		{
			require(o.trials >= 1, "--trials must be >= 1 (got " + show(o.trials) + ")");
			require(o.workers >= 1, "--workers must be >= 1 (got " + show(o.workers) + ")");
		}

		void emit(const io::Table &table, const OutputOptions &o, std::ostream &out, bool single_record = false)
		{
			std::ofstream file;
			std::ostream *target = &out;
			if (!o.path.empty())
			{
				file.open(o.path, std::ios::binary | std::ios::trunc);
				if (!file)
					throw RuntimeFailure("cannot open output file '" + o.path + "'");
				target = &file;
			}
			if (o.format == "json")
			{
				const nlohmann::json doc = io::to_json(table);
				*target << (single_record && doc.size() == 1 ? doc[0] : doc).dump(2) << '\n';
			}
			else
			{
				io::write_csv(*target, table);
			}
			target->flush();
			if (!*target)
				throw RuntimeFailure("failed writing output");
		}

		void emit_json(const nlohmann::json &doc, const OutputOptions &o, std::ostream &out)
		{
			std::ofstream file;
			std::ostream *target = &out;
			if (!o.path.empty())
			{
				file.open(o.path, std::ios::binary | std::ios::trunc);
				if (!file)
					throw RuntimeFailure("cannot open output file '" + o.path + "'");
				target = &file;
			}
			*target << doc.dump(2) << '\n';
			target->flush();
			if (!*target)
				throw RuntimeFailure("failed writing output");
		}

		std::vector<double> default_rate_grid(double step)
		{
			std::vector<double> rates;
			for (int i = 1; i * step < 1.0 - 1e-9; ++i)
				rates.push_back(std::round(i * step * 1e6) / 1e6);
			return rates;
		}
	} // namespace

	int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
	{
		CLI::App app{"Bounds on the DFT magnitude of Bernoulli random sampling masks"};
		app.require_subcommand(1);

		// bounds
		Index bounds_n = 0;
		double bounds_p = 0.0;
		double bounds_eps = 1e-4;
		std::optional<Index> bounds_np;
		bool bounds_union = false;
		bool bounds_exact = false;
		OutputOptions bounds_out;
		auto *bounds = app.add_subcommand("bounds", "Evaluate every analytic bound for one (N, p, eps)");
		bounds->add_option("--n", bounds_n, "Mask length N")->required();
		bounds->add_option("--p", bounds_p, "Sampling rate p")->required();
		bounds->add_option("--eps", bounds_eps, "Tail probability epsilon")->capture_default_str();
		bounds->add_option("--np", bounds_np, "Support size (default ceil(N*p))");
		bounds->add_flag("--union", bounds_union, "Divide epsilon over the N-1 nonzero bins");
		bounds->add_flag("--exact-variance", bounds_exact, "Use Var(Re A_k) = p(1-p)N/2");
		add_output_options(bounds, bounds_out);

		// simulate
		Index sim_n = 0;
		double sim_p = 0.0;
		double sim_eps = 1e-4;
		bool sim_bins = false;
		RunOptions sim_run;
		OutputOptions sim_out;
		auto *simulate = app.add_subcommand("simulate", "Monte Carlo statistics of max_{k!=0} |A_k|");
		simulate->add_option("--n", sim_n, "Mask length N")->required();
		simulate->add_option("--p", sim_p, "Sampling rate p")->required();
		simulate->add_option("--eps", sim_eps, "Epsilon for the Gaussian threshold")->capture_default_str();
		simulate->add_flag("--bins", sim_bins, "Include per-bin mean and max (json only)");
		add_run_options(simulate, sim_run, 1000);
		add_output_options(simulate, sim_out);

		// table1
		RunOptions t1_run;
		OutputOptions t1_out;
		bool t1_full = false;
		std::int64_t t1_large_trials = 1000;
		std::vector<std::string> t1_rows;
		auto *table1 = app.add_subcommand("table1", "Reproduce the bound-versus-simulation table");
		add_run_options(table1, t1_run, 10000);
		table1->add_flag("--full", t1_full, "Run every row at --trials, including N > 100000");
		table1->add_option("--large-trials", t1_large_trials, "Trial cap for N > 100000")->capture_default_str();
		table1->add_option("--rows", t1_rows, "Rows as N:p (default: the nine reference rows)")->delimiter(',');
		add_output_options(table1, t1_out);

		// figure
		std::string fig_mode = "curves";
		double fig_rate = 0.5;
		std::vector<Index> fig_ns{127, 257, 509, 1021, 2039, 4093, 8191};
		Index fig_n = 8191;
		std::vector<double> fig_rates;
		double fig_eps = 1e-4;
		bool fig_union = false;
		RunOptions fig_run;
		OutputOptions fig_out;
		auto *figure = app.add_subcommand("figure", "Data for the bound/simulation figures");
		figure->add_option("--mode", fig_mode, "curves: bounds vs N; ratio: noise ratio vs k; approx: exact vs approximate ratio")
			->check(CLI::IsMember({"curves", "ratio", "approx"}))
			->capture_default_str();
		figure->add_option("--rate", fig_rate, "Sampling rate (curves mode)")->capture_default_str();
		figure->add_option("--ns", fig_ns, "Mask lengths (curves mode)")->delimiter(',');
		figure->add_option("--n", fig_n, "Mask length (ratio/approx modes)")->capture_default_str();
		figure->add_option("--rates", fig_rates, "Sampling rates (ratio/approx modes)")->delimiter(',');
		figure->add_option("--eps", fig_eps, "Epsilon for the Gaussian threshold")->capture_default_str();
		figure->add_flag("--union", fig_union, "Divide epsilon over the N-1 nonzero bins");
		add_run_options(figure, fig_run, 1000);
		add_output_options(figure, fig_out);

		// recover
		std::string rec_signal;
		double rec_p = 0.5;
		int rec_iters = 50;
		double rec_alpha = 0.1;
		std::optional<double> rec_t0;
		std::optional<std::uint64_t> rec_seed;
		OutputOptions rec_out;
		auto *recover_cmd = app.add_subcommand("recover", "Thresholded iterative recovery from a random mask");
		recover_cmd->add_option("--signal", rec_signal, "Signal fixture (index,value CSV)")->required()->check(CLI::ExistingFile);
		recover_cmd->add_option("--p", rec_p, "Sampling rate in (0, 1]")->capture_default_str();
		recover_cmd->add_option("--seed", rec_seed, "Mask seed (fallback: $MASKSPECTRA_SEED, then 1)");
		recover_cmd->add_option("--iters", rec_iters, "Iterations")->capture_default_str();
		recover_cmd->add_option("--alpha", rec_alpha, "Threshold decay per iteration")->capture_default_str();
		recover_cmd->add_option("--t0", rec_t0, "Initial threshold (default derived from the mask bounds)");
		add_output_options(recover_cmd, rec_out);

		try
		{
			std::vector<std::string> reversed(args.rbegin(), args.rend());
			app.parse(reversed);
		}
		catch (const CLI::CallForHelp &)
		{
			out << app.help();
			return success;
		}
		catch (const CLI::ParseError &e)
		{
			if (e.get_exit_code() == 0)
			{
				out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
				return success;
			}
			err << "error: " << e.what() << '\n';
			return usage_error;
		}

		try
		{
			if (*bounds)
			{
				check_length(bounds_n);
				check_rate(bounds_p, "--p");
				check_epsilon(bounds_eps);
				if (bounds_np)
					require(*bounds_np >= 1 && *bounds_np <= bounds_n,
							"--np must lie in [1, N] (got " + show(*bounds_np) + ")");
				BoundSpec spec;
				spec.length = bounds_n;
				spec.rate = bounds_p;
				spec.n_p = bounds_np;
				spec.epsilon = bounds_eps;
				spec.union_mode = bounds_union;
				spec.exact_variance = bounds_exact;
				const BoundReport report = bound_report(spec);
				for (const auto &w : report.warnings)
					err << "warning: " << w << '\n';
				emit(io::bound_report_table(report), bounds_out, out, true);
			}
			else if (*simulate)
			{
				check_length(sim_n);
				check_rate(sim_p, "--p");
				check_epsilon(sim_eps);
				check_run(sim_run);
				BoundSpec b;
				b.length = sim_n;
				b.rate = sim_p;
				b.epsilon = sim_eps;
				const BoundReport report = bound_report(b);
				ExperimentSpec spec{MaskConfig(sim_n, sim_p, resolve_seed(sim_run.seed)), sim_run.trials,
									{{"gaussian", report.gaussian_T},
									 {"sigma3", report.sigma3},
									 {"sigma4", report.sigma4},
									 {"worst_case", report.worst_case}},
									sim_run.workers};
				spec.track_bins = sim_bins;
				const TrialStats stats = run_experiment(spec);
				if (sim_out.format == "json")
					emit_json(io::trial_stats_json(stats), sim_out, out);
				else
					emit(io::trial_stats_table(stats), sim_out, out);
			}
			else if (*table1)
			{
				check_run(t1_run);
				require(t1_large_trials >= 1, "--large-trials must be >= 1 (got " + show(t1_large_trials) + ")");
				std::vector<RateLength> rows = default_table1_rows();
				if (!t1_rows.empty())
				{
					rows.clear();
					for (const auto &item : t1_rows)
					{
						const auto colon = item.find(':');
						require(colon != std::string::npos, "--rows entries must look like N:p (got '" + item + "')");
						RateLength row{};
						std::istringstream n_in(item.substr(0, colon)), p_in(item.substr(colon + 1));
						require(static_cast<bool>(n_in >> row.length) && static_cast<bool>(p_in >> row.rate),
								"--rows entries must look like N:p (got '" + item + "')");
						check_length(row.length, "--rows N");
						check_rate(row.rate, "--rows p");
						rows.push_back(row);
					}
				}
				Table1Options options;
				options.trials = t1_run.trials;
				options.seed = resolve_seed(t1_run.seed);
				options.workers = t1_run.workers;
				options.full_trials = t1_full;
				options.large_n_trials = t1_large_trials;
				emit(io::table1_table(table1_report(rows, options)), t1_out, out);
			}
			else if (*figure)
			{
				check_run(fig_run);
				check_epsilon(fig_eps);
				FigureOptions options;
				options.epsilon = fig_eps;
				options.trials = fig_run.trials;
				options.seed = resolve_seed(fig_run.seed);
				options.workers = fig_run.workers;
				options.union_mode = fig_union;
				if (fig_mode == "curves")
				{
					check_rate(fig_rate, "--rate");
					require(!fig_ns.empty(), "--ns must list at least one length");
					for (const Index n : fig_ns)
						check_length(n, "--ns");
					emit(io::figure_table(figure_curves(fig_rate, fig_ns, options)), fig_out, out);
				}
				else
				{
					check_length(fig_n);
					std::vector<double> rates = fig_rates;
					if (rates.empty())
						rates = fig_mode == "ratio" ? std::vector<double>{0.1, 0.2, 0.5, 0.8} : default_rate_grid(0.05);
					for (const double p : rates)
						check_rate(p, "--rates");
					if (fig_mode == "ratio")
						emit(io::noise_ratio_table(noise_ratio_curves(fig_n, rates, options)), fig_out, out);
					else
						emit(io::approximation_table(approximation_curve(fig_n, rates)), fig_out, out);
				}
			}
			else if (*recover_cmd)
			{
				require(rec_p > 0.0 && rec_p <= 1.0, "--p must lie in (0, 1] (got " + show(rec_p) + ")");
				require(rec_iters >= 1, "--iters must be >= 1 (got " + show(rec_iters) + ")");
				require(rec_alpha > 0.0, "--alpha must be > 0 (got " + show(rec_alpha) + ")");
				if (rec_t0)
					require(*rec_t0 > 0.0, "--t0 must be > 0 (got " + show(*rec_t0) + ")");

				std::ifstream fixture(rec_signal, std::ios::binary);
				require(static_cast<bool>(fixture), "--signal: cannot open '" + rec_signal + "'");
				VectorX<double> signal;
				try
				{
					signal = io::read_signal_csv(fixture);
				}
				catch (const InvalidArgument &e)
				{
					throw UsageError(std::string("--signal: ") + e.what());
				}
				require(signal.size() >= 2, "--signal: fixture must hold at least 2 samples");

				const Mask mask = rec_p == 1.0 ? all_ones_mask(signal.size())
											   : generate_mask(MaskConfig(signal.size(), rec_p, resolve_seed(rec_seed)), 0);
				require(mask.n_p() > 0, "--p: the drawn mask is empty; choose a larger rate or another seed");
				const VectorX<double> samples = sample_random(signal, mask);

				RecoverySpec spec{mask, rec_iters, rec_t0 ? *rec_t0 : default_initial_threshold(samples, mask), rec_alpha};
				const RecoveryResult result = recover(samples, spec, signal);
				emit(io::history_table(result.history), rec_out, out);

				std::ostream &summary = rec_out.path.empty() ? err : out;
				summary << "N=" << signal.size() << " p=" << io::format_number(rec_p) << " n_p=" << mask.n_p()
						<< " iterations=" << result.history.size()
						<< " final_snr_db=" << io::format_number(result.history.back().snr_db)
						<< " stop=" << (result.stop == StopReason::completed ? "completed" : "diverged") << '\n';
			}
		}
		catch (const UsageError &e)
		{
			err << "error: " << e.what() << '\n';
			return usage_error;
		}
		catch (const InvalidArgument &e)
		{
			err << "error: " << e.what() << '\n';
			return usage_error;
		}
		catch (const std::exception &e)
		{
			err << "error: " << e.what() << '\n';
			return runtime_failure;
		}
		return success;
	}
} // namespace maskspectra::cli
