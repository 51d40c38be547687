#include "maskspectra/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace maskspectra::io
{
	std::string format_number(double value)
	{
		if (std::isnan(value))
			return "nan";
		if (std::isinf(value))
			return value > 0 ? "inf" : "-inf";
		char buffer[64];
		std::snprintf(buffer, sizeof buffer, "%.9g", value);
		std::string text(buffer);
		// snprintf honours LC_NUMERIC; the output format does not.
		for (char &c : text)
			if (c == ',')
				c = '.';
		return text;
	}

	double round_to_printed(double value)
	{
		if (!std::isfinite(value))
			return value;
		std::istringstream in(format_number(value));
		in.imbue(std::locale::classic());
		double decoded = 0.0;
		in >> decoded;
		return decoded;
	}

	namespace
	{
		std::string cell_text(const Cell &cell)
		{
			return std::visit(
				[](const auto &v) -> std::string {
					using T = std::decay_t<decltype(v)>;
					if constexpr (std::is_same_v<T, double>)
						return format_number(v);
					else if constexpr (std::is_same_v<T, std::int64_t>)
						return std::to_string(v);
					else if constexpr (std::is_same_v<T, bool>)
						return v ? "true" : "false";
					else
						return v;
				},
				cell);
		}

		nlohmann::json cell_json(const Cell &cell)
		{
			return std::visit(
				[](const auto &v) -> nlohmann::json {
					using T = std::decay_t<decltype(v)>;
					if constexpr (std::is_same_v<T, double>)
					{
						if (!std::isfinite(v))
							return nullptr;
						return round_to_printed(v);
					}
					else
						return v;
				},
				cell);
		}

		nlohmann::json stats_json(const RunningStats<double> &s)
		{
			const auto num = [](double v) -> nlohmann::json {
				return std::isfinite(v) ? nlohmann::json(round_to_printed(v)) : nlohmann::json(nullptr);
			};
			return {{"count", s.count()}, {"mean", num(s.mean())}, {"variance", num(s.variance())},
					{"min", num(s.min())}, {"max", num(s.max())}};
		}

		void append_stats(Table &t, std::vector<Cell> &row, const std::string &prefix, const RunningStats<double> &s)
		{
			for (const char *field : {"count", "mean", "variance", "min", "max"})
				t.columns.push_back(prefix + "." + field);
			row.push_back(static_cast<std::int64_t>(s.count()));
			row.push_back(s.mean());
			row.push_back(s.variance());
			row.push_back(s.min());
			row.push_back(s.max());
		}
	} // namespace

	void write_csv(std::ostream &out, const Table &table)
	{
		for (std::size_t i = 0; i < table.columns.size(); ++i)
			out << (i ? "," : "") << table.columns[i];
		out << '\n';
		for (const auto &row : table.rows)
		{
			for (std::size_t i = 0; i < row.size(); ++i)
				out << (i ? "," : "") << cell_text(row[i]);
			out << '\n';
		}
	}

	nlohmann::json to_json(const Table &table)
	{
		nlohmann::json records = nlohmann::json::array();
		for (const auto &row : table.rows)
		{
			nlohmann::json record = nlohmann::json::object();
			for (std::size_t i = 0; i < row.size(); ++i)
				record[table.columns[i]] = cell_json(row[i]);
			records.push_back(std::move(record));
		}
		return records;
	}

	Table bound_report_table(const BoundReport &r)
	{
		Table t;
		t.columns = {"N", "p", "n_p", "epsilon", "worst_case", "worst_case_ratio", "worst_case_ratio_np", "gaussian_T",
					 "gaussian_T_approx", "sigma3", "sigma4", "ratio_approx", "ratio_approx_clamped", "n_is_prime"};
		t.rows.push_back({static_cast<std::int64_t>(r.length), r.rate, static_cast<std::int64_t>(r.n_p), r.epsilon,
						  r.worst_case, r.worst_case_ratio, r.worst_case_ratio_np, r.gaussian_T, r.gaussian_T_approx,
						  r.sigma3, r.sigma4, r.ratio_approx, r.ratio_approx_clamped, r.n_is_prime});
		return t;
	}

	Table table1_table(const std::vector<Table1Row> &rows)
	{
		Table t;
		t.columns = {"N", "p", "n_p", "trials", "sim_max_mean", "sim_global_max", "sim_ratio", "sim_ratio_np",
					 "bound_worst", "bound_ratio", "bound_ratio_np", "bound_ratio_approx"};
		for (const auto &r : rows)
			t.rows.push_back({static_cast<std::int64_t>(r.length), r.rate, static_cast<std::int64_t>(r.n_p), r.trials,
							  r.sim_max_mean, r.sim_global_max, r.sim_ratio, r.sim_ratio_np, r.bound_worst,
							  r.bound_ratio, r.bound_ratio_np, r.bound_ratio_approx});
		return t;
	}

	Table figure_table(const std::vector<FigureRecord> &records)
	{
		Table t;
		t.columns = {"N", "p", "n_p", "trials", "sim_max_mean", "sim_global_max", "mean_abs", "epsilon", "gaussian_T",
					 "gaussian_T_approx", "sigma3", "sigma4", "worst_case", "exceed_gaussian", "exceed_sigma4"};
		for (const auto &r : records)
			t.rows.push_back({static_cast<std::int64_t>(r.length), r.rate, static_cast<std::int64_t>(r.n_p), r.trials,
							  r.sim_max_mean, r.sim_global_max, r.mean_abs, r.epsilon, r.gaussian_T, r.gaussian_T_approx,
							  r.sigma3, r.sigma4, r.worst_case, r.exceed_gaussian, r.exceed_sigma4});
		return t;
	}

	Table noise_ratio_table(const std::vector<NoiseRatioCurve> &curves)
	{
		Table t;
		t.columns = {"N", "p", "k", "ratio_mean", "ratio_max"};
		for (const auto &c : curves)
			for (std::size_t k = 1; k < c.ratio_mean.size(); ++k)
				t.rows.push_back({static_cast<std::int64_t>(c.length), c.rate, static_cast<std::int64_t>(k),
								  c.ratio_mean[k], c.ratio_max[k]});
		return t;
	}

	Table approximation_table(const std::vector<ApproximationPoint> &points)
	{
		Table t;
		t.columns = {"N", "p", "n_p", "exact_ratio", "exact_ratio_np", "approx_ratio"};
		for (const auto &pt : points)
			t.rows.push_back({static_cast<std::int64_t>(pt.length), pt.rate, static_cast<std::int64_t>(pt.n_p),
							  pt.exact_ratio, pt.exact_ratio_np, pt.approx_ratio});
		return t;
	}

	Table history_table(const std::vector<IterationRecord> &history)
	{
		Table t;
		t.columns = {"iteration", "threshold", "snr_db"};
		for (const auto &h : history)
			t.rows.push_back({static_cast<std::int64_t>(h.iteration), h.threshold, h.snr_db});
		return t;
	}

	Table trial_stats_table(const TrialStats &s)
	{
		Table t;
		std::vector<Cell> row;
		t.columns.push_back("trials");
		row.push_back(s.trials);
		append_stats(t, row, "per_trial_max", s.per_trial_max);
		t.columns.push_back("global_max");
		row.push_back(s.global_max);
		t.columns.push_back("mean_abs_coeff");
		row.push_back(s.mean_abs_coeff);
		for (const auto &e : s.exceedance_counts)
		{
			t.columns.push_back("exceedance_counts." + e.label);
			row.push_back(e.count);
		}
		append_stats(t, row, "n_p_stats", s.n_p_stats);
		append_stats(t, row, "per_trial_ratio", s.per_trial_ratio);
		t.columns.push_back("empty_masks");
		row.push_back(s.empty_masks);
		t.rows.push_back(std::move(row));
		return t;
	}

	nlohmann::json trial_stats_json(const TrialStats &s)
	{
		nlohmann::json exceed = nlohmann::json::array();
		for (const auto &e : s.exceedance_counts)
			exceed.push_back({{"label", e.label}, {"threshold", round_to_printed(e.threshold)}, {"count", e.count}});
		nlohmann::json doc = {
			{"trials", s.trials},
			{"per_trial_max", stats_json(s.per_trial_max)},
			{"global_max", round_to_printed(s.global_max)},
			{"mean_abs_coeff", round_to_printed(s.mean_abs_coeff)},
			{"exceedance_counts", exceed},
			{"n_p_stats", stats_json(s.n_p_stats)},
			{"per_trial_ratio", stats_json(s.per_trial_ratio)},
			{"empty_masks", s.empty_masks},
		};
		if (!s.per_bin_mean_abs.empty())
		{
			std::vector<double> mean_abs, max_abs;
			for (double v : s.per_bin_mean_abs)
				mean_abs.push_back(round_to_printed(v));
			for (double v : s.per_bin_max)
				max_abs.push_back(round_to_printed(v));
			doc["per_bin_mean_abs"] = mean_abs;
			doc["per_bin_max"] = max_abs;
		}
		return doc;
	}

	VectorX<double> read_signal_csv(std::istream &in)
	{
		std::vector<double> values;
		std::string line;
		bool first = true;
		std::size_t line_number = 0;
		while (std::getline(in, line))
		{
			++line_number;
			if (!line.empty() && line.back() == '\r')
				line.pop_back();
			if (line.empty())
				continue;
			const auto comma = line.find(',');
			if (comma == std::string::npos)
				throw InvalidArgument("signal csv: line " + std::to_string(line_number) + " has no comma");
			std::istringstream index_in(line.substr(0, comma));
			std::istringstream value_in(line.substr(comma + 1));
			index_in.imbue(std::locale::classic());
			value_in.imbue(std::locale::classic());
			long long index = 0;
			double value = 0.0;
			if (!(index_in >> index) || !(value_in >> value))
			{
				if (first)
				{
					first = false;
					continue; // header
				}
				throw InvalidArgument("signal csv: cannot parse line " + std::to_string(line_number));
			}
			first = false;
			if (index != static_cast<long long>(values.size()))
				throw InvalidArgument("signal csv: expected index " + std::to_string(values.size()) + " on line " +
									  std::to_string(line_number));
			values.push_back(value);
		}
		if (values.empty())
			throw InvalidArgument("signal csv: no samples");
		return Eigen::Map<VectorX<double>>(values.data(), static_cast<Index>(values.size()));
	}

	void write_signal_csv(std::ostream &out, const VectorX<double> &signal)
	{
		out << "index,value\n";
		for (Index i = 0; i < signal.size(); ++i)
		{
			char buffer[64];
			std::snprintf(buffer, sizeof buffer, "%.17g", signal[i]);
			out << i << ',' << buffer << '\n';
		}
	}
} // namespace maskspectra::io
