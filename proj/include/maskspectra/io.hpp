#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "maskspectra/bounds.hpp"
#include "maskspectra/montecarlo.hpp"
#include "maskspectra/recovery.hpp"
#include "maskspectra/types.hpp"

namespace maskspectra::io
{
	/// 9 significant digits, '.' decimal separator, locale-independent.
	std::string format_number(double value);

	/// The double that format_number(value) decodes to.
	double round_to_printed(double value);

	using Cell = std::variant<std::int64_t, double, std::string, bool>;

	/// Flat record set shared by the CSV and JSON encoders, so both formats
	/// carry identical values.
	struct Table
	{
		std::vector<std::string> columns;
		std::vector<std::vector<Cell>> rows;
	};

	void write_csv(std::ostream &out, const Table &table);
	nlohmann::json to_json(const Table &table);

	Table bound_report_table(const BoundReport &report);
	Table table1_table(const std::vector<Table1Row> &rows);
	Table figure_table(const std::vector<FigureRecord> &records);
	Table noise_ratio_table(const std::vector<NoiseRatioCurve> &curves);
	Table approximation_table(const std::vector<ApproximationPoint> &points);
	Table history_table(const std::vector<IterationRecord> &history);

	/// Single-row flattening of TrialStats (nested names joined with '.').
	Table trial_stats_table(const TrialStats &stats);
	/// Nested JSON document using the TrialStats field names.
	nlohmann::json trial_stats_json(const TrialStats &stats);

	/// Signal fixtures: one "index,value" pair per line; an optional
	/// non-numeric header line is skipped. Indices must run 0..N-1.
	VectorX<double> read_signal_csv(std::istream &in);
	void write_signal_csv(std::ostream &out, const VectorX<double> &signal);
} // namespace maskspectra::io
