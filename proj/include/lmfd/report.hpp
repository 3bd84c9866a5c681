#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lmfd/search.hpp"
#include "lmfd/timeseries.hpp"

namespace lmfd {

struct ReportOptions {
  /// When false, "wall_time_seconds" is written as null so that reports of
  /// identical runs compare byte for byte.
  bool include_timing = true;
};

/// JSON report with stable field names:
/// config, source, kept_sensors, dropped_sensors, constant_sensors, counts,
/// results, wall_time_seconds.
std::string report_to_json(const SearchReport& report, const ReportOptions& options = {});

/// Fixed-width table of the ranked results with three-decimal constants.
std::string report_to_text(const SearchReport& report);

/// Proxy values of `result` over z-normalized `table` (which must hold the
/// result's sensors).
std::vector<double> proxy_series(const TimeSeriesTable& table, const RankedResult& result);

/// CSV with header "index,proxy,s1,s2"; a column for an unused role is left
/// empty.
void write_proxy_csv(const std::filesystem::path& path, const TimeSeriesTable& table,
                     const std::vector<double>& proxy, const std::string& s1_name,
                     const std::string& s2_name);

}  // namespace lmfd
