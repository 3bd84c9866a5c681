#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lmfd {

using Series = std::vector<double>;

/// Ordered index plus named float columns of equal length.
///
/// The index holds integer positions, integer epochs, or ISO-8601 dates
/// converted to seconds since the Unix epoch. Only its order matters to the
/// rank statistics. Construction validates every table invariant, so a live
/// TimeSeriesTable is always well formed and can be shared read-only.
class TimeSeriesTable {
 public:
  static constexpr std::size_t kMinRows = 3;

  TimeSeriesTable(std::vector<std::int64_t> index, std::vector<std::string> names,
                  std::vector<Series> columns, std::string provenance);

  /// Index 0..rows-1.
  static std::vector<std::int64_t> positional_index(std::size_t rows);

  std::size_t rows() const noexcept { return index_.size(); }
  std::size_t width() const noexcept { return names_.size(); }

  const std::vector<std::int64_t>& index() const noexcept { return index_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<Series>& columns() const noexcept { return columns_; }
  const std::string& provenance() const noexcept { return provenance_; }

  std::optional<std::size_t> find(std::string_view name) const noexcept;
  /// Throws Error(UnknownColumn).
  const Series& column(std::string_view name) const;

 private:
  std::vector<std::int64_t> index_;
  std::vector<std::string> names_;
  std::vector<Series> columns_;
  std::string provenance_;
};

/// Reads an RFC-4180 CSV with a header row. Without `time_column` the index
/// is the row position and every column is a sensor.
TimeSeriesTable load_csv(const std::filesystem::path& path,
                         const std::optional<std::string>& time_column = std::nullopt);

/// Same as load_csv but from in-memory text; `source` names the origin in
/// error messages and provenance.
TimeSeriesTable parse_csv(std::string_view text, const std::optional<std::string>& time_column,
                          const std::string& source);

/// Writes the header "<index_name>,<names...>" and one row per index entry.
/// Values use shortest round-trip formatting so a reload is bit-exact.
void write_csv(const TimeSeriesTable& table, const std::filesystem::path& path,
               std::string_view index_name = "index");

struct NormalizedTable {
  TimeSeriesTable table;
  /// Columns with zero population standard deviation, dropped from `table`.
  std::vector<std::string> constant_columns;
};

/// Per-column (x - mean) / sigma with the population (divide-by-n) sigma.
NormalizedTable z_normalize(const TimeSeriesTable& table);

struct SensorScore {
  std::string name;
  double abs_rho = 0.0;
};

struct FilteredTable {
  TimeSeriesTable kept;
  std::vector<SensorScore> kept_scores;
  std::vector<SensorScore> dropped;
};

/// Keeps exactly the columns with |rho(column, index)| <= threshold, in their
/// original order. Throws Error(EmptyResult) when fewer than two survive.
FilteredTable filter_by_monotonicity(const TimeSeriesTable& table, double threshold);

/// Parses an integer or an ISO-8601 date/date-time into an ordering key.
std::optional<std::int64_t> parse_time_value(std::string_view text);

/// True for names matching [A-Za-z_][A-Za-z0-9_-]*.
bool is_valid_sensor_name(std::string_view name) noexcept;

}  // namespace lmfd
