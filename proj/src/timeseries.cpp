#include "lmfd/timeseries.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "lmfd/error.hpp"
#include "lmfd/format.hpp"
#include "lmfd/metrics.hpp"

namespace lmfd {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// RFC-4180 tokenizer: quoted fields may contain separators, doubled quotes,
// and line breaks. Accepts LF or CRLF record terminators.
std::vector<CsvRecord> tokenize_csv(std::string_view text, const std::string& source) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;
  current.line = line;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) records.push_back(std::move(current));
    current = CsvRecord{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw Error(ErrorCode::InvalidTable,
                      source + ":" + std::to_string(line) + ": stray quote inside field");
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        ++line;
        end_record();
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::InvalidTable, source + ": unterminated quoted field");
  }
  if (!field.empty() || !current.fields.empty()) end_record();
  return records;
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<int> parse_fixed_digits(std::string_view text) {
  int value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

bool is_valid_sensor_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  const auto head = static_cast<unsigned char>(name.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(name.begin() + 1, name.end(), [](char ch) {
    const auto c = static_cast<unsigned char>(ch);
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

std::optional<std::int64_t> parse_time_value(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;

  std::int64_t integer = 0;
  {
    std::string_view digits = text;
    if (digits.front() == '+') digits.remove_prefix(1);
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), integer);
    if (res.ec == std::errc{} && res.ptr == digits.data() + digits.size()) return integer;
  }

  // YYYY-MM-DD[(T| )HH:MM[:SS][Z]]
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  const auto year = parse_fixed_digits(text.substr(0, 4));
  const auto month = parse_fixed_digits(text.substr(5, 2));
  const auto day = parse_fixed_digits(text.substr(8, 2));
  if (!year || !month || !day) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*year},
                                        std::chrono::month{static_cast<unsigned>(*month)},
                                        std::chrono::day{static_cast<unsigned>(*day)}};
  if (!ymd.ok()) return std::nullopt;
  std::int64_t seconds =
      std::int64_t{std::chrono::sys_days{ymd}.time_since_epoch().count()} * 86400;

  std::string_view rest = text.substr(10);
  if (rest.empty()) return seconds;
  if (rest.front() != 'T' && rest.front() != ' ') return std::nullopt;
  rest.remove_prefix(1);
  if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
  if (rest.size() != 5 && rest.size() != 8) return std::nullopt;
  if (rest[2] != ':' || (rest.size() == 8 && rest[5] != ':')) return std::nullopt;
  const auto hour = parse_fixed_digits(rest.substr(0, 2));
  const auto minute = parse_fixed_digits(rest.substr(3, 2));
  const auto second = rest.size() == 8 ? parse_fixed_digits(rest.substr(6, 2)) : 0;
  if (!hour || !minute || !second || *hour > 23 || *minute > 59 || *second > 60) {
    return std::nullopt;
  }
  seconds += std::int64_t{*hour} * 3600 + std::int64_t{*minute} * 60 + *second;
  return seconds;
}

TimeSeriesTable::TimeSeriesTable(std::vector<std::int64_t> index, std::vector<std::string> names,
                                 std::vector<Series> columns, std::string provenance)
    : index_(std::move(index)),
      names_(std::move(names)),
      columns_(std::move(columns)),
      provenance_(std::move(provenance)) {
  if (index_.size() < kMinRows) {
    throw Error(ErrorCode::InvalidTable, "table needs at least " + std::to_string(kMinRows) +
                                             " rows, got " + std::to_string(index_.size()));
  }
  if (names_.size() != columns_.size()) {
    throw Error(ErrorCode::InvalidTable, "column name count does not match column count");
  }
  for (std::size_t i = 1; i < index_.size(); ++i) {
    if (index_[i] <= index_[i - 1]) {
      throw Error(ErrorCode::NonMonotonicIndex,
                  "index is not strictly increasing at row " + std::to_string(i));
    }
  }
  std::set<std::string_view> seen;
  for (std::size_t c = 0; c < names_.size(); ++c) {
    if (names_[c].empty()) {
      throw Error(ErrorCode::InvalidTable, "empty column name at position " + std::to_string(c));
    }
    if (!seen.insert(names_[c]).second) {
      throw Error(ErrorCode::DuplicateColumn, "duplicate column '" + names_[c] + "'");
    }
    if (columns_[c].size() != index_.size()) {
      throw Error(ErrorCode::LengthMismatch, "column '" + names_[c] + "' has " +
                                                 std::to_string(columns_[c].size()) +
                                                 " values, index has " +
                                                 std::to_string(index_.size()));
    }
    for (std::size_t r = 0; r < columns_[c].size(); ++r) {
      if (!std::isfinite(columns_[c][r])) {
        throw Error(ErrorCode::MissingValue, "non-finite value in column '" + names_[c] +
                                                 "' at row " + std::to_string(r));
      }
    }
  }
}

std::vector<std::int64_t> TimeSeriesTable::positional_index(std::size_t rows) {
  std::vector<std::int64_t> index(rows);
  std::iota(index.begin(), index.end(), std::int64_t{0});
  return index;
}

std::optional<std::size_t> TimeSeriesTable::find(std::string_view name) const noexcept {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

const Series& TimeSeriesTable::column(std::string_view name) const {
  const auto pos = find(name);
  if (!pos) {
    throw Error(ErrorCode::UnknownColumn, "unknown column '" + std::string(name) + "'");
  }
  return columns_[*pos];
}

TimeSeriesTable parse_csv(std::string_view text, const std::optional<std::string>& time_column,
                          const std::string& source) {
  auto records = tokenize_csv(text, source);
  if (records.empty()) {
    throw Error(ErrorCode::InvalidTable, source + ": missing header row");
  }
  const auto& header = records.front().fields;

  std::optional<std::size_t> time_pos;
  if (time_column) {
    const auto it = std::find(header.begin(), header.end(), *time_column);
    if (it == header.end()) {
      throw Error(ErrorCode::UnknownColumn,
                  source + ": time column '" + *time_column + "' not found in header");
    }
    time_pos = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::string> names;
  std::vector<std::size_t> positions;
  std::set<std::string> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (time_pos && c == *time_pos) continue;
    const std::string name{trim(header[c])};
    if (name.empty()) {
      throw Error(ErrorCode::InvalidTable,
                  source + ":1: empty column name in position " + std::to_string(c + 1));
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::DuplicateColumn, source + ":1: duplicate column '" + name + "'");
    }
    names.push_back(name);
    positions.push_back(c);
  }

  const std::size_t rows = records.size() - 1;
  std::vector<Series> columns(names.size(), Series(rows));
  std::vector<std::int64_t> index;
  index.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& rec = records[r + 1];
    const std::string where = source + ":" + std::to_string(rec.line);
    if (rec.fields.size() != header.size()) {
      throw Error(ErrorCode::InvalidTable, where + ": expected " + std::to_string(header.size()) +
                                               " fields, found " +
                                               std::to_string(rec.fields.size()));
    }
    if (time_pos) {
      const auto t = parse_time_value(rec.fields[*time_pos]);
      if (!t) {
        throw Error(ErrorCode::MissingValue, where + ": unparseable time value '" +
                                                 rec.fields[*time_pos] + "' in column '" +
                                                 *time_column + "'");
      }
      if (!index.empty() && *t <= index.back()) {
        throw Error(ErrorCode::NonMonotonicIndex,
                    where + ": time column '" + *time_column + "' is not strictly increasing");
      }
      index.push_back(*t);
    } else {
      index.push_back(static_cast<std::int64_t>(r));
    }
    for (std::size_t c = 0; c < positions.size(); ++c) {
      const auto& cell = rec.fields[positions[c]];
      const auto value = parse_double(cell);
      if (!value) {
        throw Error(ErrorCode::MissingValue, where + ": missing or non-numeric value '" + cell +
                                                 "' in column '" + names[c] + "'");
      }
      columns[c][r] = *value;
    }
  }
  return TimeSeriesTable(std::move(index), std::move(names), std::move(columns), source);
}

TimeSeriesTable load_csv(const std::filesystem::path& path,
                         const std::optional<std::string>& time_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), time_column, path.string());
}

void write_csv(const TimeSeriesTable& table, const std::filesystem::path& path,
               std::string_view index_name) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  }
  out << index_name;
  for (const auto& name : table.names()) out << ',' << name;
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out << table.index()[r];
    for (const auto& col : table.columns()) out << ',' << format_shortest(col[r]);
    out << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::Io, "failed while writing '" + path.string() + "'");
  }
}

NormalizedTable z_normalize(const TimeSeriesTable& table) {
  std::vector<std::string> names;
  std::vector<Series> columns;
  std::vector<std::string> constant;
  const auto n = static_cast<double>(table.rows());
  for (std::size_t c = 0; c < table.width(); ++c) {
    const auto& col = table.columns()[c];
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
    double ss = 0.0;
    for (const double v : col) ss += (v - mean) * (v - mean);
    const double sigma = std::sqrt(ss / n);
    if (sigma == 0.0) {
      constant.push_back(table.names()[c]);
      continue;
    }
    Series z(col.size());
    std::transform(col.begin(), col.end(), z.begin(),
                   [&](double v) { return (v - mean) / sigma; });
    names.push_back(table.names()[c]);
    columns.push_back(std::move(z));
  }
  return NormalizedTable{
      TimeSeriesTable(table.index(), std::move(names), std::move(columns), table.provenance()),
      std::move(constant)};
}

FilteredTable filter_by_monotonicity(const TimeSeriesTable& table, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must lie in [0, 1]");
  }
  std::vector<std::string> names;
  std::vector<Series> columns;
  std::vector<SensorScore> kept;
  std::vector<SensorScore> dropped;
  for (std::size_t c = 0; c < table.width(); ++c) {
    const double score = abs_monotonicity(table.columns()[c]);
    if (score <= threshold) {
      names.push_back(table.names()[c]);
      columns.push_back(table.columns()[c]);
      kept.push_back({table.names()[c], score});
    } else {
      dropped.push_back({table.names()[c], score});
    }
  }
  if (names.size() < 2) {
    throw Error(ErrorCode::EmptyResult,
                std::to_string(names.size()) + " sensor(s) have |rho| <= threshold " +
                    format_shortest(threshold) + "; at least 2 are needed to form pairs");
  }
  return FilteredTable{
      TimeSeriesTable(table.index(), std::move(names), std::move(columns), table.provenance()),
      std::move(kept), std::move(dropped)};
}

}  // namespace lmfd
