#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "lmfd/error.hpp"
#include "lmfd/metrics.hpp"
#include "lmfd/timeseries.hpp"
#include "test_support.hpp"

namespace lmfd {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an lmfd::Error";
  return ErrorCode::Io;
}

TEST(LoadCsv, TimeColumnBecomesIndex) {
  const auto table = parse_csv("t,a\n1,0.5\n2,0.7\n3,0.6", std::string("t"), "mem");
  EXPECT_EQ(table.index(), (std::vector<std::int64_t>{1, 2, 3}));
  ASSERT_EQ(table.names(), (std::vector<std::string>{"a"}));
  EXPECT_EQ(table.column("a"), (Series{0.5, 0.7, 0.6}));
}

TEST(LoadCsv, PositionalIndexWithoutTimeColumn) {
  const auto table = parse_csv("t,a\n1,0.5\n2,0.7\n3,0.6", std::nullopt, "mem");
  EXPECT_EQ(table.index(), (std::vector<std::int64_t>{0, 1, 2}));
  EXPECT_EQ(table.names(), (std::vector<std::string>{"t", "a"}));
}

TEST(LoadCsv, NaNCellIsRejectedWithLocation) {
  try {
    parse_csv("t,a\n1,0.5\n2,NaN\n3,0.6", std::string("t"), "mem");
    FAIL() << "expected MissingValue";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingValue);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("mem:3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'a'"), std::string::npos) << msg;
  }
}

TEST(LoadCsv, RejectionRules) {
  EXPECT_EQ(code_of([] { parse_csv("a,b\n1,\n2,3\n4,5", std::nullopt, "m"); }),
            ErrorCode::MissingValue);
  EXPECT_EQ(code_of([] { parse_csv("a,b\n1,inf\n2,3\n4,5", std::nullopt, "m"); }),
            ErrorCode::MissingValue);
  EXPECT_EQ(code_of([] { parse_csv("t,a\n1,1\n3,2\n2,3", std::string("t"), "m"); }),
            ErrorCode::NonMonotonicIndex);
  EXPECT_EQ(code_of([] { parse_csv("t,a\n1,1\n1,2\n2,3", std::string("t"), "m"); }),
            ErrorCode::NonMonotonicIndex);
  EXPECT_EQ(code_of([] { parse_csv("a,a\n1,1\n2,2\n3,3", std::nullopt, "m"); }),
            ErrorCode::DuplicateColumn);
  EXPECT_EQ(code_of([] { parse_csv("a\n1\n2", std::nullopt, "m"); }), ErrorCode::InvalidTable);
  EXPECT_EQ(code_of([] { parse_csv("a,b\n1,2\n3\n4,5", std::nullopt, "m"); }),
            ErrorCode::InvalidTable);
  EXPECT_EQ(code_of([] { parse_csv("a,b\n1,2\n3,4\n5,6", std::string("zz"), "m"); }),
            ErrorCode::UnknownColumn);
  EXPECT_EQ(code_of([] { load_csv("/nonexistent/file.csv"); }), ErrorCode::Io);
}

TEST(LoadCsv, QuotedFieldsCrLfAndIsoDates) {
  const std::string text =
      "\"date\",\"x, quoted\",y\r\n"
      "2020-01-01,1,\"2\"\r\n"
      "2020-01-02T06:00:00Z,2,3\r\n"
      "2020-01-03,3,4\r\n";
  const auto table = parse_csv(text, std::string("date"), "mem");
  EXPECT_EQ(table.names(), (std::vector<std::string>{"x, quoted", "y"}));
  EXPECT_EQ(table.index()[0], 1577836800);
  EXPECT_EQ(table.index()[1], 1577836800 + 86400 + 6 * 3600);
  EXPECT_EQ(table.column("y"), (Series{2, 3, 4}));
}

TEST(LoadCsv, TimeValueParsing) {
  EXPECT_EQ(parse_time_value("1881"), 1881);
  EXPECT_EQ(parse_time_value("-5"), -5);
  EXPECT_EQ(parse_time_value("1970-01-02"), 86400);
  EXPECT_EQ(parse_time_value("1970-01-01 00:01"), 60);
  EXPECT_FALSE(parse_time_value("2021-02-30"));
  EXPECT_FALSE(parse_time_value("yesterday"));
  EXPECT_FALSE(parse_time_value(""));
}

TEST(LoadCsv, WriteThenLoadIsBitExact) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> dist;
  Series a(50);
  Series b(50);
  for (auto& v : a) v = dist(rng);
  for (auto& v : b) v = dist(rng) * 1e-7;
  const TimeSeriesTable table(TimeSeriesTable::positional_index(50), {"a", "b"}, {a, b}, "x");
  const auto path = testing::scratch_dir("csv_roundtrip") / "t.csv";
  write_csv(table, path);
  const auto back = load_csv(path, std::string("index"));
  EXPECT_EQ(back.index(), table.index());
  EXPECT_EQ(back.columns(), table.columns());
}

TEST(TimeSeriesTable, EnforcesInvariants) {
  EXPECT_EQ(code_of([] {
              TimeSeriesTable(TimeSeriesTable::positional_index(3), {"a"}, {Series{1, NAN, 2}}, "");
            }),
            ErrorCode::MissingValue);
  EXPECT_EQ(code_of([] {
              TimeSeriesTable(TimeSeriesTable::positional_index(3), {""}, {Series{1, 2, 3}}, "");
            }),
            ErrorCode::InvalidTable);
  EXPECT_EQ(code_of([] {
              TimeSeriesTable(TimeSeriesTable::positional_index(3), {"a"}, {Series{1, 2}}, "");
            }),
            ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([] { (void)TimeSeriesTable({0, 1, 2}, {"a"}, {Series{1, 2, 3}}, "").column("b"); }),
            ErrorCode::UnknownColumn);
}

TEST(ZNormalize, HandEvaluatedColumn) {
  const TimeSeriesTable table({0, 1, 2}, {"a"}, {Series{1, 2, 3}}, "");
  const auto z = z_normalize(table);
  const double expected = std::sqrt(1.5);
  ASSERT_EQ(z.table.width(), 1U);
  EXPECT_NEAR(z.table.columns()[0][0], -expected, 1e-12);
  EXPECT_NEAR(z.table.columns()[0][1], 0.0, 1e-12);
  EXPECT_NEAR(z.table.columns()[0][2], expected, 1e-12);
}

TEST(ZNormalize, ConstantColumnExcludedWithWarning) {
  const TimeSeriesTable table({0, 1, 2}, {"flat", "a"}, {Series{5, 5, 5}, Series{1, 3, 2}}, "");
  const auto z = z_normalize(table);
  EXPECT_EQ(z.constant_columns, (std::vector<std::string>{"flat"}));
  EXPECT_EQ(z.table.names(), (std::vector<std::string>{"a"}));
}

TEST(ZNormalize, MomentsAndIdempotence) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> scale(0.1, 100.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::normal_distribution<double> dist(scale(rng), scale(rng));
    Series a(200);
    for (auto& v : a) v = dist(rng);
    const TimeSeriesTable table(TimeSeriesTable::positional_index(a.size()), {"a"}, {a}, "");
    const auto once = z_normalize(table).table;
    const auto twice = z_normalize(once).table;
    const auto& z = once.columns()[0];
    double mean = 0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(z.size());
    double var = 0;
    for (double v : z) var += (v - mean) * (v - mean);
    var /= static_cast<double>(z.size());
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(var), 1.0, 1e-9);
    for (std::size_t i = 0; i < z.size(); ++i) {
      EXPECT_NEAR(twice.columns()[0][i], z[i], 1e-9);
    }
  }
}

TEST(FilterByMonotonicity, SingleSurvivorIsEmptyResult) {
  const TimeSeriesTable table({0, 1, 2}, {"up", "flat-ish"}, {Series{1, 2, 3}, Series{1, 0, 1}}, "");
  EXPECT_EQ(abs_monotonicity(table.column("up")), 1.0);
  EXPECT_EQ(abs_monotonicity(table.column("flat-ish")), 0.0);
  EXPECT_EQ(code_of([&] { filter_by_monotonicity(table, 0.5); }), ErrorCode::EmptyResult);
}

TEST(FilterByMonotonicity, ThresholdOneKeepsEverything) {
  const TimeSeriesTable table({0, 1, 2}, {"up", "b", "c"},
                              {Series{1, 2, 3}, Series{1, 0, 1}, Series{3, 1, 2}}, "");
  const auto f = filter_by_monotonicity(table, 1.0);
  EXPECT_EQ(f.kept.names(), table.names());
  EXPECT_TRUE(f.dropped.empty());
}

TEST(FilterByMonotonicity, DropsStrictExceedanceAndPreservesOrder) {
  const TimeSeriesTable table({0, 1, 2, 3}, {"d", "up", "a"},
                              {Series{2, 1, 1, 2}, Series{1, 2, 3, 4}, Series{1, 3, 2, 1}}, "");
  const auto f = filter_by_monotonicity(table, 0.5);
  EXPECT_EQ(f.kept.names(), (std::vector<std::string>{"d", "a"}));
  ASSERT_EQ(f.dropped.size(), 1U);
  EXPECT_EQ(f.dropped[0].name, "up");
  EXPECT_EQ(f.dropped[0].abs_rho, 1.0);
  EXPECT_EQ(code_of([&] { filter_by_monotonicity(table, 1.5); }), ErrorCode::InvalidArgument);
}

TEST(FilterByMonotonicity, KeptSetsGrowWithThreshold) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise;
  const std::size_t n = 120;
  std::vector<std::string> names;
  std::vector<Series> cols;
  for (int c = 0; c < 12; ++c) {
    Series s(n);
    const double trend = 0.002 * c;
    for (std::size_t i = 0; i < n; ++i) s[i] = trend * static_cast<double>(i) + 0.1 * noise(rng);
    names.push_back("c" + std::to_string(c));
    cols.push_back(std::move(s));
  }
  const TimeSeriesTable table(TimeSeriesTable::positional_index(n), names, cols, "");
  std::vector<std::string> previous;
  for (double t = 0.0; t <= 1.0; t += 0.05) {
    std::vector<std::string> kept;
    try {
      const auto f = filter_by_monotonicity(table, t);
      kept = f.kept.names();
      for (const auto& s : f.kept_scores) EXPECT_LE(abs_monotonicity(f.kept.column(s.name)), t);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::EmptyResult);
      continue;
    }
    for (const auto& name : previous) {
      EXPECT_NE(std::find(kept.begin(), kept.end(), name), kept.end()) << name << " at " << t;
    }
    previous = kept;
  }
}

TEST(SensorName, IdentifierRule) {
  EXPECT_TRUE(is_valid_sensor_name("s159"));
  EXPECT_TRUE(is_valid_sensor_name("_x-1"));
  EXPECT_FALSE(is_valid_sensor_name("90S-24S"));
  EXPECT_FALSE(is_valid_sensor_name(""));
  EXPECT_FALSE(is_valid_sensor_name("a b"));
}

}  // namespace
}  // namespace lmfd
