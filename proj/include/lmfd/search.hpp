#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lmfd/fit.hpp"
#include "lmfd/grammar.hpp"
#include "lmfd/timeseries.hpp"

namespace lmfd {

/// A grammar structure bound to an ordered sensor pair.
struct CandidateInstance {
  int structure_id = 0;
  std::string s1_name;
  std::string s2_name;
  /// Index of the ordered pair (orientation) in enumeration order.
  std::uint64_t pair_id = 0;
};

std::uint64_t unordered_pair_count(std::uint64_t sensors) noexcept;

/// Every unordered pair in lexicographic name order, both orientations
/// (lexicographically smaller name as s1 first), each crossed with all 55
/// structures: 110 * C(m, 2) candidates. Throws Error(TooFewSensors) for m < 2.
std::vector<CandidateInstance> enumerate_candidates(std::vector<std::string> sensor_names);

struct SearchConfig {
  double threshold = 1.0;
  int top_k = 5;
  FitBudget budget;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  int parallelism = 0;
};

struct CandidateScore {
  CandidateInstance candidate;
  FitResult fit;
};

/// Fits every candidate against columns of `table`. Output order matches
/// `candidates` regardless of the worker count.
std::vector<CandidateScore> score_candidates(const TimeSeriesTable& table,
                                             const std::vector<CandidateInstance>& candidates,
                                             const FitBudget& budget, int parallelism);

struct RankedResult {
  int rank = 0;
  /// Shortest round-trip constants; re-parses to the exact fitted values.
  std::string equation;
  /// Three-decimal form for people.
  std::string display;
  int structure_id = 0;
  /// Empty when the structure does not read that role.
  std::string s1;
  std::string s2;
  Assignment constants;
  double abs_rho = 0.0;
};

struct SearchCounts {
  std::uint64_t sensors = 0;
  std::uint64_t pairs = 0;
  std::uint64_t candidates = 0;
  std::uint64_t invalid = 0;
};

struct SearchReport {
  std::string source;
  SearchConfig config;
  std::vector<SensorScore> kept_sensors;
  std::vector<SensorScore> dropped_sensors;
  std::vector<std::string> constant_sensors;
  SearchCounts counts;
  std::vector<RankedResult> results;
  double wall_time_seconds = 0.0;
};

/// Sorts valid scores by |rho| descending, ties by (structure id, s1, s2), and
/// keeps the first `top_k`. The bare-sensor structure appears once per sensor.
std::vector<RankedResult> rank_results(const std::vector<CandidateScore>& scores, int top_k);

/// z-normalize, threshold filter, enumerate, fit, rank.
/// Throws Error(EmptyResult) when fewer than two sensors survive filtering.
SearchReport run_search(const TimeSeriesTable& table, const SearchConfig& config);

}  // namespace lmfd
