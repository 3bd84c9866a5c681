#include "lmfd/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "lmfd/error.hpp"

namespace lmfd {
namespace {

int resolve_workers(int parallelism, std::size_t work) {
  int workers = parallelism;
  if (workers <= 0) workers = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(work, 1)));
}

}  // namespace

std::uint64_t unordered_pair_count(std::uint64_t sensors) noexcept {
  return sensors < 2 ? 0 : sensors * (sensors - 1) / 2;
}

std::vector<CandidateInstance> enumerate_candidates(std::vector<std::string> sensor_names) {
  std::sort(sensor_names.begin(), sensor_names.end());
  if (std::adjacent_find(sensor_names.begin(), sensor_names.end()) != sensor_names.end()) {
    throw Error(ErrorCode::DuplicateColumn, "sensor names must be unique");
  }
  if (sensor_names.size() < 2) {
    throw Error(ErrorCode::TooFewSensors,
                "need at least 2 sensors, got " + std::to_string(sensor_names.size()));
  }
  const auto& structures = enumerate_structures();
  std::vector<CandidateInstance> out;
  out.reserve(2 * unordered_pair_count(sensor_names.size()) * structures.size());
  std::uint64_t pair_id = 0;
  for (std::size_t i = 0; i < sensor_names.size(); ++i) {
    for (std::size_t j = i + 1; j < sensor_names.size(); ++j) {
      for (const auto& [first, second] : {std::pair{i, j}, std::pair{j, i}}) {
        for (const auto& s : structures) {
          out.push_back({s.id, sensor_names[first], sensor_names[second], pair_id});
        }
        ++pair_id;
      }
    }
  }
  return out;
}

std::vector<CandidateScore> score_candidates(const TimeSeriesTable& table,
                                             const std::vector<CandidateInstance>& candidates,
                                             const FitBudget& budget, int parallelism) {
  const auto& structures = enumerate_structures();
  std::vector<CandidateScore> scores(candidates.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      for (std::size_t i = next.fetch_add(1); i < candidates.size(); i = next.fetch_add(1)) {
        const auto& c = candidates[i];
        scores[i].candidate = c;
        scores[i].fit = fit_constants(structures.at(static_cast<std::size_t>(c.structure_id)),
                                      table.column(c.s1_name), table.column(c.s2_name), budget,
                                      c.pair_id);
      }
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(candidates.size());
    }
  };

  const int workers = resolve_workers(parallelism, candidates.size());
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return scores;
}

std::vector<RankedResult> rank_results(const std::vector<CandidateScore>& scores, int top_k) {
  if (top_k < 1) throw Error(ErrorCode::InvalidArgument, "top_k must be >= 1");
  const auto& structures = enumerate_structures();

  struct Entry {
    const CandidateScore* score;
    std::string s1;
    std::string s2;
  };
  std::vector<Entry> entries;
  std::set<std::string> bare_seen;
  for (const auto& sc : scores) {
    if (!sc.fit.valid) continue;
    const auto& s = structures.at(static_cast<std::size_t>(sc.candidate.structure_id));
    Entry e{&sc, sc.candidate.s1_name, sc.candidate.s2_name};
    if (s.production == Production::Bare) {
      // identical across partners, so one entry per sensor
      if (!bare_seen.insert(e.s1).second) continue;
      e.s2.clear();
    }
    entries.push_back(std::move(e));
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.score->fit.score != b.score->fit.score) return a.score->fit.score > b.score->fit.score;
    return std::tie(a.score->candidate.structure_id, a.s1, a.s2) <
           std::tie(b.score->candidate.structure_id, b.s1, b.s2);
  });
  if (entries.size() > static_cast<std::size_t>(top_k)) {
    entries.resize(static_cast<std::size_t>(top_k));
  }

  std::vector<RankedResult> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    const auto& s = structures.at(static_cast<std::size_t>(e.score->candidate.structure_id));
    const auto& fit = e.score->fit;
    RankedResult r;
    r.rank = static_cast<int>(out.size()) + 1;
    r.structure_id = s.id;
    r.s1 = s.uses(Role::S1) ? e.s1 : std::string{};
    r.s2 = s.uses(Role::S2) ? e.s2 : std::string{};
    r.constants = fit.values;
    r.abs_rho = fit.score;
    r.equation = render(s, e.s1, e.s2, &fit.values, NumberStyle::RoundTrip);
    r.display = render(s, e.s1, e.s2, &fit.values, NumberStyle::Fixed3);
    out.push_back(std::move(r));
  }
  return out;
}

SearchReport run_search(const TimeSeriesTable& table, const SearchConfig& config) {
  if (config.top_k < 1) throw Error(ErrorCode::InvalidArgument, "top_k must be >= 1");
  const auto started = std::chrono::steady_clock::now();

  SearchReport report;
  report.source = table.provenance();
  report.config = config;

  auto normalized = z_normalize(table);
  report.constant_sensors = normalized.constant_columns;
  auto filtered = filter_by_monotonicity(normalized.table, config.threshold);
  report.kept_sensors = filtered.kept_scores;
  report.dropped_sensors = filtered.dropped;

  const auto candidates = enumerate_candidates(filtered.kept.names());
  const auto scores = score_candidates(filtered.kept, candidates, config.budget, config.parallelism);

  report.counts.sensors = filtered.kept.width();
  report.counts.pairs = unordered_pair_count(filtered.kept.width());
  report.counts.candidates = candidates.size();
  report.counts.invalid = static_cast<std::uint64_t>(
      std::count_if(scores.begin(), scores.end(), [](const auto& s) { return !s.fit.valid; }));
  report.results = rank_results(scores, config.top_k);

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace lmfd
