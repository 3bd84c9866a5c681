#include "lmfd/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "lmfd/error.hpp"
#include "lmfd/eval.hpp"
#include "lmfd/format.hpp"
#include "lmfd/grammar.hpp"
#include "lmfd/metrics.hpp"
#include "lmfd/report.hpp"
#include "lmfd/search.hpp"
#include "lmfd/synth.hpp"
#include "lmfd/timeseries.hpp"

namespace lmfd::cli {
namespace {

namespace fs = std::filesystem;

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

class Log {
 public:
  Log(std::ostream& err, LogLevel level) : err_(err), level_(level) {}

  bool enabled(LogLevel level) const { return level <= level_; }
  void error(const std::string& msg) const { err_ << "error: " << msg << '\n'; }
  void warn(const std::string& msg) const {
    if (enabled(LogLevel::Warn)) err_ << "warning: " << msg << '\n';
  }
  void info(const std::string& msg) const {
    if (enabled(LogLevel::Info)) err_ << msg;
  }
  void debug(const std::string& msg) const {
    if (enabled(LogLevel::Debug)) err_ << "debug: " << msg << '\n';
  }

 private:
  std::ostream& err_;
  LogLevel level_;
};

struct GlobalOptions {
  std::uint64_t seed = 42;
  std::string jobs = "auto";
  std::string log_level = "info";
};

struct InputOptions {
  std::string input;
  std::string time_column;
  bool positional_index = false;
};

struct DiscoverOptions {
  InputOptions in;
  std::string output;
  double threshold = 1.0;
  int top_k = 5;
  int budget = 200;
  double refinement_fraction = 0.5;
  std::string emit_series;
  bool no_timing = false;
};

struct SynthOptions {
  std::string out;
  std::size_t n = 1000;
  double noise_sigma = 0.01;
};

struct EvalOptions {
  InputOptions in;
  std::string equation;
  std::string emit_series;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--input", in.input, "CSV file with a header row")->required();
  cmd->add_option("--time-column", in.time_column,
                  "Column holding the time index (integer or ISO-8601)");
  cmd->add_flag("--positional-index", in.positional_index,
                "Use row positions as the index, even if a time-like first column exists");
}

int parse_jobs(const std::string& text) {
  if (text == "auto") return 0;
  std::size_t used = 0;
  int jobs = 0;
  try {
    jobs = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || jobs < 1) {
    throw Error(ErrorCode::InvalidArgument, "--jobs expects a positive integer or 'auto'");
  }
  return jobs;
}

LogLevel parse_log_level(const std::string& text) {
  if (text == "error") return LogLevel::Error;
  if (text == "warn") return LogLevel::Warn;
  if (text == "info") return LogLevel::Info;
  if (text == "debug") return LogLevel::Debug;
  throw Error(ErrorCode::InvalidArgument, "--log-level expects error, warn, info or debug");
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// A first header named like a time axis is taken as the index unless the
// caller says otherwise.
std::optional<std::string> resolve_time_column(const InputOptions& in) {
  if (!in.time_column.empty()) return in.time_column;
  if (in.positional_index) return std::nullopt;
  std::ifstream file(in.input, std::ios::binary);
  std::string header;
  if (!file || !std::getline(file, header)) return std::nullopt;
  if (header.starts_with("\xEF\xBB\xBF")) header.erase(0, 3);
  std::string first = header.substr(0, header.find(','));
  if (!first.empty() && first.back() == '\r') first.pop_back();
  if (first.size() >= 2 && first.front() == '"' && first.back() == '"') {
    first = first.substr(1, first.size() - 2);
  }
  static const std::vector<std::string> kTimeNames{"index", "time", "timestamp", "date", "datetime"};
  if (std::find(kTimeNames.begin(), kTimeNames.end(), lowercase(first)) != kTimeNames.end()) {
    return first;
  }
  return std::nullopt;
}

TimeSeriesTable load_input(const InputOptions& in) {
  if (!fs::exists(in.input)) {
    throw Error(ErrorCode::Io, "input file '" + in.input + "' does not exist");
  }
  return load_csv(in.input, resolve_time_column(in));
}

NormalizedTable load_normalized(const InputOptions& in, const Log& log) {
  auto normalized = z_normalize(load_input(in));
  for (const auto& name : normalized.constant_columns) {
    log.warn("column '" + name + "' is constant and was excluded");
  }
  return normalized;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  file << text;
  if (!file) throw Error(ErrorCode::Io, "failed while writing '" + path + "'");
}

int cmd_discover(const DiscoverOptions& opt, const GlobalOptions& global, const Log& log,
                 std::ostream& out) {
  if (!(opt.threshold >= 0.0 && opt.threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "--threshold must lie in [0, 1]");
  }
  const auto table = load_input(opt.in);

  SearchConfig config;
  config.threshold = opt.threshold;
  config.top_k = opt.top_k;
  config.budget.max_evaluations = opt.budget;
  config.budget.seed = global.seed;
  config.budget.refinement_fraction = opt.refinement_fraction;
  config.parallelism = parse_jobs(global.jobs);

  SearchReport report;
  try {
    report = run_search(table, config);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyResult) {
      log.error(std::string("threshold ") + format_shortest(opt.threshold) +
               " leaves too few sensors: " + e.what());
      return kExitEmptyResult;
    }
    throw;
  }
  for (const auto& name : report.constant_sensors) {
    log.warn("column '" + name + "' is constant and was excluded");
  }
  for (const auto& s : report.kept_sensors) {
    if (!is_valid_sensor_name(s.name)) {
      log.warn("column '" + s.name + "' is not a valid identifier; its equations cannot be re-parsed");
    }
  }

  const std::string json = report_to_json(report, ReportOptions{!opt.no_timing});
  if (opt.output.empty()) {
    out << json;
  } else {
    write_text(opt.output, json);
  }
  log.info(report_to_text(report));

  if (!opt.emit_series.empty()) {
    fs::create_directories(opt.emit_series);
    const auto normalized = z_normalize(table).table;
    for (const auto& r : report.results) {
      const auto path = fs::path(opt.emit_series) / ("rank_" + std::to_string(r.rank) + ".csv");
      write_proxy_csv(path, normalized, proxy_series(normalized, r), r.s1, r.s2);
      log.debug("wrote " + path.string());
    }
  }
  return kExitOk;
}

int cmd_synth(const SynthOptions& opt, const GlobalOptions& global) {
  const auto table = generate_artificial(SynthConfig{opt.n, global.seed, opt.noise_sigma});
  write_csv(table, opt.out);
  return kExitOk;
}

int cmd_grammar(bool count_only, std::ostream& out) {
  const auto& structures = enumerate_structures();
  if (count_only) {
    out << structures.size() << '\n';
    return kExitOk;
  }
  for (const auto& s : structures) {
    out << s.id << '\t' << render(s, "s1", "s2") << '\n';
  }
  return kExitOk;
}

int cmd_eval(const EvalOptions& opt, const Log& log, std::ostream& out) {
  const ParsedEquation parsed = parse_equation(opt.equation);
  const auto normalized = load_normalized(opt.in, log);
  const auto& table = normalized.table;
  for (const auto* name : {&parsed.s1_name, &parsed.s2_name}) {
    if (!name->empty() && !table.find(*name)) {
      throw Error(ErrorCode::UnknownColumn, "unknown sensor '" + *name + "' in equation");
    }
  }
  const auto& s1 = table.column(parsed.s1_name.empty() ? parsed.s2_name : parsed.s1_name);
  const auto& s2 = table.column(parsed.s2_name.empty() ? parsed.s1_name : parsed.s2_name);
  const Evaluation eval = evaluate(*parsed.structure, Binding{s1, s2, parsed.values});
  if (!eval.valid) {
    throw Error(ErrorCode::NonFiniteInput, "equation produces non-finite values on this data");
  }
  out << format_shortest(abs_monotonicity(eval.series)) << '\n';
  if (!opt.emit_series.empty()) {
    write_proxy_csv(opt.emit_series, table, eval.series, parsed.s1_name, parsed.s2_name);
  }
  return kExitOk;
}

int cmd_rank(const InputOptions& opt, const Log& log, std::ostream& out) {
  const auto normalized = load_normalized(opt, log);
  std::vector<SensorScore> scores;
  for (std::size_t c = 0; c < normalized.table.width(); ++c) {
    scores.push_back({normalized.table.names()[c], abs_monotonicity(normalized.table.columns()[c])});
  }
  std::stable_sort(scores.begin(), scores.end(), [](const SensorScore& a, const SensorScore& b) {
    if (a.abs_rho != b.abs_rho) return a.abs_rho > b.abs_rho;
    return a.name < b.name;
  });
  out << "name,abs_rho\n";
  for (const auto& s : scores) out << s.name << ',' << format_shortest(s.abs_rho) << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Latent monotonic feature discovery over multivariate time series", "lmfd"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for fitting and synthesis")->capture_default_str();
  app.add_option("--jobs", global.jobs, "Worker threads, or 'auto'")->capture_default_str();
  app.add_option("--log-level", global.log_level, "error, warn, info or debug")
      ->capture_default_str();

  DiscoverOptions discover;
  auto* discover_cmd = app.add_subcommand("discover", "Search for latent monotonic features");
  add_input_options(discover_cmd, discover.in);
  discover_cmd->add_option("--output", discover.output, "JSON report path (default: stdout)");
  discover_cmd->add_option("--threshold", discover.threshold,
                           "Drop sensors whose |rho| exceeds this value")
      ->capture_default_str();
  discover_cmd->add_option("--top-k", discover.top_k, "Number of ranked results")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  discover_cmd->add_option("--budget", discover.budget, "Objective evaluations per candidate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  discover_cmd->add_option("--refinement-fraction", discover.refinement_fraction,
                           "Share of the budget spent on local refinement")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  discover_cmd->add_option("--emit-series", discover.emit_series,
                           "Directory for per-result proxy CSVs");
  discover_cmd->add_flag("--no-timing", discover.no_timing,
                         "Write wall_time_seconds as null for reproducible reports");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write the artificial benchmark dataset");
  synth_cmd->add_option("--out", synth.out, "Output CSV path")->required();
  synth_cmd->add_option("--n", synth.n, "Number of rows")->capture_default_str();
  synth_cmd->add_option("--noise-sigma", synth.noise_sigma, "Gaussian noise standard deviation")
      ->capture_default_str();

  bool count_only = false;
  auto* grammar_cmd = app.add_subcommand("grammar", "List the canonical equation structures");
  grammar_cmd->add_flag("--count", count_only, "Print only the number of structures");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score one equation on a dataset");
  add_input_options(eval_cmd, eval.in);
  eval_cmd->add_option("--equation", eval.equation, "Equation in report syntax")->required();
  eval_cmd->add_option("--emit-series", eval.emit_series, "CSV path for the proxy series");

  InputOptions rank_in;
  auto* rank_cmd = app.add_subcommand("rank", "Rank raw columns by |rho| against the index");
  add_input_options(rank_cmd, rank_in);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  try {
    const Log log(err, parse_log_level(global.log_level));
    parse_jobs(global.jobs);
    if (*discover_cmd) return cmd_discover(discover, global, log, out);
    if (*synth_cmd) return cmd_synth(synth, global);
    if (*grammar_cmd) return cmd_grammar(count_only, out);
    if (*eval_cmd) return cmd_eval(eval, log, out);
    if (*rank_cmd) return cmd_rank(rank_in, log, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("lmfd");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace lmfd::cli
