#include "lmfd/report.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lmfd/error.hpp"
#include "lmfd/eval.hpp"
#include "lmfd/format.hpp"

namespace lmfd {
namespace {

using nlohmann::ordered_json;

ordered_json sensor_list(const std::vector<SensorScore>& sensors) {
  ordered_json out = ordered_json::array();
  for (const auto& s : sensors) out.push_back({{"name", s.name}, {"abs_rho", s.abs_rho}});
  return out;
}

ordered_json name_or_null(const std::string& name) {
  return name.empty() ? ordered_json(nullptr) : ordered_json(name);
}

}  // namespace

std::string report_to_json(const SearchReport& report, const ReportOptions& options) {
  const auto& structures = enumerate_structures();
  ordered_json doc;
  doc["config"] = {
      {"threshold", report.config.threshold},
      {"top_k", report.config.top_k},
      {"max_evaluations", report.config.budget.max_evaluations},
      {"seed", report.config.budget.seed},
      {"refinement_fraction", report.config.budget.refinement_fraction},
  };
  doc["source"] = report.source;
  doc["kept_sensors"] = sensor_list(report.kept_sensors);
  doc["dropped_sensors"] = sensor_list(report.dropped_sensors);
  doc["constant_sensors"] = report.constant_sensors;
  doc["counts"] = {
      {"sensors", report.counts.sensors},
      {"pairs", report.counts.pairs},
      {"candidates", report.counts.candidates},
      {"invalid", report.counts.invalid},
  };
  ordered_json results = ordered_json::array();
  for (const auto& r : report.results) {
    ordered_json constants = ordered_json::object();
    for (const auto& slot : structures.at(static_cast<std::size_t>(r.structure_id)).slots) {
      const double v = *r.constants.get(slot.id);
      if (slot.kind == SlotKind::SpanInteger) {
        constants[std::string(slot_name(slot.id))] = static_cast<long long>(v);
      } else {
        constants[std::string(slot_name(slot.id))] = v;
      }
    }
    results.push_back({
        {"rank", r.rank},
        {"equation", r.equation},
        {"display", r.display},
        {"structure_id", r.structure_id},
        {"s1", name_or_null(r.s1)},
        {"s2", name_or_null(r.s2)},
        {"constants", std::move(constants)},
        {"abs_rho", r.abs_rho},
    });
  }
  doc["results"] = std::move(results);
  doc["wall_time_seconds"] =
      options.include_timing ? ordered_json(report.wall_time_seconds) : ordered_json(nullptr);
  return doc.dump(2) + "\n";
}

std::string report_to_text(const SearchReport& report) {
  std::ostringstream out;
  out << "rank  |rho|   equation\n";
  for (const auto& r : report.results) {
    out << r.rank << (r.rank < 10 ? "     " : "    ") << format_fixed3(r.abs_rho) << "   "
        << r.display << '\n';
  }
  out << "raw sensors:\n";
  for (const auto& s : report.kept_sensors) {
    out << "  " << s.name << "  " << format_fixed3(s.abs_rho) << '\n';
  }
  out << "pairs " << report.counts.pairs << ", candidates " << report.counts.candidates
      << ", invalid " << report.counts.invalid << '\n';
  return out.str();
}

std::vector<double> proxy_series(const TimeSeriesTable& table, const RankedResult& result) {
  const auto& structure = enumerate_structures().at(static_cast<std::size_t>(result.structure_id));
  // an unused role still needs a same-length binding
  const auto& s1 = table.column(result.s1.empty() ? result.s2 : result.s1);
  const auto& s2 = table.column(result.s2.empty() ? result.s1 : result.s2);
  return evaluate(structure, Binding{s1, s2, result.constants}).series;
}

void write_proxy_csv(const std::filesystem::path& path, const TimeSeriesTable& table,
                     const std::vector<double>& proxy, const std::string& s1_name,
                     const std::string& s2_name) {
  if (proxy.size() != table.rows()) {
    throw Error(ErrorCode::LengthMismatch, "proxy length does not match the table");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  const Series* s1 = s1_name.empty() ? nullptr : &table.column(s1_name);
  const Series* s2 = s2_name.empty() ? nullptr : &table.column(s2_name);
  out << "index,proxy,s1,s2\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out << table.index()[r] << ',' << format_shortest(proxy[r]) << ',';
    if (s1 != nullptr) out << format_shortest((*s1)[r]);
    out << ',';
    if (s2 != nullptr) out << format_shortest((*s2)[r]);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed while writing '" + path.string() + "'");
}

}  // namespace lmfd
