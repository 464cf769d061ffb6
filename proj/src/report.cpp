#include "heatlab/report.hpp"

#include <cstdio>
#include <fstream>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace heatlab {

namespace {

using json = nlohmann::json;

std::string float17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool Report::any_failed() const {
  for (const auto& r : results)
    if (r.status == CheckStatus::fail || r.status == CheckStatus::error) return true;
  return false;
}

std::string Report::to_json() const {
  json doc;
  doc["version"] = version;
  doc["schema"] = kReportSchema;
  doc["config"] = config_echo;
  doc["environment"] = environment;
  json out_results = json::array();
  for (const auto& r : results) {
    json jr;
    jr["name"] = r.name;
    jr["space"] = r.space_id;
    jr["grid"] = r.grid_summary;
    jr["status"] = to_string(r.status);
    jr["worst_margin"] = r.worst_margin;
    jr["margin_scale"] = r.margin_scale;
    jr["constants"] = r.constants;
    jr["witness"] = r.witness;
    if (!r.note.empty()) jr["note"] = r.note;
    out_results.push_back(std::move(jr));
  }
  doc["results"] = std::move(out_results);
  doc["timings"] = timings_ms;
  return doc.dump(2);
}

void write_csv(const SweepTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // pin LF endings
  for (size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << float17(row[c]);
    out << "\n";
  }
}

std::map<std::string, std::string> environment_fingerprint() {
  std::map<std::string, std::string> env;
#if defined(__clang__)
  env["compiler"] = "clang " + std::to_string(__clang_major__) + "." +
                    std::to_string(__clang_minor__);
#elif defined(__GNUC__)
  env["compiler"] = "gcc " + std::to_string(__GNUC__) + "." +
                    std::to_string(__GNUC_MINOR__);
#endif
  env["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
#if defined(__linux__)
  env["platform"] = "linux";
#elif defined(__APPLE__)
  env["platform"] = "darwin";
#else
  env["platform"] = "other";
#endif
  return env;
}

}  // namespace heatlab
