#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "heatlab/check.hpp"

namespace heatlab {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

struct Report {
  std::string version = kToolVersion;
  std::string config_echo;                  // TOML round-trip of the run config
  std::vector<CheckResult> results;
  std::map<std::string, double> timings_ms;  // per (space, suite) wall clock
  std::map<std::string, std::string> environment;

  bool any_failed() const;

  /// JSON with top-level keys {version, config, results[], timings}.
  std::string to_json() const;
};

/// 17-significant-digit CSV with a header row, UTF-8, LF endings.
void write_csv(const SweepTable& table, const std::filesystem::path& path);

std::map<std::string, std::string> environment_fingerprint();

}  // namespace heatlab
