#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "heatlab/check.hpp"
#include "heatlab/model.hpp"

namespace heatlab {

/// A run configuration.  Serializes to a flat TOML document and round-trips
/// losslessly; the serialized echo is embedded into every report.
struct RunConfig {
  std::vector<std::string> spaces;  // descriptor strings or sample directories
  std::vector<std::string> suites;  // checker names, or the single entry "all"
  uint64_t seed = 0;
  std::string out_dir = "out";
  int jobs = 0;  // 0 = hardware concurrency
  std::string cache = "none";  // "none" or a directory for spectrum caches
  int sample_n = 0;            // model discretization override
  bool discretize_models = false;
  double tolerance = 0.0;      // 0 = per-space default
  double t_min = 1.0 / 16.0;
  double t_max = 4.0;
  int t_per_decade = 16;
  std::vector<double> eps_list = {0.1, 0.5, 1.0};
  std::vector<double> p_list = {1.0, 2.0, 4.0};

  void validate() const;  // throws on unknown suite names or empty spaces
  GridSpec grid(bool discrete) const;

  std::string to_toml() const;
  static RunConfig from_toml(const std::string& text);
};

/// "euclidean:N=2,R=8", "circle:L=6.2831853", "hyperbolic3:R=3", or a path
/// to a saved sample directory (detected by an existing meta.json).
SpaceDescriptor parse_space_argument(const std::string& arg);
bool space_argument_is_directory(const std::string& arg);

// Minimal flat-TOML support (key = value with strings, numbers, booleans
// and homogeneous scalar arrays; '#' comments).  There is no system TOML
// library in this toolchain; the subset is pinned by round-trip tests.
using TomlValue = std::variant<bool, int64_t, double, std::string,
                               std::vector<double>, std::vector<std::string>>;
std::map<std::string, TomlValue> parse_flat_toml(const std::string& text);
std::string emit_flat_toml(const std::map<std::string, TomlValue>& doc);

}  // namespace heatlab
