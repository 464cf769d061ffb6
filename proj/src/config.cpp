#include "heatlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "heatlab/verifiers.hpp"

namespace heatlab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return {};
  return s.substr(a, b - a + 1);
}

std::string float17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TomlValue parse_scalar(const std::string& raw) {
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
    return raw.substr(1, raw.size() - 2);
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.find_first_of(".eE") == std::string::npos &&
      raw.find("inf") == std::string::npos && raw.find("nan") == std::string::npos) {
    try {
      size_t used = 0;
      const int64_t v = std::stoll(raw, &used);
      if (used == raw.size()) return v;
    } catch (...) {
    }
  }
  try {
    size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used == raw.size()) return v;
  } catch (...) {
  }
  throw std::invalid_argument("cannot parse TOML value: " + raw);
}

std::vector<std::string> split_top_level(const std::string& body) {
  std::vector<std::string> parts;
  std::string cur;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  const std::string last = trim(cur);
  if (!last.empty()) parts.push_back(last);
  return parts;
}

}  // namespace

std::map<std::string, TomlValue> parse_flat_toml(const std::string& text) {
  std::map<std::string, TomlValue> doc;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments outside quotes
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("TOML line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("TOML line " + std::to_string(line_no) +
                                  ": empty key or value");
    if (value.front() == '[') {
      if (value.back() != ']')
        throw std::invalid_argument("TOML line " + std::to_string(line_no) +
                                    ": unterminated array");
      const auto parts = split_top_level(value.substr(1, value.size() - 2));
      if (!parts.empty() && parts.front().front() == '"') {
        std::vector<std::string> items;
        for (const auto& p : parts) items.push_back(std::get<std::string>(parse_scalar(p)));
        doc[key] = std::move(items);
      } else {
        std::vector<double> items;
        for (const auto& p : parts) {
          const TomlValue v = parse_scalar(p);
          items.push_back(std::holds_alternative<int64_t>(v)
                              ? static_cast<double>(std::get<int64_t>(v))
                              : std::get<double>(v));
        }
        doc[key] = std::move(items);
      }
    } else {
      doc[key] = parse_scalar(value);
    }
  }
  return doc;
}

std::string emit_flat_toml(const std::map<std::string, TomlValue>& doc) {
  std::ostringstream out;
  for (const auto& [key, value] : doc) {
    out << key << " = ";
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, bool>) {
            out << (v ? "true" : "false");
          } else if constexpr (std::is_same_v<T, int64_t>) {
            out << v;
          } else if constexpr (std::is_same_v<T, double>) {
            out << float17(v);
          } else if constexpr (std::is_same_v<T, std::string>) {
            out << '"' << v << '"';
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            out << '[';
            for (size_t i = 0; i < v.size(); ++i)
              out << (i ? ", " : "") << float17(v[i]);
            out << ']';
          } else {
            out << '[';
            for (size_t i = 0; i < v.size(); ++i)
              out << (i ? ", " : "") << '"' << v[i] << '"';
            out << ']';
          }
        },
        value);
    out << "\n";
  }
  return out.str();
}

void RunConfig::validate() const {
  if (spaces.empty()) throw std::invalid_argument("no spaces configured");
  for (const auto& s : spaces) parse_space_argument(s);
  for (const auto& name : suites) {
    if (name == "all") continue;
    if (!find_checker(name))
      throw std::invalid_argument("unknown suite: " + name);
  }
  if (suites.empty()) throw std::invalid_argument("no suites configured");
  if (t_min <= 0.0 || t_max <= t_min)
    throw std::invalid_argument("need 0 < t_min < t_max");
  if (t_per_decade < 1) throw std::invalid_argument("t_per_decade must be >= 1");
}

GridSpec RunConfig::grid(bool discrete) const {
  GridSpec g = discrete ? GridSpec::discrete_default() : GridSpec::analytic_default();
  g.t_grid = log_grid(t_min, t_max, t_per_decade);
  if (!eps_list.empty()) g.eps_list = eps_list;
  if (!p_list.empty()) {
    g.p_list = p_list;
    g.p_list.push_back(std::numeric_limits<double>::infinity());
  }
  if (tolerance > 0.0) g.tolerance = tolerance;
  g.validate();
  return g;
}

std::string RunConfig::to_toml() const {
  std::map<std::string, TomlValue> doc;
  doc["spaces"] = spaces;
  doc["suites"] = suites;
  doc["seed"] = static_cast<int64_t>(seed);
  doc["out"] = out_dir;
  doc["jobs"] = static_cast<int64_t>(jobs);
  doc["cache"] = cache;
  doc["sample_n"] = static_cast<int64_t>(sample_n);
  doc["discretize_models"] = discretize_models;
  doc["tolerance"] = tolerance;
  doc["t_min"] = t_min;
  doc["t_max"] = t_max;
  doc["t_per_decade"] = static_cast<int64_t>(t_per_decade);
  doc["eps"] = eps_list;
  doc["p"] = p_list;
  return emit_flat_toml(doc);
}

RunConfig RunConfig::from_toml(const std::string& text) {
  const auto doc = parse_flat_toml(text);
  RunConfig cfg;
  auto get_int = [&](const char* key, int64_t fallback) {
    auto it = doc.find(key);
    if (it == doc.end()) return fallback;
    if (std::holds_alternative<int64_t>(it->second))
      return std::get<int64_t>(it->second);
    return static_cast<int64_t>(std::get<double>(it->second));
  };
  auto get_double = [&](const char* key, double fallback) {
    auto it = doc.find(key);
    if (it == doc.end()) return fallback;
    if (std::holds_alternative<double>(it->second)) return std::get<double>(it->second);
    return static_cast<double>(std::get<int64_t>(it->second));
  };
  auto get_string = [&](const char* key, const std::string& fallback) {
    auto it = doc.find(key);
    return it == doc.end() ? fallback : std::get<std::string>(it->second);
  };
  if (auto it = doc.find("spaces"); it != doc.end())
    cfg.spaces = std::get<std::vector<std::string>>(it->second);
  if (auto it = doc.find("suites"); it != doc.end())
    cfg.suites = std::get<std::vector<std::string>>(it->second);
  cfg.seed = static_cast<uint64_t>(get_int("seed", 0));
  cfg.out_dir = get_string("out", "out");
  cfg.jobs = static_cast<int>(get_int("jobs", 0));
  cfg.cache = get_string("cache", "none");
  cfg.sample_n = static_cast<int>(get_int("sample_n", 0));
  if (auto it = doc.find("discretize_models"); it != doc.end())
    cfg.discretize_models = std::get<bool>(it->second);
  cfg.tolerance = get_double("tolerance", 0.0);
  cfg.t_min = get_double("t_min", 1.0 / 16.0);
  cfg.t_max = get_double("t_max", 4.0);
  cfg.t_per_decade = static_cast<int>(get_int("t_per_decade", 16));
  if (auto it = doc.find("eps"); it != doc.end())
    cfg.eps_list = std::get<std::vector<double>>(it->second);
  if (auto it = doc.find("p"); it != doc.end())
    cfg.p_list = std::get<std::vector<double>>(it->second);
  return cfg;
}

bool space_argument_is_directory(const std::string& arg) {
  return std::filesystem::exists(std::filesystem::path(arg) / "meta.json");
}

SpaceDescriptor parse_space_argument(const std::string& arg) {
  if (space_argument_is_directory(arg)) {
    // Descriptor fields come from meta.json at load time.
    SpaceDescriptor d;
    d.kind = SpaceKind::sampled;
    return d;
  }
  const size_t colon = arg.find(':');
  const std::string kind_str = colon == std::string::npos ? arg : arg.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::string rest = arg.substr(colon + 1);
    std::replace(rest.begin(), rest.end(), ':', ',');
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const size_t eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("bad space parameter: " + item);
      kv[trim(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
    }
  }
  auto value_or = [&](const char* key, double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  if (kind_str == "euclidean")
    return SpaceDescriptor::euclidean(static_cast<int>(value_or("N", 1.0)),
                                      value_or("R", 8.0));
  if (kind_str == "hyperbolic3") return SpaceDescriptor::hyperbolic3(value_or("R", 3.0));
  if (kind_str == "circle") return SpaceDescriptor::circle(value_or("L", 2.0 * M_PI));
  throw std::invalid_argument("unknown space argument: " + arg);
}

}  // namespace heatlab
