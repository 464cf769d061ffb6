#include "heatlab/space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace heatlab {

namespace {

using json = nlohmann::json;

double circle_arc_distance(double a, double b, double circumference) {
  const double d = std::abs(a - b);
  return std::min(d, circumference - d);
}

/// Geodesic distance in H^3 between points given in polar form (r, unit
/// direction u): cosh d = cosh r1 cosh r2 - sinh r1 sinh r2 <u1, u2>.
double hyperbolic_distance(double r1, const Eigen::Vector3d& u1, double r2,
                           const Eigen::Vector3d& u2) {
  const double c = std::max(
      1.0, std::cosh(r1) * std::cosh(r2) - std::sinh(r1) * std::sinh(r2) * u1.dot(u2));
  return std::acosh(c);
}

SampledSpace sample_circle(const SpaceDescriptor& desc, int n) {
  if (n < 4) throw std::invalid_argument("circle sample needs n >= 4");
  const double circumference = desc.circumference;
  SampledSpace s;
  s.desc = desc;
  s.coords.resize(n, 1);
  s.weight = Eigen::VectorXd::Constant(n, circumference / n);
  for (int i = 0; i < n; ++i) s.coords(i, 0) = circumference * i / n;
  s.distance.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s.distance(i, j) = circle_arc_distance(s.coords(i, 0), s.coords(j, 0), circumference);
  s.core.assign(n, 1);
  s.trust_radius = Eigen::VectorXd::Constant(n, 0.5 * circumference);
  return s;
}

SampledSpace sample_euclidean(const SpaceDescriptor& desc, int n) {
  const int n_dim = static_cast<int>(desc.dimension);
  const double r_max = desc.truncation_radius;
  const int per_axis = static_cast<int>(std::floor(std::pow(n + 0.5, 1.0 / n_dim)));
  if (per_axis < 2)
    throw std::invalid_argument("euclidean sample needs at least 2 points per axis");
  const int count = static_cast<int>(std::pow(per_axis, n_dim) + 0.5);
  const double spacing = 2.0 * r_max / (per_axis - 1);

  SampledSpace s;
  s.desc = desc;
  s.coords.resize(count, n_dim);
  std::vector<int> idx(n_dim, 0);
  for (int p = 0; p < count; ++p) {
    for (int d = 0; d < n_dim; ++d) s.coords(p, d) = -r_max + spacing * idx[d];
    for (int d = n_dim - 1; d >= 0; --d) {
      if (++idx[d] < per_axis) break;
      idx[d] = 0;
    }
  }
  s.weight = Eigen::VectorXd::Constant(count, std::pow(spacing, n_dim));
  s.distance.resize(count, count);
  for (int i = 0; i < count; ++i) {
    s.distance(i, i) = 0.0;
    for (int j = i + 1; j < count; ++j) {
      const double d = (s.coords.row(i) - s.coords.row(j)).norm();
      s.distance(i, j) = d;
      s.distance(j, i) = d;
    }
  }
  s.core.assign(count, 0);
  s.trust_radius.resize(count);
  for (int i = 0; i < count; ++i) {
    double boundary_gap = r_max;
    for (int d = 0; d < n_dim; ++d)
      boundary_gap = std::min(boundary_gap, r_max - std::abs(s.coords(i, d)));
    s.trust_radius(i) = boundary_gap;
    s.core[i] = boundary_gap >= 0.5 * r_max - 1e-12 ? 1 : 0;
  }
  return s;
}

SampledSpace sample_hyperbolic3(const SpaceDescriptor& desc, int n, uint64_t seed) {
  if (n < 16) throw std::invalid_argument("hyperbolic3 sample needs n >= 16");
  const double r_max = desc.truncation_radius;
  const double total = M_PI * (std::sinh(2.0 * r_max) - 2.0 * r_max);

  // Equal-thickness shells; points per shell track the shell volume so the
  // per-point mass is uniform and the interior stays populated.  (Equal
  // shell masses would empty the core: hyperbolic volume concentrates
  // exponentially at the boundary.)
  const double cell = std::cbrt(total / n);
  const int shells = std::clamp(static_cast<int>(std::lround(r_max / cell)), 4, n / 4);

  auto volume_at = [&](double r) { return M_PI * (std::sinh(2.0 * r) - 2.0 * r); };
  std::vector<double> shell_mass(shells);
  std::vector<int> shell_count(shells, 1);  // every shell keeps a point
  for (int j = 0; j < shells; ++j)
    shell_mass[j] = volume_at(r_max * (j + 1.0) / shells) -
                    volume_at(r_max * static_cast<double>(j) / shells);
  {
    int assigned = shells;
    std::vector<double> frac(shells);
    for (int j = 0; j < shells; ++j) {
      const double want = shell_mass[j] / total * n;
      const int whole = std::max(1, static_cast<int>(want));
      shell_count[j] = whole;
      frac[j] = want - whole;
      assigned += whole - 1;
    }
    // largest-remainder distribution of what is left
    while (assigned < n) {
      const int j = static_cast<int>(
          std::max_element(frac.begin(), frac.end()) - frac.begin());
      ++shell_count[j];
      frac[j] -= 1.0;
      ++assigned;
    }
    while (assigned > n) {
      int j = 0;
      for (int k = 1; k < shells; ++k)
        if (shell_count[k] > shell_count[j]) j = k;
      --shell_count[j];
      --assigned;
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SampledSpace s;
  s.desc = desc;
  s.coords.resize(n, 4);  // (r, ux, uy, uz)
  s.weight.resize(n);
  std::vector<double> radii(n);
  std::vector<Eigen::Vector3d> dirs(n);

  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  int p = 0;
  for (int j = 0; j < shells; ++j) {
    const int in_shell = shell_count[j];
    // volume-median radius of the shell
    const double v_mid = volume_at(r_max * j / shells) + 0.5 * shell_mass[j];
    double lo = r_max * j / shells, hi = r_max * (j + 1.0) / shells;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (volume_at(mid) < v_mid ? lo : hi) = mid;
    }
    const double rho = 0.5 * (lo + hi);
    const double spin = 2.0 * M_PI * unit(rng);
    for (int q = 0; q < in_shell; ++q, ++p) {
      // Fibonacci sphere placement within the shell.
      const double z = 1.0 - (2.0 * q + 1.0) / in_shell;
      const double ring = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * q + spin;
      dirs[p] = Eigen::Vector3d(ring * std::cos(phi), ring * std::sin(phi), z);
      radii[p] = rho;
      s.weight(p) = shell_mass[j] / in_shell;
      s.coords(p, 0) = rho;
      s.coords(p, 1) = dirs[p].x();
      s.coords(p, 2) = dirs[p].y();
      s.coords(p, 3) = dirs[p].z();
    }
  }

  s.distance.resize(n, n);
  for (int i = 0; i < n; ++i) {
    s.distance(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d = hyperbolic_distance(radii[i], dirs[i], radii[j], dirs[j]);
      s.distance(i, j) = d;
      s.distance(j, i) = d;
    }
  }
  s.core.assign(n, 0);
  s.trust_radius.resize(n);
  for (int i = 0; i < n; ++i) {
    s.trust_radius(i) = r_max - radii[i];
    s.core[i] = s.trust_radius(i) >= 0.5 * r_max - 1e-12 ? 1 : 0;
  }
  return s;
}

}  // namespace

double SampledSpace::mean_spacing() const {
  const int n = size();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (j != i) nearest = std::min(nearest, distance(i, j));
    acc += nearest;
  }
  return acc / n;
}

std::vector<int> SampledSpace::core_indices() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (core[i]) out.push_back(i);
  return out;
}

void SampledSpace::validate(uint64_t seed) const {
  const int n = size();
  if (n < 2) throw std::runtime_error("sampled space has fewer than 2 points");
  if (distance.rows() != n || distance.cols() != n)
    throw std::runtime_error("distance matrix shape mismatch");
  for (int i = 0; i < n; ++i) {
    if (!(weight(i) > 0.0)) throw std::runtime_error("nonpositive measure weight");
    if (distance(i, i) != 0.0) throw std::runtime_error("nonzero distance diagonal");
    for (int j = i + 1; j < n; ++j) {
      if (distance(i, j) != distance(j, i))
        throw std::runtime_error("distance matrix not symmetric");
      if (!(distance(i, j) > 0.0))
        throw std::runtime_error("nonpositive off-diagonal distance");
    }
  }
  if (!std::isfinite(total_mass())) throw std::runtime_error("total mass not finite");

  auto check_triple = [&](int i, int j, int k) {
    const double slack = 1e-9 * (distance(i, j) + distance(j, k));
    if (distance(i, k) > distance(i, j) + distance(j, k) + slack) {
      std::ostringstream os;
      os << "triangle inequality violated at (" << i << "," << j << "," << k << ")";
      throw std::runtime_error(os.str());
    }
  };
  if (n <= 500) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          check_triple(i, j, k);
          check_triple(j, i, k);
          check_triple(i, k, j);
        }
  } else {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int trial = 0; trial < 10000; ++trial) {
      const int i = pick(rng), j = pick(rng), k = pick(rng);
      if (i == j || j == k || i == k) continue;
      check_triple(i, j, k);
    }
  }
}

SampledSpace make_model_sample(const SpaceDescriptor& desc, int n, uint64_t seed) {
  desc.validate();
  SampledSpace s;
  switch (desc.kind) {
    case SpaceKind::circle: s = sample_circle(desc, n); break;
    case SpaceKind::euclidean: s = sample_euclidean(desc, n); break;
    case SpaceKind::hyperbolic3: s = sample_hyperbolic3(desc, n, seed); break;
    case SpaceKind::sampled:
      throw std::invalid_argument("make_model_sample requires a model descriptor");
  }
  s.validate(seed);
  return s;
}

double model_reference_mass(const SpaceDescriptor& desc, int n) {
  switch (desc.kind) {
    case SpaceKind::circle:
      return desc.circumference;
    case SpaceKind::euclidean: {
      const int n_dim = static_cast<int>(desc.dimension);
      const int per_axis = static_cast<int>(std::floor(std::pow(n + 0.5, 1.0 / n_dim)));
      const double spacing = 2.0 * desc.truncation_radius / (per_axis - 1);
      return std::pow(per_axis * spacing, n_dim);
    }
    case SpaceKind::hyperbolic3:
      return M_PI * (std::sinh(2.0 * desc.truncation_radius) - 2.0 * desc.truncation_radius);
    case SpaceKind::sampled:
      throw std::invalid_argument("model_reference_mass requires a model descriptor");
  }
  return 0.0;
}

bool VolumeProfile::all_trusted() const {
  return std::all_of(trusted.begin(), trusted.end(), [](uint8_t t) { return t != 0; });
}

VolumeProfile volume_profile(const SampledSpace& space, int center,
                             const Eigen::VectorXd& r_grid, double delta) {
  const int n = space.size();
  if (center < 0 || center >= n) throw std::invalid_argument("center index out of range");
  for (int k = 1; k < r_grid.size(); ++k)
    if (r_grid(k) <= r_grid(k - 1))
      throw std::invalid_argument("r_grid must be strictly increasing");
  if (delta <= 2.0 * space.mean_spacing())
    throw std::invalid_argument("boundary-measure smoothing width below grid resolution");

  auto ball_mass = [&](double r) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      if (space.distance(center, i) < r) acc += space.weight(i);
    return acc;
  };

  VolumeProfile p;
  p.center = center;
  p.delta = delta;
  p.r_grid = r_grid;
  p.vol.resize(r_grid.size());
  p.boundary.resize(r_grid.size());
  p.trusted.assign(r_grid.size(), 1);
  for (int k = 0; k < r_grid.size(); ++k) {
    const double r = r_grid(k);
    p.vol(k) = ball_mass(r);
    p.boundary(k) = (ball_mass(r + delta) - ball_mass(std::max(0.0, r - delta))) /
                    (r + delta - std::max(0.0, r - delta));
    if (r + delta > space.trust_radius(center)) p.trusted[k] = 0;
  }
  return p;
}

double set_distance(const SampledSpace& space, const std::vector<int>& set_e,
                    const std::vector<int>& set_f) {
  if (set_e.empty() || set_f.empty())
    throw std::invalid_argument("set_distance requires nonempty sets");
  double best = std::numeric_limits<double>::infinity();
  for (int i : set_e)
    for (int j : set_f) best = std::min(best, space.distance(i, j));
  return best;
}

Eigen::VectorXd build_cutoff(const SampledSpace& space,
                             const std::vector<int>& set_f, double eps) {
  if (set_f.empty()) throw std::invalid_argument("build_cutoff requires a nonempty set");
  if (eps <= 4.0 * space.mean_spacing())
    throw std::invalid_argument("cutoff width below grid resolution");
  const int n = space.size();
  const double half = 0.5 * eps;

  Eigen::VectorXd dist_f(n);
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j : set_f) best = std::min(best, space.distance(i, j));
    dist_f(i) = best;
  }
  std::vector<int> half_neighborhood;
  for (int i = 0; i < n; ++i)
    if (dist_f(i) <= half) half_neighborhood.push_back(i);

  Eigen::VectorXd chi(n);
  for (int i = 0; i < n; ++i) {
    double d = std::numeric_limits<double>::infinity();
    for (int j : half_neighborhood) d = std::min(d, space.distance(i, j));
    chi(i) = std::clamp((half - d) / half, 0.0, 1.0);
  }
  return chi;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

static_assert(std::endian::native == std::endian::little,
              "distances.bin layout assumes a little-endian host");

void save_space(const SampledSpace& space, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const int n = space.size();

  {
    std::ofstream out(dir / "points.csv");
    out << "index";
    for (int d = 0; d < space.coords.cols(); ++d) out << ",x" << d;
    out << "\n";
    char buf[64];
    for (int i = 0; i < n; ++i) {
      out << i;
      for (int d = 0; d < space.coords.cols(); ++d) {
        std::snprintf(buf, sizeof buf, "%.17g", space.coords(i, d));
        out << "," << buf;
      }
      out << "\n";
    }
  }
  {
    std::ofstream out(dir / "weights.csv");
    out << "index,m\n";
    char buf[64];
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", space.weight(i));
      out << i << "," << buf << "\n";
    }
  }
  {
    std::ofstream out(dir / "distances.bin", std::ios::binary);
    for (int i = 0; i < n; ++i)
      out.write(reinterpret_cast<const char*>(space.distance.row(i).eval().data()),
                static_cast<std::streamsize>(n * sizeof(double)));
  }
  {
    json meta;
    meta["kind"] = to_string(space.desc.kind);
    meta["dimension"] = space.desc.dimension;
    meta["curvature"] = space.desc.curvature;
    meta["circumference"] = space.desc.circumference;
    meta["truncation_radius"] = space.desc.truncation_radius;
    meta["n"] = n;
    meta["core"] = space.core;
    meta["trust_radius"] = std::vector<double>(space.trust_radius.begin(),
                                               space.trust_radius.end());
    std::ofstream out(dir / "meta.json");
    out << meta.dump(2) << "\n";
  }
}

SampledSpace load_space(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "meta.json");
  if (!meta_in) throw std::runtime_error("cannot open " + (dir / "meta.json").string());
  json meta = json::parse(meta_in);

  SampledSpace s;
  s.desc.kind = space_kind_from_string(meta.at("kind").get<std::string>());
  s.desc.dimension = meta.at("dimension").get<double>();
  s.desc.curvature = meta.at("curvature").get<double>();
  s.desc.circumference = meta.at("circumference").get<double>();
  s.desc.truncation_radius = meta.at("truncation_radius").get<double>();
  const int n = meta.at("n").get<int>();

  s.weight.resize(n);
  {
    std::ifstream in(dir / "weights.csv");
    if (!in) throw std::runtime_error("cannot open weights.csv");
    std::string line;
    std::getline(in, line);  // header
    for (int i = 0; i < n; ++i) {
      std::getline(in, line);
      const auto comma = line.find(',');
      s.weight(i) = std::stod(line.substr(comma + 1));
    }
  }
  {
    std::ifstream in(dir / "points.csv");
    if (!in) throw std::runtime_error("cannot open points.csv");
    std::string line;
    std::getline(in, line);
    const auto cols = std::count(line.begin(), line.end(), ',');
    s.coords.resize(n, cols);
    for (int i = 0; i < n; ++i) {
      std::getline(in, line);
      std::stringstream row(line);
      std::string cell;
      std::getline(row, cell, ',');  // index
      for (int d = 0; d < cols; ++d) {
        std::getline(row, cell, ',');
        s.coords(i, d) = std::stod(cell);
      }
    }
  }
  {
    std::ifstream in(dir / "distances.bin", std::ios::binary);
    if (!in) throw std::runtime_error("cannot open distances.bin");
    s.distance.resize(n, n);
    std::vector<double> row(n);
    for (int i = 0; i < n; ++i) {
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(n * sizeof(double)));
      for (int j = 0; j < n; ++j) s.distance(i, j) = row[j];
    }
    if (!in) throw std::runtime_error("distances.bin truncated");
  }
  s.core = meta.at("core").get<std::vector<uint8_t>>();
  const auto trust = meta.at("trust_radius").get<std::vector<double>>();
  s.trust_radius = Eigen::Map<const Eigen::VectorXd>(trust.data(), n);
  s.validate();
  return s;
}

}  // namespace heatlab
