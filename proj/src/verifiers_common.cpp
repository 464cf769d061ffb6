#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "heatlab/verifiers.hpp"

namespace heatlab {

const SpectralDecomposition& Workspace::dec() const {
  if (!spectral)
    throw std::runtime_error("checker requires a discrete representation");
  return *spectral;
}

const SampledSpace& Workspace::space() const {
  if (sample) return *sample;
  if (spectral) return spectral->space();
  throw std::runtime_error("workspace has no sampled representation");
}

int Workspace::default_sample_n(const SpaceDescriptor& desc) {
  switch (desc.kind) {
    case SpaceKind::circle: return 256;
    case SpaceKind::euclidean:
      if (desc.dimension == 1.0) return 257;
      if (desc.dimension == 2.0) return 33 * 33;
      return 9 * 9 * 9;
    case SpaceKind::hyperbolic3: return 900;
    case SpaceKind::sampled: return 0;
  }
  return 0;
}

std::shared_ptr<const SpectralDecomposition> discretize(const SpaceDescriptor& desc,
                                                        int n, uint64_t seed,
                                                        const std::string& cache_dir) {
  auto space = std::make_shared<const SampledSpace>(make_model_sample(desc, n, seed));
  auto gen = std::make_shared<const Generator>(build_generator(space));
  SpectralDecomposition dec = cache_dir.empty()
                                  ? eigendecompose(gen)
                                  : eigendecompose_cached(gen, cache_dir);
  return std::make_shared<const SpectralDecomposition>(std::move(dec));
}

uint64_t derive_seed(uint64_t seed, const std::string& tag) {
  uint64_t h = 14695981039346656037ull ^ seed;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<Eigen::VectorXd> function_batch(const SpectralDecomposition& dec,
                                            int count, uint64_t seed) {
  const int n = dec.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> pick_point(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const SampledSpace& space = dec.space();
  const double diam = space.distance.maxCoeff();
  const int max_mode = std::min(16, n - 1);

  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    switch (k % 3) {
      case 0: {  // smooth: random low-mode combination
        Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
        for (int mode = 1; mode <= std::min(12, n - 1); ++mode)
          f += gauss(rng) * dec.eigenvectors.col(mode);
        out.push_back(std::move(f));
        break;
      }
      case 1: {  // step: +-1 across a random metric ball
        const int center = pick_point(rng);
        const double radius = diam * (0.1 + 0.4 * unit(rng));
        Eigen::VectorXd f(n);
        for (int i = 0; i < n; ++i)
          f(i) = space.distance(center, i) < radius ? 1.0 : -1.0;
        out.push_back(std::move(f));
        break;
      }
      default: {  // eigenvector extremes, cycling the low spectrum
        const int mode = 1 + (k / 3) % max_mode;
        out.push_back(dec.eigenvectors.col(mode));
        break;
      }
    }
  }
  return out;
}

ExponentialFit fit_exponential_envelope(const std::vector<double>& t_grid,
                                        const std::vector<double>& ratio_profile,
                                        const std::vector<double>& witness_u,
                                        bool allow_c2) {
  if (t_grid.size() != ratio_profile.size())
    throw std::invalid_argument("fit_exponential_envelope: size mismatch");
  ExponentialFit fit;
  if (allow_c2) {
    // Least-squares slope of log(ratio) vs t over the upper half of the
    // grid estimates the exponential rate; snap it to the 2^j search grid.
    const size_t lo = t_grid.size() / 2;
    double mt = 0.0, my = 0.0;
    const size_t count = t_grid.size() - lo;
    for (size_t i = lo; i < t_grid.size(); ++i) {
      mt += t_grid[i];
      my += std::log(std::max(ratio_profile[i], 1e-300));
    }
    mt /= count;
    my /= count;
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = lo; i < t_grid.size(); ++i) {
      const double dt = t_grid[i] - mt;
      sxy += dt * (std::log(std::max(ratio_profile[i], 1e-300)) - my);
      sxx += dt * dt;
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    if (slope > std::pow(2.0, -3.5)) {
      const int j = std::clamp(
          static_cast<int>(std::lround(std::log2(slope))), -3, 5);
      fit.c2 = std::pow(2.0, j);
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  size_t best_i = 0;
  for (size_t i = 0; i < t_grid.size(); ++i) {
    const double v = ratio_profile[i] * std::exp(-fit.c2 * t_grid[i]);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  fit.c1 = best;
  fit.witness["t"] = t_grid[best_i];
  if (!witness_u.empty()) fit.witness["u"] = witness_u[best_i];
  return fit;
}

const std::vector<CheckerEntry>& check_registry() {
  static const std::vector<CheckerEntry> registry = {
      {"semigroup_axioms", false, check_semigroup_axioms},
      {"gaussian_bounds", false, check_gaussian_bounds},
      {"integrated_lower_bound", false, check_integrated_lower_bound},
      {"gradient_bound", false, check_gradient_bound},
      {"li_yau", false, check_li_yau},
      {"bakry_ledoux", true, check_bakry_ledoux},
      {"harnack", false, check_harnack},
      {"weighted_contraction", true, check_weighted_contraction},
      {"doubling_poincare", true, check_doubling_poincare},
      {"laplacian_comparison", false, check_laplacian_comparison},
      {"boundary_calculus", false, check_boundary_calculus},
      {"large_time", false, check_large_time},
      {"stability", false, check_stability},
      {"compactness", false, compactness_diagnostic},
      {"caccioppoli", true, check_caccioppoli},
      {"davies_gaffney", true, check_davies_gaffney},
      {"riesz", true, check_riesz},
      {"time_derivative", false, check_time_derivative},
  };
  return registry;
}

const CheckerEntry* find_checker(const std::string& name) {
  for (const auto& entry : check_registry())
    if (entry.name == name) return &entry;
  return nullptr;
}

}  // namespace heatlab
