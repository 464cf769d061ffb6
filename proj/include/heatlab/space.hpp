#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "heatlab/model.hpp"

namespace heatlab {

/// A finite metric measure space: pairwise distances, positive measure
/// weights, and a core mask marking points far enough from any truncation
/// boundary to be trusted in theorem checks.  Immutable after construction.
struct SampledSpace {
  SpaceDescriptor desc;
  Eigen::MatrixXd distance;      // n x n, symmetric, zero diagonal
  Eigen::VectorXd weight;        // n, positive
  Eigen::MatrixXd coords;        // n x dim for model-derived samples, else 0 cols
  std::vector<uint8_t> core;     // 1 = unaffected by truncation
  Eigen::VectorXd trust_radius;  // largest ball radius fully inside the sample

  int size() const { return static_cast<int>(weight.size()); }
  double total_mass() const { return weight.sum(); }

  /// Mean nearest-neighbor distance (the local resolution scale).
  double mean_spacing() const;

  std::vector<int> core_indices() const;

  /// Structural checks: symmetry, zero diagonal, positive off-diagonal
  /// entries and weights, and a triangle-inequality sweep (exhaustive for
  /// n <= 500, otherwise >= 10^4 seeded random triples).  Throws on failure.
  void validate(uint64_t seed = 0) const;
};

/// Discretize a model space.  Circle: n equally spaced arcs, m_i = L/n.
/// Euclidean: lattice over [-R_max, R_max]^N with k = floor(n^{1/N}) points
/// per axis (endpoints included) and cell-volume weights spacing^N.
/// Hyperbolic3: equal-volume radial shells, Fibonacci-sphere points per
/// shell, geodesic distances from the H^3 law of cosines.
SampledSpace make_model_sample(const SpaceDescriptor& desc, int n, uint64_t seed);

/// Expected total sample mass for the construction above (exact target of
/// the mass invariant): L for the circle, covered cell volume (k s)^N for
/// the euclidean lattice, pi(sinh 2R - 2R) for hyperbolic3.
double model_reference_mass(const SpaceDescriptor& desc, int n);

struct VolumeProfile {
  int center = 0;
  double delta = 0.0;
  Eigen::VectorXd r_grid;
  Eigen::VectorXd vol;       // mu(B(center, r)), exact counting sums
  Eigen::VectorXd boundary;  // s(center, r), central difference at width delta
  std::vector<uint8_t> trusted;

  bool all_trusted() const;
};

/// Exact counting volumes and fixed-delta central-difference boundary
/// measure.  Grid points with r + delta beyond the center's trust radius are
/// flagged untrusted rather than rejected.
VolumeProfile volume_profile(const SampledSpace& space, int center,
                             const Eigen::VectorXd& r_grid, double delta);

/// d(E, F) = min over pairs; zero when the sets intersect.
double set_distance(const SampledSpace& space, const std::vector<int>& set_e,
                    const std::vector<int>& set_f);

/// Lipschitz cut-off: chi = min((eps/2 - d(x, F^{(eps/2)}))^+ / (eps/2), 1)
/// with F^{(eps/2)} the (closed, at grid resolution) eps/2-neighborhood.
/// chi is 1 on the neighborhood, 0 outside F^{(eps)}, slope <= 2/eps.
Eigen::VectorXd build_cutoff(const SampledSpace& space,
                             const std::vector<int>& set_f, double eps);

/// Directory layout: points.csv, weights.csv, meta.json, and distances.bin
/// (row-major 64-bit little-endian floats, n^2 entries).
void save_space(const SampledSpace& space, const std::filesystem::path& dir);
SampledSpace load_space(const std::filesystem::path& dir);

}  // namespace heatlab
