#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "heatlab/analytic_kernel.hpp"
#include "heatlab/check.hpp"
#include "heatlab/spectral.hpp"

namespace heatlab {

/// Everything a checker may consume.  Model descriptors are checked against
/// their closed-form kernels; a discrete representation (sample + spectral
/// decomposition) is attached when the checker needs the operator calculus,
/// discretizing the model on demand.
struct Workspace {
  SpaceDescriptor desc;
  std::shared_ptr<const SampledSpace> sample;            // may be null
  std::shared_ptr<const SpectralDecomposition> spectral;  // may be null
  GridSpec grid;
  uint64_t seed = 0;
  int sample_n = 0;             // model discretization size (0 = per-model default)
  bool prefer_discrete = false;  // run the discrete path even for model descriptors

  bool has_spectral() const { return spectral != nullptr; }
  /// Dual-path checkers take the discrete route for sampled descriptors or
  /// when explicitly asked to.
  bool discrete_path() const {
    return desc.kind == SpaceKind::sampled || prefer_discrete;
  }
  const SpectralDecomposition& dec() const;
  const SampledSpace& space() const;
  const Generator& gen() const { return *dec().generator; }

  /// Default discretization size per model kind.
  static int default_sample_n(const SpaceDescriptor& desc);
};

/// Build the discrete representation for a descriptor (used by the runner
/// before fanning checks out, and by refinement sweeps inside checkers).
std::shared_ptr<const SpectralDecomposition> discretize(
    const SpaceDescriptor& desc, int n, uint64_t seed,
    const std::string& cache_dir = {});

// One checker per quantitative statement.  Each returns one CheckResult per
// named sub-relation it verifies.
std::vector<CheckResult> check_semigroup_axioms(const Workspace& ws);
std::vector<CheckResult> check_gaussian_bounds(const Workspace& ws);
std::vector<CheckResult> check_integrated_lower_bound(const Workspace& ws);
std::vector<CheckResult> check_gradient_bound(const Workspace& ws);
std::vector<CheckResult> check_li_yau(const Workspace& ws);
std::vector<CheckResult> check_bakry_ledoux(const Workspace& ws);
std::vector<CheckResult> check_harnack(const Workspace& ws);
std::vector<CheckResult> check_weighted_contraction(const Workspace& ws);
std::vector<CheckResult> check_doubling_poincare(const Workspace& ws);
std::vector<CheckResult> check_laplacian_comparison(const Workspace& ws);
std::vector<CheckResult> check_boundary_calculus(const Workspace& ws);
std::vector<CheckResult> check_large_time(const Workspace& ws);
std::vector<CheckResult> check_stability(const Workspace& ws);
std::vector<CheckResult> compactness_diagnostic(const Workspace& ws);
std::vector<CheckResult> check_caccioppoli(const Workspace& ws);
std::vector<CheckResult> check_davies_gaffney(const Workspace& ws);
std::vector<CheckResult> check_riesz(const Workspace& ws);
std::vector<CheckResult> check_time_derivative(const Workspace& ws);

struct CheckerEntry {
  std::string name;
  bool needs_spectral;  // discrete representation required up front
  std::function<std::vector<CheckResult>(const Workspace&)> run;
};

const std::vector<CheckerEntry>& check_registry();
const CheckerEntry* find_checker(const std::string& name);

// ---------------------------------------------------------------------------
// Shared checker helpers (exposed for tests)
// ---------------------------------------------------------------------------

/// Fit of a (4 +/- eps)-shaped bound with an optional e^{+-C2 t} factor for
/// K < 0 spaces.  C2 is the log2-grid snap of the large-t growth rate of the
/// raw sup-ratio profile; C1 is the sup at that C2.
struct ExponentialFit {
  double c1 = 0.0;
  double c2 = 0.0;  // 0 when the K = 0 shape is used
  std::map<std::string, double> witness;
};

/// ratio_profile[i] = sup over the spatial grid at time t_grid[i] of
/// LHS / RHS-shape (without the e^{C2 t} factor).  witness_u holds the
/// argmax u = d/sqrt(t) per time.
ExponentialFit fit_exponential_envelope(const std::vector<double>& t_grid,
                                        const std::vector<double>& ratio_profile,
                                        const std::vector<double>& witness_u,
                                        bool allow_c2);

/// Deterministic per-check RNG stream: hashes the checker name into the seed.
uint64_t derive_seed(uint64_t seed, const std::string& tag);

/// Random function batch on a sampled space: smooth low-mode combinations,
/// step functions, and low eigenvectors.  Deterministic in (seed, n).
std::vector<Eigen::VectorXd> function_batch(const SpectralDecomposition& dec,
                                            int count, uint64_t seed);

}  // namespace heatlab
