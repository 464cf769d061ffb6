#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>

#include "heatlab/space.hpp"

namespace heatlab {

/// Discrete Laplacian (generator of the heat semigroup) on a SampledSpace.
///
/// Edge weights w_ij = exp(-D_ij^2 / 4h) truncated at D_ij <= 4 sqrt(h),
/// symmetrically normalized by the kernel density rho_i = sum_j w_ij m_j:
///     (A f)_i = (1/(c h)) sum_j w_ij / sqrt(rho_i rho_j) m_j (f_j - f_i).
/// A is self-adjoint in <f, g>_m = sum f_i g_i m_i, kills constants, and has
/// nonnegative off-diagonal coefficients.  The calibration constant c is
/// fixed once by the circle benchmark (L = 2 pi, n = 256, lambda_1 = 1).
struct Generator {
  std::shared_ptr<const SampledSpace> space;
  Eigen::MatrixXd laplacian;  // A
  double bandwidth = 0.0;     // h
  double calibration = 1.0;   // c

  int size() const { return static_cast<int>(laplacian.rows()); }
};

/// Auto bandwidth rule: (mean nearest-neighbor spacing)^2 * 4.
double auto_bandwidth(const SampledSpace& space);

/// The global calibration constant (computed lazily from the circle
/// benchmark and cached for the process lifetime).
double generator_calibration();

/// h = 0 selects the auto bandwidth.  Throws when the neighborhood graph is
/// disconnected at h (advising a larger bandwidth) or n exceeds the dense
/// eigendecomposition cap of 4000.
Generator build_generator(std::shared_ptr<const SampledSpace> space, double h = 0.0);

struct SpectralDecomposition {
  std::shared_ptr<const Generator> generator;
  Eigen::VectorXd eigenvalues;   // of -A, ascending, >= 0 (clamped near 0)
  Eigen::MatrixXd eigenvectors;  // columns phi_k, orthonormal in <.,.>_m

  const SampledSpace& space() const { return *generator->space; }
  int size() const { return static_cast<int>(eigenvalues.size()); }
};

SpectralDecomposition eigendecompose(std::shared_ptr<const Generator> gen);

/// Cache-aware variant: spectrum.bin under cache_dir keyed by a content
/// hash of distances, weights, h and c; recomputes on mismatch.
SpectralDecomposition eigendecompose_cached(std::shared_ptr<const Generator> gen,
                                            const std::filesystem::path& cache_dir);

/// Weighted inner product and L^p norms of the sampled measure.
double weighted_inner(const SampledSpace& space, const Eigen::VectorXd& f,
                      const Eigen::VectorXd& g);
double lp_norm(const SampledSpace& space, const Eigen::VectorXd& f, double p);
/// L^p norm restricted to an index set.
double lp_norm_on(const SampledSpace& space, const Eigen::VectorXd& f, double p,
                  const std::vector<int>& support);

/// Heat matrix entries p_t(i, j) = sum_k e^{-lambda_k t} phi_k(i) phi_k(j);
/// the semigroup acts by (H_t f)_i = sum_j p_t(i, j) f_j m_j.
Eigen::MatrixXd heat_matrix(const SpectralDecomposition& dec, double t);
Eigen::VectorXd heat_apply(const SpectralDecomposition& dec, double t,
                           const Eigen::VectorXd& f);
Eigen::VectorXd heat_diagonal(const SpectralDecomposition& dec, double t);

/// Carre du champ Gamma(f) = (A(f^2) - 2 f A f) / 2, entrywise nonnegative
/// (negatives within -1e-12 are clamped).  sqrt(Gamma f) is the artifact's
/// gradient-modulus surrogate.
Eigen::VectorXd carre_du_champ(const Generator& gen, const Eigen::VectorXd& f);

/// Cross-check diagnostic: max_j |f_i - f_j| / D_ij over graph edges.
Eigen::VectorXd edge_slope(const Generator& gen, const Eigen::VectorXd& f);

enum class ZeroMode { keep, project_out };

/// sum_k phi(lambda_k) <f, phi_k>_m phi_k.  project_out removes the
/// zero-mode component first (the mean-zero restriction for finite-mass
/// spaces); phi must then be finite on the remaining spectrum.
Eigen::VectorXd spectral_function(const SpectralDecomposition& dec,
                                  const std::function<double(double)>& phi,
                                  const Eigen::VectorXd& f, ZeroMode zero_mode);

/// Mollifier e^{-a eps} H_eps f - e^{-a/eps} H_{1/eps} f.  Requires
/// eps in (0, 1]; for a = 0 on these finite-mass spaces f must be mean-zero.
Eigen::VectorXd mollify(const SpectralDecomposition& dec, const Eigen::VectorXd& f,
                        double eps, double a);

/// Project onto the mean-zero subspace (remove the phi_0 component).
Eigen::VectorXd project_mean_zero(const SpectralDecomposition& dec,
                                  const Eigen::VectorXd& f);

}  // namespace heatlab
