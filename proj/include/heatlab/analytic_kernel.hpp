#pragma once

#include <functional>

#include "heatlab/model.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

/// One kernel evaluation: the value, the magnitude of the spatial gradient
/// in the second argument, and the time derivative.
struct KernelPoint {
  double value = 0.0;
  double gradient = 0.0;  // |grad_y p_t(x, .)|(y)
  double dt = 0.0;        // d/dt p_t(x, y)
  bool underflow = false;
};

// Gaussian kernel on R^N: (4 pi t)^{-N/2} exp(-d^2 / 4t).
double kernel_euclidean(double n_dim, double t, double d);
KernelPoint kernel_euclidean_full(double n_dim, double t, double d);

// H^3 (unit sectional curvature -1, so RCD*(-2,3)):
// (4 pi t)^{-3/2} (r / sinh r) exp(-t - r^2/4t), with the removable
// singularity at r = 0 handled by series.
double kernel_hyperbolic3(double t, double r);
KernelPoint kernel_hyperbolic3_full(double t, double r);

enum class CircleMethod { image_sum, spectral_sum };

// Circle of circumference L, arc = arc-length distance.  The image sum
// wraps Gaussians; the spectral sum is (1/L) sum_k e^{-(2 pi k / L)^2 t}
// cos(2 pi k arc / L).  The two agree by Poisson summation.
double kernel_circle(double circumference, double t, double arc, CircleMethod method);
KernelPoint kernel_circle_full(double circumference, double t, double arc);

/// Uniform radial interface over the three closed-form kernels.
class AnalyticKernel {
 public:
  explicit AnalyticKernel(const SpaceDescriptor& desc);

  const SpaceDescriptor& descriptor() const { return desc_; }

  double value(double t, double d) const;
  double gradient(double t, double d) const;
  double dt(double t, double d) const;
  double log_value(double t, double d) const;
  KernelPoint at(double t, double d) const;

  /// mu(B(y, r)) in the model.
  double ball_volume(double r) const;

 private:
  SpaceDescriptor desc_;
};

// ---------------------------------------------------------------------------
// Quadrature-based semigroup action and integral identities (the oracles)
// ---------------------------------------------------------------------------

/// H_t f(x) = int f(y) p_t(x, y) dmu(y) for a scalar function on the model.
/// Supported: circle (f of arc position), euclidean N = 1 (f of coordinate),
/// euclidean N >= 2 and hyperbolic3 with radial f (f of distance from the
/// point x).  Discontinuities of f must be listed in `breakpoints`.
/// Throws on unsupported combinations.
QuadratureResult semigroup_quadrature(const SpaceDescriptor& desc,
                                      const std::function<double(double)>& f,
                                      double t, double x,
                                      const std::vector<double>& breakpoints = {});

/// Total kernel mass int p_t(x, y) dmu(y); equals 1 by stochastic
/// completeness.  x is the arc/coordinate/radial position of the base point
/// (0 for the radial models).
QuadratureResult kernel_mass(const SpaceDescriptor& desc, double t, double x = 0.0);

/// Chapman-Kolmogorov composition int p_t(x, z) p_s(z, y) dmu(z) for base
/// points at distance d.
QuadratureResult chapman_kolmogorov(const SpaceDescriptor& desc, double t,
                                    double s, double d);

/// int_{B(y, radius)} p_t(x, z) dmu(z) where d = d(x, y).
QuadratureResult kernel_ball_mass(const SpaceDescriptor& desc, double t,
                                  double d, double radius);

/// Boundary integral |f|_{dB(x0, r)} of a radial function f (argument: the
/// distance from x0) over the model sphere of radius r.
double model_boundary_integral(const SpaceDescriptor& desc,
                               const std::function<double(double)>& f, double r);

}  // namespace heatlab
