#include "heatlab/analytic_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace heatlab {

namespace {

// Terms with squared-exponent arguments beyond this underflow to zero.
constexpr double kExpCutoff = 700.0;

double gauss_norm(double n_dim, double t) {
  return std::pow(4.0 * M_PI * t, -0.5 * n_dim);
}

/// r / sinh r with the removable singularity at r = 0.
double r_over_sinh(double r) {
  if (r < 1e-6) return 1.0 - r * r / 6.0;
  return r / std::sinh(r);
}

/// d/dr log(r / sinh r) = 1/r - coth r.
double dlog_r_over_sinh(double r) {
  if (r < 1e-4) return -r / 3.0 + r * r * r / 45.0;
  return 1.0 / r - 1.0 / std::tanh(r);
}

int circle_image_count(double circumference, double t) {
  return static_cast<int>(std::ceil(std::sqrt(4.0 * t * kExpCutoff) / circumference)) + 2;
}

bool circle_prefer_spectral(double circumference, double t) {
  const double omega1 = 2.0 * M_PI / circumference;
  return omega1 * omega1 * t >= 0.5;
}

}  // namespace

double kernel_euclidean(double n_dim, double t, double d) {
  if (t <= 0.0) throw std::invalid_argument("kernel_euclidean requires t > 0");
  const double e = d * d / (4.0 * t);
  if (e > kExpCutoff) return 0.0;
  return gauss_norm(n_dim, t) * std::exp(-e);
}

KernelPoint kernel_euclidean_full(double n_dim, double t, double d) {
  KernelPoint k;
  k.value = kernel_euclidean(n_dim, t, d);
  k.gradient = d / (2.0 * t) * k.value;
  k.dt = k.value * (-n_dim / (2.0 * t) + d * d / (4.0 * t * t));
  return k;
}

double kernel_hyperbolic3(double t, double r) {
  return kernel_hyperbolic3_full(t, r).value;
}

KernelPoint kernel_hyperbolic3_full(double t, double r) {
  if (t <= 0.0) throw std::invalid_argument("kernel_hyperbolic3 requires t > 0");
  if (r < 0.0) throw std::invalid_argument("kernel_hyperbolic3 requires r >= 0");
  KernelPoint k;
  if (r * r / (4.0 * t) > kExpCutoff) {
    k.underflow = true;
    return k;
  }
  k.value = gauss_norm(3.0, t) * r_over_sinh(r) * std::exp(-t - r * r / (4.0 * t));
  const double dlog_r = dlog_r_over_sinh(r) - r / (2.0 * t);
  k.gradient = std::abs(dlog_r) * k.value;
  k.dt = k.value * (-1.5 / t - 1.0 + r * r / (4.0 * t * t));
  return k;
}

double kernel_circle(double circumference, double t, double arc, CircleMethod method) {
  if (t <= 0.0) throw std::invalid_argument("kernel_circle requires t > 0");
  if (method == CircleMethod::image_sum) {
    const int k_max = circle_image_count(circumference, t);
    double acc = 0.0;
    for (int k = -k_max; k <= k_max; ++k) {
      const double x = arc + k * circumference;
      const double e = x * x / (4.0 * t);
      if (e <= kExpCutoff) acc += std::exp(-e);
    }
    return gauss_norm(1.0, t) * acc;
  }
  const double base = 2.0 * M_PI / circumference;
  double acc = 1.0;
  for (int k = 1; k < 2000000; ++k) {
    const double omega = base * k;
    const double term = std::exp(-omega * omega * t);
    if (term < 1e-16) break;
    acc += 2.0 * term * std::cos(omega * arc);
  }
  return acc / circumference;
}

KernelPoint kernel_circle_full(double circumference, double t, double arc) {
  KernelPoint out;
  if (circle_prefer_spectral(circumference, t)) {
    const double base = 2.0 * M_PI / circumference;
    double v = 1.0, g = 0.0, dt = 0.0;
    for (int k = 1; k < 2000000; ++k) {
      const double omega = base * k;
      const double decay = std::exp(-omega * omega * t);
      if (decay * (1.0 + omega * omega) < 1e-18) break;
      v += 2.0 * decay * std::cos(omega * arc);
      g += -2.0 * omega * decay * std::sin(omega * arc);
      dt += -2.0 * omega * omega * decay * std::cos(omega * arc);
    }
    out.value = v / circumference;
    out.gradient = std::abs(g) / circumference;
    out.dt = dt / circumference;
    return out;
  }
  const int k_max = circle_image_count(circumference, t);
  double v = 0.0, g = 0.0, dt = 0.0;
  for (int k = -k_max; k <= k_max; ++k) {
    const double x = arc + k * circumference;
    const double e = x * x / (4.0 * t);
    if (e > kExpCutoff) continue;
    const double term = std::exp(-e);
    v += term;
    g += -x / (2.0 * t) * term;
    dt += term * (-0.5 / t + x * x / (4.0 * t * t));
  }
  const double norm = gauss_norm(1.0, t);
  out.value = norm * v;
  out.gradient = std::abs(norm * g);
  out.dt = norm * dt;
  return out;
}

AnalyticKernel::AnalyticKernel(const SpaceDescriptor& desc) : desc_(desc) {
  if (!desc.is_model())
    throw std::invalid_argument("AnalyticKernel requires a model descriptor");
  desc.validate();
}

KernelPoint AnalyticKernel::at(double t, double d) const {
  switch (desc_.kind) {
    case SpaceKind::euclidean: return kernel_euclidean_full(desc_.dimension, t, d);
    case SpaceKind::hyperbolic3: return kernel_hyperbolic3_full(t, d);
    case SpaceKind::circle: return kernel_circle_full(desc_.circumference, t, d);
    case SpaceKind::sampled: break;
  }
  throw std::logic_error("unreachable");
}

double AnalyticKernel::value(double t, double d) const { return at(t, d).value; }
double AnalyticKernel::gradient(double t, double d) const { return at(t, d).gradient; }
double AnalyticKernel::dt(double t, double d) const { return at(t, d).dt; }

double AnalyticKernel::log_value(double t, double d) const {
  switch (desc_.kind) {
    case SpaceKind::euclidean:
      return -0.5 * desc_.dimension * std::log(4.0 * M_PI * t) - d * d / (4.0 * t);
    case SpaceKind::hyperbolic3:
      return -1.5 * std::log(4.0 * M_PI * t) + std::log(r_over_sinh(d)) - t -
             d * d / (4.0 * t);
    case SpaceKind::circle:
      return std::log(value(t, d));
    case SpaceKind::sampled: break;
  }
  throw std::logic_error("unreachable");
}

double AnalyticKernel::ball_volume(double r) const {
  return model_ball_volume(desc_, r);
}

// ---------------------------------------------------------------------------
// Quadrature oracles
// ---------------------------------------------------------------------------

namespace {

/// Radius beyond which exp(-r^2/4t [+ 2r for H^3 volume growth]) underflows.
double radial_cut(const SpaceDescriptor& desc, double t) {
  if (desc.kind == SpaceKind::hyperbolic3)
    return 4.0 * t + std::sqrt(16.0 * t * t + 4.0 * t * kExpCutoff) + 1.0;
  return 2.0 * std::sqrt(kExpCutoff * t) + 1.0;
}

}  // namespace

QuadratureResult semigroup_quadrature(const SpaceDescriptor& desc,
                                      const std::function<double(double)>& f,
                                      double t, double x,
                                      const std::vector<double>& breakpoints) {
  if (t <= 0.0) throw std::invalid_argument("semigroup_quadrature requires t > 0");
  const AnalyticKernel kernel(desc);
  // Chunks at the diffusion scale keep the kernel bulk visible to the
  // adaptive rule even when the window is hundreds of sigma wide.
  const double segment = 2.0 * std::sqrt(t);
  switch (desc.kind) {
    case SpaceKind::circle: {
      const double circumference = desc.circumference;
      auto g = [&](double y) {
        double a = std::abs(y - x);
        a = std::min(a, circumference - a);
        return f(y) * kernel.value(t, a);
      };
      return integrate_piecewise(g, 0.0, circumference, segment, breakpoints,
                                 1e-12, 1e-10);
    }
    case SpaceKind::euclidean: {
      if (desc.dimension == 1.0) {
        const double w = radial_cut(desc, t);
        auto g = [&](double y) { return f(y) * kernel.value(t, std::abs(y - x)); };
        return integrate_piecewise(g, x - w, x + w, segment, breakpoints, 1e-12,
                                   1e-10);
      }
      // Radial f about the evaluation point.
      const double n_dim = desc.dimension;
      const double area = n_dim * unit_ball_volume(n_dim);
      auto g = [&](double rho) {
        return f(rho) * kernel.value(t, rho) * area * std::pow(rho, n_dim - 1.0);
      };
      return integrate_piecewise(g, 0.0, radial_cut(desc, t), segment, breakpoints,
                                 1e-12, 1e-10);
    }
    case SpaceKind::hyperbolic3: {
      auto g = [&](double rho) {
        const double s = std::sinh(rho);
        return f(rho) * kernel.value(t, rho) * 4.0 * M_PI * s * s;
      };
      return integrate_piecewise(g, 0.0, radial_cut(desc, t), segment, breakpoints,
                                 1e-12, 1e-10);
    }
    case SpaceKind::sampled: break;
  }
  throw std::invalid_argument("semigroup_quadrature requires a model descriptor");
}

QuadratureResult kernel_mass(const SpaceDescriptor& desc, double t, double x) {
  if (desc.kind == SpaceKind::euclidean && desc.dimension == 1.0) {
    return semigroup_quadrature(desc, [](double) { return 1.0; }, t, x);
  }
  if (desc.kind == SpaceKind::circle)
    return semigroup_quadrature(desc, [](double) { return 1.0; }, t, x);
  return semigroup_quadrature(desc, [](double) { return 1.0; }, t, 0.0);
}

QuadratureResult chapman_kolmogorov(const SpaceDescriptor& desc, double t,
                                    double s, double d) {
  const AnalyticKernel kernel(desc);
  switch (desc.kind) {
    case SpaceKind::circle: {
      const double circumference = desc.circumference;
      auto wrap = [&](double a) {
        a = std::fmod(std::abs(a), circumference);
        return std::min(a, circumference - a);
      };
      auto g = [&](double z) {
        return kernel.value(t, wrap(z)) * kernel.value(s, wrap(z - d));
      };
      return integrate(g, 0.0, circumference, 1e-13, 1e-11);
    }
    case SpaceKind::euclidean: {
      // Product structure: one axis carries the displacement d.
      auto axis = [&](double dist) {
        const double w = radial_cut(SpaceDescriptor::euclidean(1, 1.0), std::max(t, s));
        auto g = [&](double z) {
          return kernel_euclidean(1.0, t, std::abs(z)) *
                 kernel_euclidean(1.0, s, std::abs(z - dist));
        };
        return integrate(g, std::min(0.0, dist) - w, std::max(0.0, dist) + w, 1e-13,
                         1e-11);
      };
      QuadratureResult first = axis(d);
      QuadratureResult out = first;
      for (int k = 1; k < static_cast<int>(desc.dimension); ++k) {
        const QuadratureResult zero = axis(0.0);
        out.value *= zero.value;
        out.evaluations += zero.evaluations;
        out.converged = out.converged && zero.converged;
      }
      out.error_estimate = first.error_estimate;  // dominated by the offset axis
      return out;
    }
    case SpaceKind::hyperbolic3: {
      auto g_outer = [&](double rho) {
        const double sh_rho = std::sinh(rho);
        auto g_inner = [&](double theta) {
          const double c = std::max(1.0, std::cosh(rho) * std::cosh(d) -
                                             sh_rho * std::sinh(d) * std::cos(theta));
          const double dist = std::acosh(c);
          return kernel_hyperbolic3(s, dist) * std::sin(theta);
        };
        const auto inner = integrate(g_inner, 0.0, M_PI, 1e-13, 1e-9);
        return kernel_hyperbolic3(t, rho) * 2.0 * M_PI * sh_rho * sh_rho * inner.value;
      };
      return integrate(g_outer, 0.0, radial_cut(desc, std::max(t, s)), 1e-12, 1e-8);
    }
    case SpaceKind::sampled: break;
  }
  throw std::invalid_argument("chapman_kolmogorov requires a model descriptor");
}

QuadratureResult kernel_ball_mass(const SpaceDescriptor& desc, double t, double d,
                                  double radius) {
  const AnalyticKernel kernel(desc);
  switch (desc.kind) {
    case SpaceKind::circle: {
      const double circumference = desc.circumference;
      const double r = std::min(radius, 0.5 * circumference);
      auto wrap = [&](double a) {
        a = std::fmod(std::abs(a), circumference);
        return std::min(a, circumference - a);
      };
      auto g = [&](double off) { return kernel.value(t, wrap(d - off)); };
      return integrate(g, -r, r, 1e-13, 1e-11);
    }
    case SpaceKind::euclidean: {
      if (desc.dimension == 1.0) {
        QuadratureResult out;
        const double q = 2.0 * std::sqrt(t);
        out.value = 0.5 * (std::erf((d + radius) / q) - std::erf((d - radius) / q));
        return out;
      }
      const double n_dim = desc.dimension;
      const double sphere = n_dim == 2.0 ? 2.0 : 2.0 * M_PI;  // angular prefactor
      auto g_outer = [&](double rho) {
        auto g_inner = [&](double theta) {
          const double dist =
              std::sqrt(std::max(0.0, rho * rho + d * d - 2.0 * rho * d * std::cos(theta)));
          const double w = n_dim == 2.0 ? 1.0 : std::sin(theta);
          return kernel.value(t, dist) * w;
        };
        const auto inner = integrate(g_inner, 0.0, M_PI, 1e-13, 1e-9);
        return sphere * std::pow(rho, n_dim - 1.0) * inner.value;
      };
      return integrate(g_outer, 0.0, radius, 1e-12, 1e-9);
    }
    case SpaceKind::hyperbolic3: {
      auto g_outer = [&](double rho) {
        const double sh_rho = std::sinh(rho);
        auto g_inner = [&](double theta) {
          const double c = std::max(1.0, std::cosh(rho) * std::cosh(d) -
                                             sh_rho * std::sinh(d) * std::cos(theta));
          return kernel.value(t, std::acosh(c)) * std::sin(theta);
        };
        const auto inner = integrate(g_inner, 0.0, M_PI, 1e-13, 1e-9);
        return 2.0 * M_PI * sh_rho * sh_rho * inner.value;
      };
      return integrate(g_outer, 0.0, radius, 1e-12, 1e-9);
    }
    case SpaceKind::sampled: break;
  }
  throw std::invalid_argument("kernel_ball_mass requires a model descriptor");
}

double model_boundary_integral(const SpaceDescriptor& desc,
                               const std::function<double(double)>& f, double r) {
  return f(r) * model_boundary_area(desc, r);
}

}  // namespace heatlab
