#include "heatlab/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "heatlab/quadrature.hpp"

namespace heatlab {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::euclidean: return "euclidean";
    case SpaceKind::hyperbolic3: return "hyperbolic3";
    case SpaceKind::circle: return "circle";
    case SpaceKind::sampled: return "sampled";
  }
  return "unknown";
}

SpaceKind space_kind_from_string(const std::string& s) {
  if (s == "euclidean") return SpaceKind::euclidean;
  if (s == "hyperbolic3") return SpaceKind::hyperbolic3;
  if (s == "circle") return SpaceKind::circle;
  if (s == "sampled") return SpaceKind::sampled;
  throw std::invalid_argument("unknown space kind: " + s);
}

SpaceDescriptor SpaceDescriptor::euclidean(int n_dim, double r_max) {
  SpaceDescriptor d;
  d.kind = SpaceKind::euclidean;
  d.dimension = n_dim;
  d.curvature = 0.0;
  d.truncation_radius = r_max;
  d.validate();
  return d;
}

SpaceDescriptor SpaceDescriptor::hyperbolic3(double r_max) {
  SpaceDescriptor d;
  d.kind = SpaceKind::hyperbolic3;
  d.dimension = 3.0;
  d.curvature = -2.0;
  d.truncation_radius = r_max;
  d.validate();
  return d;
}

SpaceDescriptor SpaceDescriptor::circle(double circumference) {
  SpaceDescriptor d;
  d.kind = SpaceKind::circle;
  d.dimension = 1.0;
  d.curvature = 0.0;
  d.circumference = circumference;
  d.validate();
  return d;
}

SpaceDescriptor SpaceDescriptor::external(double n_dim, double curvature) {
  SpaceDescriptor d;
  d.kind = SpaceKind::sampled;
  d.dimension = n_dim;
  d.curvature = curvature;
  d.validate();
  return d;
}

void SpaceDescriptor::validate() const {
  if (dimension <= 0.0) throw std::invalid_argument("dimension must be positive");
  switch (kind) {
    case SpaceKind::euclidean:
      if (curvature != 0.0) throw std::invalid_argument("euclidean requires K = 0");
      if (truncation_radius <= 0.0)
        throw std::invalid_argument("euclidean requires truncation radius R_max > 0");
      break;
    case SpaceKind::hyperbolic3:
      if (curvature != -2.0 || dimension != 3.0)
        throw std::invalid_argument("hyperbolic3 requires K = -2, N = 3");
      if (truncation_radius <= 0.0)
        throw std::invalid_argument("hyperbolic3 requires truncation radius R_max > 0");
      break;
    case SpaceKind::circle:
      if (curvature != 0.0 || dimension != 1.0)
        throw std::invalid_argument("circle requires K = 0, N = 1");
      if (circumference <= 0.0)
        throw std::invalid_argument("circle requires circumference L > 0");
      break;
    case SpaceKind::sampled:
      break;
  }
}

std::string SpaceDescriptor::id() const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case SpaceKind::euclidean:
      os << ":N=" << dimension << ":R=" << truncation_radius;
      break;
    case SpaceKind::hyperbolic3:
      os << ":R=" << truncation_radius;
      break;
    case SpaceKind::circle:
      os << ":L=" << circumference;
      break;
    case SpaceKind::sampled:
      os << ":N=" << dimension << ":K=" << curvature;
      break;
  }
  return os.str();
}

double unit_ball_volume(double n_dim) {
  return std::pow(M_PI, 0.5 * n_dim) / std::tgamma(0.5 * n_dim + 1.0);
}

double tau_kn(double curvature, double n_dim, double theta) {
  if (curvature == 0.0) return 1.0;
  if (curvature > 0.0) throw std::invalid_argument("tau_kn defined for K <= 0");
  const double q = std::sqrt(-curvature / n_dim);
  const double x = theta * q;
  if (std::abs(x) < 1e-6) return 1.0 + x * x / 3.0;  // x coth x series
  return x / std::tanh(x);
}

double comparison_volume(double curvature, double n_dim, double r) {
  if (r <= 0.0) return 0.0;
  const double omega = unit_ball_volume(n_dim);
  if (curvature == 0.0) return omega * std::pow(r, n_dim);
  if (curvature > 0.0) throw std::invalid_argument("comparison_volume defined for K <= 0");
  if (n_dim <= 1.0) throw std::invalid_argument("comparison_volume for K < 0 requires N > 1");
  const double q = std::sqrt(-curvature / (n_dim - 1.0));
  auto integrand = [&](double s) {
    const double x = s * q;
    const double snh = std::abs(x) < 1e-8 ? s * (1.0 + x * x / 6.0) : std::sinh(x) / q;
    return std::pow(snh, n_dim - 1.0);
  };
  const auto q_res = integrate(integrand, 0.0, r, 1e-12, 1e-12);
  return n_dim * omega * q_res.value;
}

double model_ball_volume(const SpaceDescriptor& desc, double r) {
  if (r <= 0.0) return 0.0;
  switch (desc.kind) {
    case SpaceKind::circle:
      return std::min(2.0 * r, desc.circumference);
    case SpaceKind::euclidean:
      return unit_ball_volume(desc.dimension) * std::pow(r, desc.dimension);
    case SpaceKind::hyperbolic3:
      // 4 pi int_0^r sinh^2 = pi (sinh 2r - 2r)
      return M_PI * (std::sinh(2.0 * r) - 2.0 * r);
    case SpaceKind::sampled:
      throw std::invalid_argument("model_ball_volume: no closed form for sampled spaces");
  }
  return 0.0;
}

double model_boundary_area(const SpaceDescriptor& desc, double r) {
  switch (desc.kind) {
    case SpaceKind::circle:
      return 2.0 * r < desc.circumference ? 2.0 : 0.0;
    case SpaceKind::euclidean:
      return desc.dimension * unit_ball_volume(desc.dimension) *
             std::pow(r, desc.dimension - 1.0);
    case SpaceKind::hyperbolic3: {
      const double s = std::sinh(r);
      return 4.0 * M_PI * s * s;
    }
    case SpaceKind::sampled:
      throw std::invalid_argument("model_boundary_area: no closed form for sampled spaces");
  }
  return 0.0;
}

double model_theta(const SpaceDescriptor& desc) {
  switch (desc.kind) {
    case SpaceKind::circle:
      return 0.0;
    case SpaceKind::euclidean:
      return unit_ball_volume(desc.dimension);
    case SpaceKind::hyperbolic3:
      return std::numeric_limits<double>::infinity();
    case SpaceKind::sampled:
      throw std::invalid_argument("model_theta: estimate from a volume profile instead");
  }
  return 0.0;
}

double model_max_trusted_time(const SpaceDescriptor& desc) {
  if (desc.kind == SpaceKind::circle) return 1e3;
  const double q = desc.truncation_radius / 4.0;
  return q * q;
}

}  // namespace heatlab
