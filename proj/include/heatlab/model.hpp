#pragma once

#include <string>

namespace heatlab {

enum class SpaceKind { euclidean, hyperbolic3, circle, sampled };

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& s);

/// Parameters of a model (or externally sampled) metric measure space.
///
/// Consistency rules: euclidean -> K = 0; hyperbolic3 -> K = -2, N = 3
/// (unit-curvature H^3 has Ricci = -2); circle -> K = 0, N = 1.
/// Non-compact models carry a truncation radius R_max > 0.
struct SpaceDescriptor {
  SpaceKind kind = SpaceKind::euclidean;
  double dimension = 1.0;          // N
  double curvature = 0.0;          // K
  double circumference = 0.0;      // L, circle only
  double truncation_radius = 0.0;  // R_max, non-compact models only

  static SpaceDescriptor euclidean(int n_dim, double r_max);
  static SpaceDescriptor hyperbolic3(double r_max);
  static SpaceDescriptor circle(double circumference);
  static SpaceDescriptor external(double n_dim, double curvature);

  bool is_model() const { return kind != SpaceKind::sampled; }
  bool is_compact() const { return kind == SpaceKind::circle; }

  /// Throws std::invalid_argument on an inconsistent field combination.
  void validate() const;

  /// Stable identifier, e.g. "euclidean:N=2:R=8".
  std::string id() const;
};

// ---------------------------------------------------------------------------
// Comparison-geometry constants
// ---------------------------------------------------------------------------

/// omega(N) = pi^{N/2} / Gamma(N/2 + 1), volume of the unit ball in R^N.
double unit_ball_volume(double n_dim);

/// tau_{K,N}(theta) = theta sqrt(-K/N) cotanh(theta sqrt(-K/N)) for K < 0,
/// identically 1 for K = 0.  Continuous at theta = 0 with value 1.
double tau_kn(double curvature, double n_dim, double theta);

/// Model-space ball volume V_{K,N}(r): omega(N) r^N for K = 0, otherwise
/// N omega(N) int_0^r (sinh(s q)/q)^{N-1} ds with q = sqrt(-K/(N-1)).
double comparison_volume(double curvature, double n_dim, double r);

// ---------------------------------------------------------------------------
// Closed-form geometry of the three model spaces
// ---------------------------------------------------------------------------

/// mu(B(x, r)) in the untruncated model (x arbitrary by homogeneity).
/// Circle: min(2r, L).  Euclidean: omega(N) r^N.  H^3: pi (sinh 2r - 2r).
double model_ball_volume(const SpaceDescriptor& desc, double r);

/// Boundary measure s(x, r) = d/dr mu(B(x, r)).
double model_boundary_area(const SpaceDescriptor& desc, double r);

/// theta = liminf_{R->inf} mu(B(x,R)) / R^N: omega(N) for euclidean,
/// 0 for compact models, +inf for exponential volume growth (H^3).
double model_theta(const SpaceDescriptor& desc);

/// Largest time at which truncation leakage is accepted: (R_max/4)^2 for
/// truncated models, a fixed desk-scale cap for the circle.
double model_max_trusted_time(const SpaceDescriptor& desc);

}  // namespace heatlab
