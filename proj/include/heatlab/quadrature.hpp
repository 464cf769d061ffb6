#pragma once

#include <functional>
#include <vector>

namespace heatlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;  // false when the refinement cap was reached
  long evaluations = 0;
};

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
/// Subdivides until the local K15-G7 discrepancy meets
/// max(abs_tol, rel_tol * |integral|) or max_depth is reached.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-10,
                           double rel_tol = 1e-10, int max_depth = 48);

/// Integral of f over [a, inf) via the substitution u -> a + u/(1-u).
QuadratureResult integrate_upper(const std::function<double(double)>& f,
                                 double a, double abs_tol = 1e-10,
                                 double rel_tol = 1e-10);

/// Adaptive integration with a forced initial partition into chunks of at
/// most `segment`.  Use when the integrand support is much narrower than
/// the window, where a single coarse panel would sample past it entirely.
QuadratureResult integrate_segmented(const std::function<double(double)>& f,
                                     double a, double b, double segment,
                                     double abs_tol = 1e-10,
                                     double rel_tol = 1e-10);

/// Segmented integration with known discontinuities pinned to panel
/// boundaries.  A jump hiding in the gap beyond the outermost Kronrod node
/// is invisible to the error estimate at every depth, so breakpoints of
/// piecewise-smooth integrands must be split explicitly.
QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     double a, double b, double segment,
                                     const std::vector<double>& breakpoints,
                                     double abs_tol = 1e-10,
                                     double rel_tol = 1e-10);

}  // namespace heatlab
