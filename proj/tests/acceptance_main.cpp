// Acceptance suite: one binary, one printed line per criterion.
// Exit status = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "heatlab/verifiers.hpp"

using namespace heatlab;

namespace {

int failures = 0;

void criterion(int id, const std::string& label, double time_limit_s,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (elapsed > time_limit_s) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
  }
  if (!ok) ++failures;
  std::printf("[%s] criterion %2d: %s (%.2f s%s)%s%s\n", ok ? "PASS" : "FAIL", id,
              label.c_str(), elapsed, elapsed > time_limit_s ? ", over limit" : "",
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
}

Workspace analytic_ws(const SpaceDescriptor& desc) {
  Workspace ws;
  ws.desc = desc;
  ws.grid = GridSpec::analytic_default();
  ws.seed = 42;
  return ws;
}

Workspace discrete_ws(const SpaceDescriptor& desc, int n) {
  Workspace ws;
  ws.desc = desc;
  ws.spectral = discretize(desc, n, 42);
  ws.sample = std::shared_ptr<const SampledSpace>(ws.spectral,
                                                  ws.spectral->generator->space.get());
  ws.grid = GridSpec::discrete_default();
  ws.seed = 42;
  ws.prefer_discrete = true;
  return ws;
}

const CheckResult* find_result(const std::vector<CheckResult>& results,
                               const std::string& name) {
  for (const auto& r : results)
    if (r.name == name) return &r;
  return nullptr;
}

bool close(double value, double target, double tol) {
  return std::abs(value - target) <= tol;
}

}  // namespace

int main() {
  criterion(1, "euclidean Li-Yau equality, N in {1,2,3}, 16x16 grid", 1.0,
            [](std::string& detail) {
              double worst = 0.0;
              for (int n_dim : {1, 2, 3}) {
                const AnalyticKernel kernel(SpaceDescriptor::euclidean(n_dim, 8.0));
                for (int i = 0; i < 16; ++i)
                  for (int j = 0; j < 16; ++j) {
                    const double t = 0.0625 * std::pow(1.3, i);
                    const double d = 0.25 * j;
                    const KernelPoint kp = kernel.at(t, d);
                    const double expr =
                        std::pow(kp.gradient / kp.value, 2) - kp.dt / kp.value;
                    const double bound = n_dim / (2.0 * t);
                    worst = std::max(worst, std::abs(expr - bound) / bound);
                  }
              }
              char buf[64];
              std::snprintf(buf, sizeof buf, "worst residual %.3g", worst);
              detail = buf;
              return worst <= 1e-9;
            });

  criterion(2, "large-time limit: N=2 -> 0.25, N=3 -> 0.094032 at t=100", 1.0,
            [](std::string& detail) {
              const AnalyticKernel plane(SpaceDescriptor::euclidean(2, 8.0));
              const double a2 = plane.ball_volume(10.0) * plane.value(100.0, 1.0);
              const AnalyticKernel space3(SpaceDescriptor::euclidean(3, 8.0));
              const double a3 = space3.ball_volume(10.0) * space3.value(100.0, 1.0);
              char buf[96];
              std::snprintf(buf, sizeof buf, "a2 = %.6f, a3 = %.6f", a2, a3);
              detail = buf;
              return std::abs(a2 - 0.25) / 0.25 <= 5e-3 &&
                     std::abs(a3 - 0.094032) / 0.094032 <= 5e-3;
            });

  criterion(3, "circle spectral convergence at n = 256 and 512", 30.0,
            [](std::string& detail) {
              const double analytic = 0.282122;
              const auto dec256 = discretize(SpaceDescriptor::circle(2.0 * M_PI), 256, 42);
              const auto dec512 = discretize(SpaceDescriptor::circle(2.0 * M_PI), 512, 42);
              const double d256 = heat_diagonal(*dec256, 1.0)(0);
              const double d512 = heat_diagonal(*dec512, 1.0)(0);
              const double lam1 = dec256->eigenvalues(1);
              char buf[128];
              std::snprintf(buf, sizeof buf,
                            "err256 = %.3g, err512 = %.3g, lambda1 = %.4f",
                            std::abs(d256 - analytic) / analytic,
                            std::abs(d512 - analytic) / analytic, lam1);
              detail = buf;
              return std::abs(d256 - analytic) / analytic <= 1e-2 &&
                     std::abs(d512 - analytic) / analytic <= 3.5e-3 &&
                     std::abs(lam1 - 1.0) <= 2e-2;
            });

  criterion(4, "gaussian-bound fitting: plane extremes, H3 stability", 10.0,
            [](std::string& detail) {
              const auto plane =
                  check_gaussian_bounds(analytic_ws(SpaceDescriptor::euclidean(2, 8.0)));
              const CheckResult* pr = find_result(plane, "gaussian_bounds[eps=0.5]");
              if (!pr) return false;
              const bool plane_ok =
                  close(pr->constants.at("C1_upper"), 0.25, 1e-6) &&
                  close(pr->constants.at("C1_lower"), 4.0, 1e-4);
              const auto h3 =
                  check_gaussian_bounds(analytic_ws(SpaceDescriptor::hyperbolic3(3.0)));
              bool h3_ok = true;
              for (const auto& r : h3) {
                if (!std::isfinite(r.constants.at("C1_upper")) ||
                    !std::isfinite(r.constants.at("C1_lower")) ||
                    r.constants.at("drift") > 0.10 || r.status != CheckStatus::pass)
                  h3_ok = false;
              }
              char buf[128];
              std::snprintf(buf, sizeof buf, "upper = %.8f, lower = %.6f",
                            pr->constants.at("C1_upper"), pr->constants.at("C1_lower"));
              detail = buf;
              return plane_ok && h3_ok;
            });

  criterion(5, "harnack: zero violations, worked instance to 6 digits", 1.0,
            [](std::string& detail) {
              const auto results =
                  check_harnack(analytic_ws(SpaceDescriptor::euclidean(1, 8.0)));
              const CheckResult* r = find_result(results, "harnack.forward");
              // the bound is sharp on-grid; zero violations means no margin
              // beyond floating-point zero
              if (!r || r->status != CheckStatus::pass ||
                  r->worst_margin < -1e-12 * std::max(1.0, r->margin_scale))
                return false;
              const AnalyticKernel kernel(SpaceDescriptor::euclidean(1, 8.0));
              const double lhs = kernel.value(1.0, 0.0);
              const double rhs =
                  kernel.value(2.0, 1.0) * std::exp(0.25) * std::sqrt(2.0);
              char buf[96];
              std::snprintf(buf, sizeof buf, "lhs = %.6f, rhs = %.6f", lhs, rhs);
              detail = buf;
              // 0.282095 reproduced to 6 digits; the quoted 0.31963 sits within
              // rounding slop of the closed-form 0.3196553
              return close(lhs, 0.282095, 5e-7) && close(rhs, 0.3196553, 1e-6) &&
                     close(rhs, 0.31963, 1e-4) && lhs <= rhs;
            });

  criterion(6, "davies-gaffney exhaustive over the 8-arc partition", 60.0,
            [](std::string& detail) {
              const Workspace ws =
                  discrete_ws(SpaceDescriptor::circle(2.0 * M_PI), 256);
              const auto results = check_davies_gaffney(ws);
              const CheckResult* r =
                  find_result(results, "davies_gaffney.l2_contraction_offdiag");
              if (!r) return false;
              char buf[96];
              std::snprintf(buf, sizeof buf, "pairs = %g, worst margin = %.3g",
                            r->constants.at("pairs"), r->worst_margin);
              detail = buf;
              return r->status == CheckStatus::pass && r->worst_margin >= 0.0 &&
                     r->constants.at("pairs") == 28.0;
            });

  criterion(7, "riesz L2 isometry and L4 refinement band", 90.0,
            [](std::string& detail) {
              const Workspace ws =
                  discrete_ws(SpaceDescriptor::circle(2.0 * M_PI), 256);
              const auto results = check_riesz(ws);
              const CheckResult* iso = find_result(results, "riesz.l2_isometry");
              const CheckResult* lp = find_result(results, "riesz.lp_norms");
              if (!iso || !lp) return false;
              char buf[96];
              std::snprintf(buf, sizeof buf, "band = %.3f, norm(p=4) = %.3f",
                            lp->constants.at("band"), lp->constants.at("norm[p=4]"));
              detail = buf;
              return iso->status == CheckStatus::pass &&
                     lp->constants.at("band") <= 0.15;
            });

  criterion(8, "caccioppoli: closed-form line instance and discrete sweep", 10.0,
            [](std::string& detail) {
              const auto inst =
                  check_caccioppoli(analytic_ws(SpaceDescriptor::euclidean(1, 8.0)));
              const CheckResult* line =
                  find_result(inst, "caccioppoli.closed_form_line");
              if (!line) return false;
              const double sup = line->constants.at("gradient_sup");
              const double bound = line->constants.at("bound");
              const Workspace ws =
                  discrete_ws(SpaceDescriptor::circle(2.0 * M_PI), 256);
              const auto sweep = check_caccioppoli(ws);
              const CheckResult* lp = find_result(sweep, "caccioppoli.lp_bound");
              char buf[96];
              std::snprintf(buf, sizeof buf, "sup = %.5f <= %.5f", sup, bound);
              detail = buf;
              return close(sup, 0.56419, 1e-5) && close(bound, 0.70711, 1e-5) &&
                     sup <= bound && lp && lp->status == CheckStatus::pass &&
                     lp->worst_margin >= 0.0;
            });

  criterion(9, "laplacian comparison: H3 instance and full r-grid", 1.0,
            [](std::string& detail) {
              const double lhs = 2.0 / std::tanh(1.0);
              const double rhs = 3.0 * tau_kn(-2.0, 3.0, 1.0) - 1.0;
              const auto results = check_laplacian_comparison(
                  analytic_ws(SpaceDescriptor::hyperbolic3(3.0)));
              char buf[96];
              std::snprintf(buf, sizeof buf, "%.5f <= %.5f, worst margin %.3g", lhs,
                            rhs, results[0].worst_margin);
              detail = buf;
              return close(lhs, 2.62607, 1e-5) && close(rhs, 2.63880, 1e-5) &&
                     lhs <= rhs && results[0].status == CheckStatus::pass &&
                     results[0].worst_margin >= 0.0;
            });

  criterion(10, "hypothesis routing and compactness diagnostics", 30.0,
            [](std::string& detail) {
              const Workspace circle = analytic_ws(SpaceDescriptor::circle(2.0 * M_PI));
              const bool lt = check_large_time(circle)[0].status ==
                              CheckStatus::hypothesis_not_met;
              const bool st =
                  check_stability(circle)[0].status == CheckStatus::hypothesis_not_met;
              const auto boundary = check_boundary_calculus(circle);
              const CheckResult* area =
                  find_result(boundary, "boundary_calculus.area_lower_bound");
              const bool bc = area && area->status == CheckStatus::hypothesis_not_met;

              const auto compact = compactness_diagnostic(circle);
              const double trace = compact[0].constants.at("trace");

              const auto line =
                  compactness_diagnostic(analytic_ws(SpaceDescriptor::euclidean(1, 8.0)));
              const double t1 = line[0].constants.at("trace[R x 1]");
              const double t2 = line[0].constants.at("trace[R x 2]");
              const double t4 = line[0].constants.at("trace[R x 4]");
              char buf[96];
              std::snprintf(buf, sizeof buf, "trace = %.6f, line traces %.3f/%.3f/%.3f",
                            trace, t1, t2, t4);
              detail = buf;
              return lt && st && bc && close(trace, 1.77264, 1e-4) && t2 > t1 &&
                     t4 > t2;
            });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
