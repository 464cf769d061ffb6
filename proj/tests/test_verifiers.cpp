#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heatlab/verifiers.hpp"

using namespace heatlab;

namespace {

Workspace analytic_ws(const SpaceDescriptor& desc) {
  Workspace ws;
  ws.desc = desc;
  ws.grid = GridSpec::analytic_default();
  ws.seed = 42;
  return ws;
}

const CheckResult& find_result(const std::vector<CheckResult>& results,
                               const std::string& name) {
  for (const auto& r : results)
    if (r.name == name) return r;
  REQUIRE_MESSAGE(false, ("missing result " + name).c_str());
  return results.front();
}

}  // namespace

TEST_CASE("gaussian bounds on the plane: closed-form extremes at d = 0") {
  const auto results =
      check_gaussian_bounds(analytic_ws(SpaceDescriptor::euclidean(2, 8.0)));
  const auto& r = find_result(results, "gaussian_bounds[eps=0.5]");
  CHECK(r.status == CheckStatus::pass);
  CHECK(std::abs(r.constants.at("C1_upper") - 0.25) <= 1e-6);
  CHECK(std::abs(r.constants.at("C1_lower") - 4.0) <= 1e-4);
  CHECK(r.witness.at("u") == 0.0);
  CHECK(r.constants.at("drift") <= 1e-12);
  CHECK(r.constants.find("C2") == r.constants.end());
}

TEST_CASE("gaussian bounds on hyperbolic3: finite and refinement-stable") {
  const auto results =
      check_gaussian_bounds(analytic_ws(SpaceDescriptor::hyperbolic3(3.0)));
  const auto& r = find_result(results, "gaussian_bounds[eps=1]");
  CHECK(r.status == CheckStatus::pass);
  CHECK(std::isfinite(r.constants.at("C1_upper")));
  CHECK(std::isfinite(r.constants.at("C1_lower")));
  CHECK(r.constants.at("C1_upper") > 0.0);
  CHECK(r.constants.at("C2") > 0.0);
  CHECK(r.constants.at("drift") <= 0.10);
}

TEST_CASE("gaussian bounds on the circle (compact, K = 0)") {
  const auto results = check_gaussian_bounds(
      analytic_ws(SpaceDescriptor::circle(2.0 * M_PI)));
  for (const auto& r : results) {
    CHECK(r.status == CheckStatus::pass);
    CHECK(std::isfinite(r.constants.at("C1_upper")));
    CHECK(std::isfinite(r.constants.at("C1_lower")));
  }
}

TEST_CASE("integrated lower bound: plane instance") {
  Workspace ws = analytic_ws(SpaceDescriptor::euclidean(2, 8.0));
  const auto results = check_integrated_lower_bound(ws);
  const auto& r = find_result(results, "integrated_lower_bound[eps=0.5]");
  CHECK(r.status == CheckStatus::pass);
  // at x = y: ball mass 1 - e^{-1/4}, shape e^{-3/2}; the grid minimum sits there
  CHECK(r.constants.at("C") == doctest::Approx(0.99134611287622345).epsilon(1e-4));
  CHECK(r.witness.at("u") == 0.0);
}

TEST_CASE("gradient bound on the line: interior maximum") {
  const auto results =
      check_gradient_bound(analytic_ws(SpaceDescriptor::euclidean(1, 8.0)));
  const auto& r = find_result(results, "gradient_bound[eps=0.5]");
  CHECK(r.status == CheckStatus::pass);
  // sup_u u (4 pi)^{-1/2} e^{-u^2/36} on the u-grid, attained at u = 4.25
  CHECK(r.constants.at("C1") == doctest::Approx(0.72590).epsilon(5e-3));
  CHECK(r.witness.at("u") > 3.5);
  CHECK(r.witness.at("u") < 5.0);
}

TEST_CASE("gradient bound on hyperbolic3 carries a C2 factor") {
  const auto results =
      check_gradient_bound(analytic_ws(SpaceDescriptor::hyperbolic3(3.0)));
  const auto& r = find_result(results, "gradient_bound[eps=1]");
  CHECK(r.status == CheckStatus::pass);
  CHECK(std::isfinite(r.constants.at("C1")));
  CHECK(r.constants.at("C2") >= 0.0);
}

TEST_CASE("Li-Yau: euclidean equality, hyperbolic inequality") {
  for (int n_dim : {1, 2, 3}) {
    const auto results =
        check_li_yau(analytic_ws(SpaceDescriptor::euclidean(n_dim, 8.0)));
    CHECK(results[0].status == CheckStatus::pass);
    // equality case: margins vanish to rounding
    CHECK(std::abs(results[0].worst_margin) <=
          1e-9 * std::max(1.0, results[0].margin_scale));
  }
  const auto h3 = check_li_yau(analytic_ws(SpaceDescriptor::hyperbolic3(3.0)));
  CHECK(h3[0].status == CheckStatus::pass);
  CHECK(h3[0].worst_margin >= 0.0);

  const auto circle = check_li_yau(analytic_ws(SpaceDescriptor::circle(2.0 * M_PI)));
  CHECK(circle[0].status == CheckStatus::pass);
}

TEST_CASE("harnack forward inequality on the line includes the worked instance") {
  const auto results = check_harnack(analytic_ws(SpaceDescriptor::euclidean(1, 8.0)));
  const auto& r = find_result(results, "harnack.forward");
  CHECK(r.status == CheckStatus::pass);
  // the inequality is sharp along a/s = (b-a)/(t-s); equality configurations
  // land on the grid, so the worst margin is zero up to rounding
  CHECK(r.worst_margin >= -1e-12 * std::max(1.0, r.margin_scale));

  // frozen instance: p_1(0,0) <= p_2(0,1) e^{1/4} sqrt(2)
  const AnalyticKernel kernel(SpaceDescriptor::euclidean(1, 8.0));
  const double lhs = kernel.value(1.0, 0.0);
  const double rhs = kernel.value(2.0, 1.0) * std::exp(0.25) * std::sqrt(2.0);
  CHECK(lhs == doctest::Approx(0.28209479177387814).epsilon(1e-11));
  CHECK(rhs == doctest::Approx(0.31965527691677850).epsilon(1e-11));
  CHECK(lhs <= rhs);
}

TEST_CASE("harnack on hyperbolic3: corrected K < 0 volume factor") {
  const auto results = check_harnack(analytic_ws(SpaceDescriptor::hyperbolic3(3.0)));
  const auto& fwd = find_result(results, "harnack.forward");
  CHECK(fwd.status == CheckStatus::pass);
  CHECK(fwd.worst_margin >= 0.0);
  const auto& chain = find_result(results, "harnack.kernel_chain");
  CHECK(chain.status == CheckStatus::pass);

  // frozen on-diagonal instance, s = 1/2, t = 1, K = -2, N = 3:
  // p_{1/2}(0) <= p_1(0) ((e^{4/3}-1)/(e^{2/3}-1))^{3/2}
  const AnalyticKernel kernel(SpaceDescriptor::hyperbolic3(3.0));
  const double lhs = kernel.value(0.5, 0.0);
  const double factor =
      std::pow((std::exp(4.0 / 3.0) - 1.0) / (std::exp(2.0 / 3.0) - 1.0), 1.5);
  const double rhs = kernel.value(1.0, 0.0) * factor;
  CHECK(lhs == doctest::Approx(0.038511).epsilon(1e-4));
  CHECK(rhs == doctest::Approx(0.041810).epsilon(1e-4));
  CHECK(lhs <= rhs);
}

TEST_CASE("time-derivative envelope on the plane") {
  const auto results =
      check_time_derivative(analytic_ws(SpaceDescriptor::euclidean(2, 8.0)));
  const auto& r = find_result(results, "time_derivative[eps=0.5]");
  CHECK(r.status == CheckStatus::pass);
  // the d = 0 ray alone forces C >= 1/4
  CHECK(r.constants.at("C") >= 0.25 - 1e-12);
  CHECK(std::isfinite(r.constants.at("C")));
}

TEST_CASE("large time: plane and 3-space converge, circle routed to hypothesis") {
  {
    const auto results = check_large_time(analytic_ws(SpaceDescriptor::euclidean(2, 8.0)));
    const auto& r = results[0];
    CHECK(r.status == CheckStatus::pass);
    CHECK(r.constants.at("limit") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.constants.at("a_at_t100_d1") ==
          doctest::Approx(0.24937578059936503).epsilon(1e-10));
  }
  {
    const auto results = check_large_time(analytic_ws(SpaceDescriptor::euclidean(3, 8.0)));
    const auto& r = results[0];
    CHECK(r.status == CheckStatus::pass);
    CHECK(r.constants.at("limit") ==
          doctest::Approx(0.094031597257959381).epsilon(1e-12));
  }
  {
    const auto results = check_large_time(analytic_ws(SpaceDescriptor::circle(2.0 * M_PI)));
    CHECK(results[0].status == CheckStatus::hypothesis_not_met);
  }
  {
    const auto results = check_large_time(analytic_ws(SpaceDescriptor::hyperbolic3(3.0)));
    CHECK(results[0].status == CheckStatus::hypothesis_not_met);
  }
  {
    const auto results = check_large_time(analytic_ws(SpaceDescriptor::euclidean(1, 8.0)));
    CHECK(results[0].status == CheckStatus::hypothesis_not_met);
  }
}

TEST_CASE("stability on the line: nets agree within 2 percent") {
  const auto results = check_stability(analytic_ws(SpaceDescriptor::euclidean(1, 8.0)));
  const auto& r = results[0];
  CHECK(r.status == CheckStatus::pass);
  CHECK(r.constants.at("heat_limit[constant]") == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.constants.at("avg_limit[constant]") == doctest::Approx(0.5).epsilon(1e-12));
  // outside-unit-ball indicator: 1 - erf(1/40) against 1 - 1/100
  CHECK(r.constants.at("heat_limit[outside_unit_ball]") ==
        doctest::Approx(0.9717964).epsilon(1e-6));
  CHECK(r.constants.at("avg_limit[outside_unit_ball]") ==
        doctest::Approx(0.99).epsilon(1e-9));
  // odd function: both nets identically zero
  CHECK(std::abs(r.constants.at("heat_limit[odd_sign]")) <= 1e-9);
  CHECK(std::abs(r.constants.at("avg_limit[odd_sign]")) <= 1e-12);
}

TEST_CASE("stability hypothesis routing") {
  CHECK(check_stability(analytic_ws(SpaceDescriptor::circle(2.0 * M_PI)))[0].status ==
        CheckStatus::hypothesis_not_met);
  CHECK(check_stability(analytic_ws(SpaceDescriptor::hyperbolic3(3.0)))[0].status ==
        CheckStatus::hypothesis_not_met);
}

TEST_CASE("compactness diagnostic: circle trace and inverse integral") {
  const auto results =
      compactness_diagnostic(analytic_ws(SpaceDescriptor::circle(2.0 * M_PI)));
  const auto& r = results[0];
  CHECK(r.status == CheckStatus::pass);
  CHECK(r.constants.at("trace") == doctest::Approx(1.7726372048266522).epsilon(1e-8));
  CHECK(r.constants.at("inverse_kernel_integral") <= 131.33);
  CHECK(r.constants.at("inverse_kernel_integral") > 2.0 * M_PI);
}

TEST_CASE("compactness diagnostic: truncated line trace grows with R_max") {
  const auto results =
      compactness_diagnostic(analytic_ws(SpaceDescriptor::euclidean(1, 8.0)));
  const auto& r = results[0];
  CHECK(r.status == CheckStatus::pass);
  const double t1 = r.constants.at("trace[R x 1]");
  const double t2 = r.constants.at("trace[R x 2]");
  const double t4 = r.constants.at("trace[R x 4]");
  CHECK(t2 == doctest::Approx(2.0 * t1).epsilon(1e-12));
  CHECK(t4 == doctest::Approx(4.0 * t1).epsilon(1e-12));
}

TEST_CASE("laplacian comparison: equality on the plane, H3 instance") {
  {
    const auto results =
        check_laplacian_comparison(analytic_ws(SpaceDescriptor::euclidean(2, 8.0)));
    CHECK(results[0].status == CheckStatus::pass);
    CHECK(std::abs(results[0].worst_margin) <= 1e-12);
  }
  {
    const auto results =
        check_laplacian_comparison(analytic_ws(SpaceDescriptor::hyperbolic3(3.0)));
    CHECK(results[0].status == CheckStatus::pass);
    CHECK(results[0].worst_margin >= 0.0);
  }
  // frozen instance at r = 1: 2 coth 1 <= 3 tau - 1
  CHECK(2.0 / std::tanh(1.0) == doctest::Approx(2.6260705709986626).epsilon(1e-12));
  CHECK(3.0 * tau_kn(-2.0, 3.0, 1.0) - 1.0 ==
        doctest::Approx(2.6388007785048619).epsilon(1e-12));
  // asymptote: bound behaves like sqrt(6) - 1/r while the Laplacian tends to 2
  CHECK((3.0 * tau_kn(-2.0, 3.0, 40.0) - 1.0) / 40.0 + 1.0 / 40.0 ==
        doctest::Approx(std::sqrt(6.0)).epsilon(1e-6));
  CHECK(2.0 / std::tanh(40.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("boundary calculus on the plane: equalities and co-area") {
  const auto results =
      check_boundary_calculus(analytic_ws(SpaceDescriptor::euclidean(2, 8.0)));
  CHECK(find_result(results, "boundary_calculus.ratio_bound").status ==
        CheckStatus::pass);
  CHECK(std::abs(find_result(results, "boundary_calculus.ratio_bound").worst_margin) <=
        1e-10);
  CHECK(find_result(results, "boundary_calculus.volume_identity").status ==
        CheckStatus::pass);
  const auto& lower = find_result(results, "boundary_calculus.area_lower_bound");
  CHECK(lower.status == CheckStatus::pass);
  CHECK(lower.constants.at("theta") == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(std::abs(lower.worst_margin) <= 1e-10);
  CHECK(find_result(results, "boundary_calculus.coarea").status == CheckStatus::pass);
}

TEST_CASE("boundary calculus on the circle: Lemma area bound not applicable") {
  const auto results =
      check_boundary_calculus(analytic_ws(SpaceDescriptor::circle(2.0 * M_PI)));
  CHECK(find_result(results, "boundary_calculus.area_lower_bound").status ==
        CheckStatus::hypothesis_not_met);
  CHECK(find_result(results, "boundary_calculus.ratio_bound").status ==
        CheckStatus::pass);
}

TEST_CASE("semigroup axioms, analytic paths") {
  for (const auto& desc :
       {SpaceDescriptor::euclidean(1, 8.0), SpaceDescriptor::euclidean(2, 8.0),
        SpaceDescriptor::circle(2.0 * M_PI), SpaceDescriptor::hyperbolic3(3.0)}) {
    const auto results = check_semigroup_axioms(analytic_ws(desc));
    for (const auto& r : results) {
      INFO(desc.id(), "/", r.name);
      CHECK(r.status == CheckStatus::pass);
    }
  }
}

TEST_CASE("caccioppoli closed-form line instance") {
  Workspace ws = analytic_ws(SpaceDescriptor::euclidean(1, 8.0));
  // analytic-only workspace: the checker emits the closed-form instance and
  // stops before the discrete sweep
  const auto results = check_caccioppoli(ws);
  const auto& r = find_result(results, "caccioppoli.closed_form_line");
  CHECK(r.status == CheckStatus::pass);
  CHECK(r.constants.at("gradient_sup") ==
        doctest::Approx(0.56418958354775629).epsilon(1e-6));
  CHECK(r.constants.at("bound") ==
        doctest::Approx(0.70710678118654752).epsilon(1e-12));
}

TEST_CASE("doubling on models, including the circle case analysis") {
  {
    const auto results =
        check_doubling_poincare(analytic_ws(SpaceDescriptor::euclidean(2, 8.0)));
    const auto& r = find_result(results, "doubling_poincare.doubling");
    CHECK(r.status == CheckStatus::pass);
    CHECK(std::abs(r.worst_margin) <= 1e-9);  // exact cone volumes
  }
  {
    const auto results =
        check_doubling_poincare(analytic_ws(SpaceDescriptor::circle(2.0 * M_PI)));
    CHECK(find_result(results, "doubling_poincare.doubling").status ==
          CheckStatus::pass);
  }
  {
    const auto results =
        check_doubling_poincare(analytic_ws(SpaceDescriptor::hyperbolic3(3.0)));
    CHECK(find_result(results, "doubling_poincare.doubling").status ==
          CheckStatus::pass);
  }
}
