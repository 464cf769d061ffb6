#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heatlab/verifiers.hpp"

using namespace heatlab;

namespace {

Workspace discrete_ws(const SpaceDescriptor& desc, int n, uint64_t seed = 7) {
  Workspace ws;
  ws.desc = desc;
  ws.spectral = discretize(desc, n, seed);
  ws.sample = std::shared_ptr<const SampledSpace>(ws.spectral,
                                                  ws.spectral->generator->space.get());
  ws.grid = GridSpec::discrete_default();
  ws.seed = seed;
  ws.prefer_discrete = true;
  return ws;
}

const CheckResult& find_result(const std::vector<CheckResult>& results,
                               const std::string& name) {
  for (const auto& r : results)
    if (r.name == name) return r;
  REQUIRE_MESSAGE(false, ("missing result " + name).c_str());
  return results.front();
}

const Workspace& circle256() {
  static const Workspace ws = discrete_ws(SpaceDescriptor::circle(2.0 * M_PI), 256);
  return ws;
}

}  // namespace

TEST_CASE("semigroup axioms, discrete circle") {
  const auto results = check_semigroup_axioms(circle256());
  for (const auto& r : results) {
    INFO(r.name);
    CHECK(r.status == CheckStatus::pass);
  }
}

TEST_CASE("bakry-ledoux on the discrete circle") {
  const auto results = check_bakry_ledoux(circle256());
  CHECK(results[0].status == CheckStatus::pass);

  // eigenfunction instance at t = 1/2: constant LHS e^{-1} under the
  // smoothed-energy RHS with minimum (1 - e^{-2})/2
  const SpectralDecomposition& dec = *circle256().spectral;
  const Eigen::VectorXd f = dec.eigenvectors.col(1) * std::sqrt(M_PI);  // unit sup
  const double t = 0.5;
  const Eigen::VectorXd hf = heat_apply(dec, t, f);
  const Eigen::VectorXd lhs =
      carre_du_champ(*dec.generator, hf).array() +
      2.0 * t * (dec.generator->laplacian * hf).array().square();
  const Eigen::VectorXd rhs = heat_apply(dec, t, carre_du_champ(*dec.generator, f));
  CHECK(lhs.maxCoeff() == doctest::Approx(std::exp(-1.0)).epsilon(0.05));
  CHECK(rhs.minCoeff() == doctest::Approx(0.5 - 0.5 * std::exp(-2.0)).epsilon(0.05));
  CHECK((rhs - lhs).minCoeff() >= -5e-2 * rhs.maxCoeff());
}

TEST_CASE("weighted contraction on the discrete circle") {
  const auto results = check_weighted_contraction(circle256());
  CHECK(results[0].status == CheckStatus::pass);
  CHECK(results[0].worst_margin >= 0.0);  // the e^{gamma^2 t} cushion is generous
}

TEST_CASE("caccioppoli sweeps on the discrete circle") {
  const auto results = check_caccioppoli(circle256());
  const auto& lp = find_result(results, "caccioppoli.lp_bound");
  CHECK(lp.status == CheckStatus::pass);
  CHECK(lp.worst_margin >= 0.0);
  const auto& rp = find_result(results, "caccioppoli.reversed_poincare");
  CHECK(rp.status == CheckStatus::pass);
}

TEST_CASE("caccioppoli coefficient for negative curvature") {
  // frozen: K = -2, t = 1/2 -> sqrt(K/(e^{2Kt}-1)) = 1.5208666
  const double coeff = std::sqrt(-2.0 / (std::exp(-2.0) - 1.0));
  CHECK(coeff == doctest::Approx(1.5208666231788149).epsilon(1e-12));
}

TEST_CASE("davies-gaffney estimates on the discrete circle") {
  const auto results = check_davies_gaffney(circle256());

  const auto& offdiag = find_result(results, "davies_gaffney.l2_contraction_offdiag");
  CHECK(offdiag.status == CheckStatus::pass);
  CHECK(offdiag.worst_margin >= 0.0);  // zero violations at constant exactly 1
  CHECK(offdiag.constants.at("pairs") == 28.0);

  const auto& lap = find_result(results, "davies_gaffney.laplacian_decay");
  CHECK(lap.status == CheckStatus::pass);
  CHECK(std::isfinite(lap.constants.at("C")));

  const auto& bilinear = find_result(results, "davies_gaffney.bilinear");
  CHECK(bilinear.status == CheckStatus::pass);
  CHECK(bilinear.worst_margin >= 0.0);

  const auto& grad = find_result(results, "davies_gaffney.gradient_decay");
  CHECK(grad.status == CheckStatus::pass);
  CHECK(grad.constants.at("beta") > 0.0);
  CHECK(grad.constants.at("C") <= 10.0);
}

TEST_CASE("riesz transform on the discrete circle") {
  // n = 128 keeps the refinement ladder {64, 128, 256} cheap
  const Workspace ws = discrete_ws(SpaceDescriptor::circle(2.0 * M_PI), 128);
  const auto results = check_riesz(ws);

  const auto& iso = find_result(results, "riesz.l2_isometry");
  CHECK(iso.status == CheckStatus::pass);
  CHECK(iso.constants.at("a") == 0.0);

  const auto& lp = find_result(results, "riesz.lp_norms");
  CHECK(lp.status == CheckStatus::pass);
  CHECK(lp.constants.at("band") <= 0.15);
  CHECK(lp.constants.at("norm[p=4]") > 0.5);
  CHECK(lp.constants.at("norm[p=4]") < 3.0);

  const auto& weak = find_result(results, "riesz.weak11");
  CHECK(weak.status == CheckStatus::pass);
  CHECK(weak.constants.at("weak11_sup") > 0.0);
  CHECK(std::isfinite(weak.constants.at("weak11_sup")));
}

TEST_CASE("riesz eigenmode energy ratio") {
  const SpectralDecomposition& dec = *circle256().spectral;
  const SampledSpace& space = dec.space();
  // f = phi_k with a = 1: ||sqrt(Gamma((-A+1)^{-1/2} f))||_2^2 =
  // lambda/(lambda+1) ||f||_2^2
  for (int mode : {1, 3, 6}) {
    const Eigen::VectorXd f = dec.eigenvectors.col(mode);
    const double lam = dec.eigenvalues(mode);
    const Eigen::VectorXd tf = spectral_function(
        dec, [](double l) { return 1.0 / std::sqrt(l + 1.0); }, f, ZeroMode::keep);
    const Eigen::VectorXd gamma = carre_du_champ(*dec.generator, tf);
    const double energy =
        weighted_inner(space, gamma, Eigen::VectorXd::Ones(space.size()));
    CHECK(energy == doctest::Approx(lam / (lam + 1.0)).epsilon(1e-10));
    CHECK(energy <= 1.0);
  }
}

TEST_CASE("li-yau on the discrete circle stays within tolerance") {
  const auto results = check_li_yau(circle256());
  CHECK(results[0].status == CheckStatus::pass);
  // the sharp constant is approached on-grid; the dip stays within the
  // component-scaled tolerance band
  CHECK(results[0].worst_margin >= -5e-2 * results[0].margin_scale);
  CHECK(results[0].worst_margin >= -0.5);
}

TEST_CASE("gaussian and gradient bounds on the discrete circle") {
  {
    const auto results = check_gaussian_bounds(circle256());
    const auto& r = find_result(results, "gaussian_bounds[eps=0.5]");
    CHECK(r.status == CheckStatus::pass);
    CHECK(std::isfinite(r.constants.at("C1_upper")));
    CHECK(std::isfinite(r.constants.at("C1_lower")));
    // discrete circle tracks the analytic extremes of the compact model
    CHECK(r.constants.at("C1_upper") > 0.2);
    CHECK(r.constants.at("C1_lower") > 0.5);
  }
  {
    const auto results = check_gradient_bound(circle256());
    const auto& r = find_result(results, "gradient_bound[eps=0.5]");
    CHECK(r.status == CheckStatus::pass);
    CHECK(r.constants.at("drift") <= 0.15);  // includes the n/2 refinement
  }
}

TEST_CASE("spectral time derivative tracks the analytic circle") {
  const SpectralDecomposition& dec = *circle256().spectral;
  const AnalyticKernel kernel(SpaceDescriptor::circle(2.0 * M_PI));
  const double t = 1.0;
  Eigen::VectorXd coeff(dec.size());
  for (int k = 0; k < dec.size(); ++k)
    coeff(k) = -dec.eigenvalues(k) * std::exp(-dec.eigenvalues(k) * t);
  const Eigen::MatrixXd dheat =
      dec.eigenvectors * coeff.asDiagonal() * dec.eigenvectors.transpose();
  for (int j : {0, 32, 64, 128}) {
    const double analytic = kernel.dt(t, dec.space().distance(0, j));
    CHECK(dheat(0, j) == doctest::Approx(analytic).epsilon(0.02));
  }
  const auto results = check_time_derivative(circle256());
  CHECK(results[0].status == CheckStatus::pass);
}

TEST_CASE("harnack on the discrete circle") {
  const auto results = check_harnack(circle256());
  CHECK(results[0].status == CheckStatus::pass);
}

TEST_CASE("doubling and poincare on discrete spaces") {
  {
    const auto results = check_doubling_poincare(circle256());
    CHECK(find_result(results, "doubling_poincare.doubling").status ==
          CheckStatus::pass);
    const auto& poincare = find_result(results, "doubling_poincare.poincare");
    CHECK(poincare.status == CheckStatus::pass);
    CHECK(poincare.constants.at("C_max") < 2.0);  // flat-interval constant 4/pi^2
    CHECK(poincare.constants.at("C_min") > 0.01);
  }
  {
    const Workspace lattice = discrete_ws(SpaceDescriptor::euclidean(1, 4.0), 129);
    const auto results = check_doubling_poincare(lattice);
    CHECK(find_result(results, "doubling_poincare.doubling").status ==
          CheckStatus::pass);
    CHECK(find_result(results, "doubling_poincare.poincare").status ==
          CheckStatus::pass);
  }
}

TEST_CASE("laplacian comparison on the discrete circle") {
  const auto results = check_laplacian_comparison(circle256());
  CHECK(results[0].status == CheckStatus::pass);
}

TEST_CASE("boundary calculus on the discrete circle") {
  const auto results = check_boundary_calculus(circle256());
  CHECK(find_result(results, "boundary_calculus.ratio_bound").status ==
        CheckStatus::pass);
  CHECK(find_result(results, "boundary_calculus.volume_identity").status ==
        CheckStatus::pass);
  CHECK(find_result(results, "boundary_calculus.area_lower_bound").status ==
        CheckStatus::hypothesis_not_met);
  CHECK(find_result(results, "boundary_calculus.coarea").status ==
        CheckStatus::pass);
  CHECK(find_result(results, "boundary_calculus.volume_identity")
            .constants.at("delta_sensitivity") < 1.0);
}

TEST_CASE("hyperbolic sample: operator sweeps stay inside tolerances") {
  const Workspace h3 = discrete_ws(SpaceDescriptor::hyperbolic3(3.0), 400, 3);
  {
    const auto results = check_caccioppoli(h3);
    const auto& lp = find_result(results, "caccioppoli.lp_bound");
    CHECK(lp.status == CheckStatus::pass);
  }
  {
    const auto results = check_semigroup_axioms(h3);
    for (const auto& r : results) {
      INFO(r.name);
      CHECK(r.status == CheckStatus::pass);
    }
  }
}

TEST_CASE("checkers are deterministic given space, grid and seed") {
  const auto a = check_davies_gaffney(circle256());
  const auto b = check_davies_gaffney(circle256());
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].worst_margin == b[i].worst_margin);
    CHECK(a[i].constants == b[i].constants);
    CHECK(to_string(a[i].status) == to_string(b[i].status));
  }
}
