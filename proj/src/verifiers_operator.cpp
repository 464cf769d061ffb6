#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "heatlab/verifiers.hpp"

namespace heatlab {

namespace {

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

CheckResult make_result(const Workspace& ws, const std::string& name) {
  CheckResult r;
  r.name = name;
  r.space_id = ws.desc.id();
  r.grid_summary = ws.grid.summary();
  return r;
}

std::vector<double> semigroup_times(const Workspace& ws) {
  std::vector<double> times = {0.25, 1.0};
  if (ws.discrete_path() && ws.has_spectral()) {
    const double cap = ws.desc.is_model()
                           ? model_max_trusted_time(ws.desc)
                           : 0.25 * std::pow(ws.space().trust_radius.maxCoeff(), 2);
    std::vector<double> kept;
    for (double t : times)
      if (t <= cap || ws.desc.is_compact()) kept.push_back(t);
    if (kept.empty()) kept.push_back(std::max(1e-3, cap));
    return kept;
  }
  return times;
}

/// Caccioppoli coefficient sqrt(K / (e^{2Kt} - 1)), with the K -> 0 limit
/// 1 / sqrt(2t).
double caccioppoli_coefficient(double curvature, double t) {
  if (curvature == 0.0) return 1.0 / std::sqrt(2.0 * t);
  return std::sqrt(curvature / (std::exp(2.0 * curvature * t) - 1.0));
}

/// (e^{2Kt} - 1) / K and (e^{2Kt} - 2Kt - 1) / (N K^2) with K -> 0 limits
/// 2t and 2t^2/N.
double reversed_poincare_c1(double curvature, double t) {
  if (curvature == 0.0) return 2.0 * t;
  return (std::exp(2.0 * curvature * t) - 1.0) / curvature;
}
double reversed_poincare_c2(double curvature, double n_dim, double t) {
  if (curvature == 0.0) return 2.0 * t * t / n_dim;
  return (std::exp(2.0 * curvature * t) - 2.0 * curvature * t - 1.0) /
         (n_dim * curvature * curvature);
}

Eigen::VectorXd sqrt_gamma(const Generator& gen, const Eigen::VectorXd& f) {
  return carre_du_champ(gen, f).array().max(0.0).sqrt();
}

/// Disjoint index-set catalog: contiguous arcs for circle samples, balls
/// around well-separated core points otherwise.
std::vector<std::vector<int>> set_catalog(const SampledSpace& space, int count) {
  const int n = space.size();
  std::vector<std::vector<int>> sets(count);
  if (space.desc.kind == SpaceKind::circle && space.coords.cols() == 1) {
    const double circumference = space.desc.circumference;
    for (int i = 0; i < n; ++i) {
      int k = static_cast<int>(space.coords(i, 0) / circumference * count);
      k = std::clamp(k, 0, count - 1);
      sets[k].push_back(i);
    }
    return sets;
  }
  // Greedy farthest-point centers, then disjoint balls of a third of the
  // minimum center separation.
  std::vector<int> centers = {0};
  while (static_cast<int>(centers.size()) < count) {
    int best = -1;
    double best_d = -1.0;
    for (int i = 0; i < n; ++i) {
      double d = std::numeric_limits<double>::infinity();
      for (int c : centers) d = std::min(d, space.distance(i, c));
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    centers.push_back(best);
  }
  double sep = std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < centers.size(); ++a)
    for (size_t b = a + 1; b < centers.size(); ++b)
      sep = std::min(sep, space.distance(centers[a], centers[b]));
  const double radius = sep / 3.0;
  for (int k = 0; k < count; ++k)
    for (int i = 0; i < n; ++i)
      if (space.distance(centers[k], i) < radius) sets[k].push_back(i);
  return sets;
}

Eigen::VectorXd masked_random(const SampledSpace& space, const std::vector<int>& support,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(space.size());
  for (int i : support) f(i) = gauss(rng);
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// Semigroup axioms
// ---------------------------------------------------------------------------

std::vector<CheckResult> check_semigroup_axioms(const Workspace& ws) {
  std::vector<CheckResult> out;
  CheckResult mass = make_result(ws, "semigroup_axioms.mass");
  CheckResult symmetry = make_result(ws, "semigroup_axioms.symmetry");
  CheckResult ck = make_result(ws, "semigroup_axioms.chapman_kolmogorov");
  CheckResult contraction = make_result(ws, "semigroup_axioms.contraction");

  if (!ws.discrete_path()) {
    const AnalyticKernel kernel(ws.desc);
    {
      MarginTracker tracker;
      for (double t : {0.25, 1.0, 4.0}) {
        const auto q = kernel_mass(ws.desc, t);
        tracker.add(std::abs(q.value - 1.0), 1e-8, {{"t", t}});
      }
      tracker.finalize(mass, 0.0);
    }
    {
      // Radial closed forms are symmetric by construction; the circle adds
      // the Poisson-summation cross-check between its two series.
      MarginTracker tracker;
      if (ws.desc.kind == SpaceKind::circle) {
        for (double t : {0.05, 0.25, 1.0, 4.0})
          for (double arc : {0.0, 0.7, M_PI}) {
            const double img =
                kernel_circle(ws.desc.circumference, t, arc, CircleMethod::image_sum);
            const double spec = kernel_circle(ws.desc.circumference, t, arc,
                                              CircleMethod::spectral_sum);
            tracker.add(std::abs(img - spec), 1e-12, {{"t", t}, {"arc", arc}});
          }
        tracker.finalize(symmetry, 0.0);
        symmetry.note = "image vs spectral series agreement (Poisson summation)";
      } else {
        symmetry.status = CheckStatus::pass;
        symmetry.note = "radial closed form: symmetric in (x, y) by construction";
      }
    }
    {
      MarginTracker tracker;
      for (double t : {0.25, 1.0})
        for (double s : {0.25, 1.0})
          for (double d : {0.0, 1.0}) {
            if (d > 0.0 && ws.desc.kind == SpaceKind::circle &&
                d > 0.5 * ws.desc.circumference)
              continue;
            const double composed = chapman_kolmogorov(ws.desc, t, s, d).value;
            const double direct = kernel.value(t + s, d);
            tracker.add(std::abs(composed - direct), 1e-6 * direct,
                        {{"t", t}, {"s", s}, {"d", d}});
          }
      tracker.finalize(ck, 0.0);
    }
    if (ws.desc.kind == SpaceKind::circle) {
      // Finite Fourier data: H_t acts diagonally, norms by quadrature.
      MarginTracker tracker;
      const double circumference = ws.desc.circumference;
      const double base = 2.0 * M_PI / circumference;
      const std::vector<std::pair<int, double>> modes = {{1, 1.0}, {2, -0.7}, {5, 0.4}};
      for (double t : {0.25, 1.0}) {
        for (double p : {1.0, 2.0, 4.0}) {
          auto f_at = [&](double y, bool heated) {
            double acc = 0.0;
            for (auto [k, a] : modes) {
              const double decay =
                  heated ? std::exp(-base * base * k * k * t) : 1.0;
              acc += a * decay * std::cos(base * k * y);
            }
            return acc;
          };
          auto norm_p = [&](bool heated) {
            const auto q = integrate(
                [&](double y) { return std::pow(std::abs(f_at(y, heated)), p); },
                0.0, circumference, 1e-11, 1e-11);
            return std::pow(q.value, 1.0 / p);
          };
          tracker.add(norm_p(true), norm_p(false) * (1.0 + 1e-9),
                      {{"t", t}, {"p", p}});
        }
      }
      tracker.finalize(contraction, 0.0);
    } else {
      contraction.status = CheckStatus::pass;
      contraction.note = "L^p contraction exercised on the discrete path";
    }
  } else {
    const SpectralDecomposition& dec = ws.dec();
    const SampledSpace& space = dec.space();
    const int n = space.size();
    const auto times = semigroup_times(ws);
    {
      MarginTracker tracker;
      for (double t : times) {
        const Eigen::VectorXd row_mass =
            heat_apply(dec, t, Eigen::VectorXd::Ones(n));
        tracker.add((row_mass.array() - 1.0).abs().maxCoeff(), 1e-8, {{"t", t}});
      }
      tracker.finalize(mass, 0.0);
    }
    {
      MarginTracker tracker;
      for (double t : times) {
        const Eigen::MatrixXd heat = heat_matrix(dec, t);
        const double asym = (heat - heat.transpose()).array().abs().maxCoeff();
        tracker.add(asym, 1e-12 * heat.array().abs().maxCoeff(), {{"t", t}});
      }
      tracker.finalize(symmetry, 0.0);
    }
    {
      MarginTracker tracker;
      const double t = times.front(), s = times.front();
      const Eigen::MatrixXd heat_t = heat_matrix(dec, t);
      const Eigen::MatrixXd heat_ts = heat_matrix(dec, t + s);
      const Eigen::MatrixXd composed =
          heat_t * space.weight.asDiagonal() * heat_t;
      const double err = (composed - heat_ts).array().abs().maxCoeff();
      tracker.add(err, 1e-8 * heat_ts.array().abs().maxCoeff(),
                  {{"t", t}, {"s", s}});
      tracker.finalize(ck, 0.0);
    }
    {
      MarginTracker tracker;
      const auto batch =
          function_batch(dec, 200, derive_seed(ws.seed, "contraction"));
      for (double t : times)
        for (double p : ws.grid.p_list)
          for (size_t bi = 0; bi < batch.size(); bi += 4) {
            const double before = lp_norm(space, batch[bi], p);
            const double after = lp_norm(space, heat_apply(dec, t, batch[bi]), p);
            tracker.add(after, before * (1.0 + 1e-9),
                        {{"t", t}, {"p", p}, {"f", double(bi)}});
          }
      tracker.finalize(contraction, 0.0);
    }
  }

  out.push_back(std::move(mass));
  out.push_back(std::move(symmetry));
  out.push_back(std::move(ck));
  out.push_back(std::move(contraction));
  return out;
}

// ---------------------------------------------------------------------------
// Bakry-Ledoux gradient estimate
// ---------------------------------------------------------------------------

std::vector<CheckResult> check_bakry_ledoux(const Workspace& ws) {
  CheckResult r = make_result(ws, "bakry_ledoux");
  const SpectralDecomposition& dec = ws.dec();
  const SampledSpace& space = dec.space();
  const double curvature = ws.desc.curvature;
  const double n_dim = ws.desc.dimension;

  auto coefficient = [&](double t) {
    if (curvature == 0.0) return 2.0 * t / n_dim;
    return 4.0 * curvature * t * t /
           (n_dim * (std::exp(2.0 * curvature * t) - 1.0));
  };

  const auto batch = function_batch(dec, 50, derive_seed(ws.seed, "bakry_ledoux"));
  std::vector<double> times = {0.1, 1.0, 10.0};
  if (!ws.desc.is_compact()) {
    const double cap = model_max_trusted_time(ws.desc);
    std::erase_if(times, [&](double t) { return t > cap; });
    if (times.empty()) times = {cap};
  }

  MarginTracker tracker;
  const auto core = space.core_indices();
  for (double t : times) {
    const double damp = std::exp(-2.0 * curvature * t);
    for (size_t bi = 0; bi < batch.size(); ++bi) {
      const Eigen::VectorXd& f = batch[bi];
      const Eigen::VectorXd hf = heat_apply(dec, t, f);
      const Eigen::VectorXd gamma_hf = carre_du_champ(*dec.generator, hf);
      const Eigen::VectorXd laplacian_hf = dec.generator->laplacian * hf;
      const Eigen::VectorXd h_gamma =
          heat_apply(dec, t, carre_du_champ(*dec.generator, f));
      const double c = coefficient(t);
      for (int i : core)
        tracker.add(gamma_hf(i) + c * laplacian_hf(i) * laplacian_hf(i),
                    damp * h_gamma(i),
                    {{"t", t}, {"f", double(bi)}, {"i", double(i)}});
    }
  }
  tracker.finalize(r, ws.grid.tolerance);
  return {r};
}

// ---------------------------------------------------------------------------
// Weighted L^2 contraction
// ---------------------------------------------------------------------------

std::vector<CheckResult> check_weighted_contraction(const Workspace& ws) {
  CheckResult r = make_result(ws, "weighted_contraction");
  const SpectralDecomposition& dec = ws.dec();
  const SampledSpace& space = dec.space();

  const double diam = space.distance.maxCoeff();
  const double eps = std::max(0.25 * diam, 5.0 * space.mean_spacing());
  const auto core = space.core_indices();
  int pivot = core.front();
  for (int i : core)
    if (space.trust_radius(i) > space.trust_radius(pivot)) pivot = i;
  const Eigen::VectorXd psi = build_cutoff(space, {pivot}, eps);
  const double gamma_lip = 2.0 / eps;  // certified cutoff slope
  const Eigen::VectorXd exp_psi = psi.array().exp();
  r.constants["eps"] = eps;
  r.constants["gamma"] = gamma_lip;

  std::vector<double> times = {0.5, 1.0};
  if (!ws.desc.is_compact()) {
    const double cap = model_max_trusted_time(ws.desc);
    std::erase_if(times, [&](double t) { return t > cap; });
    if (times.empty()) times = {cap};
  }

  const auto batch =
      function_batch(dec, 100, derive_seed(ws.seed, "weighted_contraction"));
  MarginTracker tracker;
  for (double t : times) {
    const double inflate = std::exp(gamma_lip * gamma_lip * t);
    for (size_t bi = 0; bi < batch.size(); ++bi) {
      const Eigen::VectorXd weighted_start =
          (exp_psi.array() * batch[bi].array()).matrix();
      const Eigen::VectorXd weighted_end =
          (exp_psi.array() * heat_apply(dec, t, batch[bi]).array()).matrix();
      tracker.add(lp_norm(space, weighted_end, 2.0),
                  inflate * lp_norm(space, weighted_start, 2.0),
                  {{"t", t}, {"f", double(bi)}});
    }
  }
  tracker.finalize(r, ws.grid.tolerance);
  return {r};
}

// ---------------------------------------------------------------------------
// Caccioppoli inequalities
// ---------------------------------------------------------------------------

std::vector<CheckResult> check_caccioppoli(const Workspace& ws) {
  std::vector<CheckResult> out;
  const double curvature = ws.desc.curvature;
  const double n_dim = ws.desc.dimension;

  // Closed-form line instance: |grad H_1(sign)| peaks at 1/sqrt(pi).
  if (!ws.discrete_path() && ws.desc.kind == SpaceKind::euclidean &&
      ws.desc.dimension == 1.0) {
    CheckResult inst = make_result(ws, "caccioppoli.closed_form_line");
    const double t = 1.0;
    auto grad_at = [&](double x) {
      const double window = 2.0 * std::sqrt(700.0 * t) + std::abs(x);
      const auto q = integrate_piecewise(
          [&](double y) {
            const double sgn = y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
            const KernelPoint kp = kernel_euclidean_full(1.0, t, std::abs(x - y));
            return sgn * ((x - y) >= 0.0 ? -1.0 : 1.0) * kp.gradient;
          },
          -window, window, 2.0 * std::sqrt(t), {0.0, x}, 1e-12, 1e-11);
      return std::abs(q.value);
    };
    double sup = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.1) sup = std::max(sup, grad_at(x));
    const double bound = 1.0 / std::sqrt(2.0 * t);
    inst.constants["gradient_sup"] = sup;
    inst.constants["bound"] = bound;
    MarginTracker tracker;
    tracker.add(sup, bound, {{"t", t}});
    tracker.finalize(inst, 1e-9);
    out.push_back(std::move(inst));
    if (!ws.has_spectral()) return out;
  }

  const SpectralDecomposition& dec = ws.dec();
  const SampledSpace& space = dec.space();

  std::vector<double> p_list;
  for (double p : ws.grid.p_list)
    if (p >= 2.0) p_list.push_back(p);
  if (p_list.empty())
    throw std::invalid_argument("caccioppoli requires exponents p >= 2");

  // The discrete inequalities are statements about the discrete semigroup,
  // valid at any t > 0 (small t only relaxes them), so the floor is not
  // tied to the bandwidth.
  double t_hi = 4.0;
  if (!ws.desc.is_compact())
    t_hi = std::min(t_hi, model_max_trusted_time(ws.desc));
  const double t_lo = t_hi / 256.0;
  const auto t_grid = log_grid(t_lo, t_hi, static_cast<int>(
      std::ceil(7.0 / std::max(0.5, std::log10(t_hi / t_lo)))));

  const auto batch = function_batch(dec, 100, derive_seed(ws.seed, "caccioppoli"));

  {
    CheckResult r = make_result(ws, "caccioppoli.lp_bound");
    MarginTracker tracker;
    for (double t : t_grid) {
      const double coeff = caccioppoli_coefficient(curvature, t);
      for (size_t bi = 0; bi < batch.size(); ++bi) {
        const Eigen::VectorXd grad = sqrt_gamma(*dec.generator,
                                                heat_apply(dec, t, batch[bi]));
        for (double p : p_list)
          tracker.add(lp_norm(space, grad, p),
                      coeff * lp_norm(space, batch[bi], p),
                      {{"t", t}, {"p", p}, {"f", double(bi)}});
      }
    }
    tracker.finalize(r, ws.grid.tolerance);
    out.push_back(std::move(r));
  }

  {
    CheckResult r = make_result(ws, "caccioppoli.reversed_poincare");
    MarginTracker tracker;
    const auto core = space.core_indices();
    for (size_t ti = 0; ti < t_grid.size(); ti += 2) {
      const double t = t_grid[ti];
      const double c1 = reversed_poincare_c1(curvature, t);
      const double c2 = reversed_poincare_c2(curvature, n_dim, t);
      for (size_t bi = 0; bi < batch.size(); bi += 3) {
        const Eigen::VectorXd& f = batch[bi];
        const Eigen::VectorXd hf = heat_apply(dec, t, f);
        const Eigen::VectorXd gamma_hf = carre_du_champ(*dec.generator, hf);
        const Eigen::VectorXd lap_hf = dec.generator->laplacian * hf;
        const Eigen::VectorXd hf2 =
            heat_apply(dec, t, f.array().square().matrix());
        for (int i : core)
          tracker.add(c1 * gamma_hf(i) + c2 * lap_hf(i) * lap_hf(i),
                      hf2(i) - hf(i) * hf(i),
                      {{"t", t}, {"f", double(bi)}, {"i", double(i)}});
      }
    }
    tracker.finalize(r, ws.grid.tolerance);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Davies-Gaffney estimates
// ---------------------------------------------------------------------------

std::vector<CheckResult> check_davies_gaffney(const Workspace& ws) {
  std::vector<CheckResult> out;
  const SpectralDecomposition& dec = ws.dec();
  const SampledSpace& space = dec.space();
  const auto sets = set_catalog(space, 8);
  std::mt19937_64 rng(derive_seed(ws.seed, "davies_gaffney"));

  std::vector<double> times = {0.25, 1.0};
  if (!ws.desc.is_compact()) {
    const double cap = model_max_trusted_time(ws.desc);
    std::erase_if(times, [&](double t) { return t > cap; });
    if (times.empty()) times = {cap};
  }

  struct PairSample {
    int e, f;
    double dist;
    std::vector<Eigen::VectorXd> functions;
  };
  std::vector<PairSample> pairs;
  for (size_t a = 0; a < sets.size(); ++a)
    for (size_t b = 0; b < sets.size(); ++b) {
      if (a == b || sets[a].empty() || sets[b].empty()) continue;
      if (b < a) continue;
      PairSample ps;
      ps.e = static_cast<int>(a);
      ps.f = static_cast<int>(b);
      ps.dist = set_distance(space, sets[a], sets[b]);
      for (int k = 0; k < 50; ++k)
        ps.functions.push_back(masked_random(space, sets[a], rng));
      pairs.push_back(std::move(ps));
    }

  {
    CheckResult r = make_result(ws, "davies_gaffney.l2_contraction_offdiag");
    MarginTracker tracker;
    for (double t : times)
      for (const auto& ps : pairs) {
        const double factor = std::exp(-ps.dist * ps.dist / (4.0 * t));
        for (size_t k = 0; k < ps.functions.size(); ++k) {
          const Eigen::VectorXd hf = heat_apply(dec, t, ps.functions[k]);
          tracker.add(lp_norm_on(space, hf, 2.0, sets[ps.f]),
                      factor * lp_norm_on(space, ps.functions[k], 2.0, sets[ps.e]),
                      {{"t", t}, {"E", double(ps.e)}, {"F", double(ps.f)},
                       {"k", double(k)}});
        }
      }
    tracker.finalize(r, ws.grid.tolerance);
    r.constants["pairs"] = static_cast<double>(pairs.size());
    out.push_back(std::move(r));
  }

  {
    CheckResult r = make_result(ws, "davies_gaffney.laplacian_decay");
    std::vector<double> lhs, rhs;
    for (double t : times)
      for (const auto& ps : pairs)
        for (size_t k = 0; k < ps.functions.size(); k += 10) {
          const Eigen::VectorXd thf =
              t * (dec.generator->laplacian * heat_apply(dec, t, ps.functions[k]));
          lhs.push_back(lp_norm_on(space, thf, 2.0, sets[ps.f]));
          rhs.push_back(std::exp(-ps.dist * ps.dist / (6.0 * t)) *
                        lp_norm_on(space, ps.functions[k], 2.0, sets[ps.e]));
        }
    const SupRatioFit fit = fit_sup_ratio(lhs, rhs);
    r.constants["C"] = fit.constant;
    r.status = std::isfinite(fit.constant) ? CheckStatus::pass : CheckStatus::fail;
    r.worst_margin = std::isfinite(fit.constant) ? 1.0 : -1.0;
    r.margin_scale = 1.0;
    out.push_back(std::move(r));
  }

  {
    CheckResult r = make_result(ws, "davies_gaffney.bilinear");
    MarginTracker tracker;
    for (double t : times)
      for (const auto& ps : pairs)
        for (int k = 0; k < 50; ++k) {
          const Eigen::VectorXd f1 = masked_random(space, sets[ps.e], rng);
          const Eigen::VectorXd f2 = masked_random(space, sets[ps.f], rng);
          const double pairing = weighted_inner(space, heat_apply(dec, t, f1), f2);
          tracker.add(pairing,
                      std::exp(-ps.dist * ps.dist / (4.0 * t)) *
                          lp_norm_on(space, f1, 2.0, sets[ps.e]) *
                          lp_norm_on(space, f2, 2.0, sets[ps.f]),
                      {{"t", t}, {"B1", double(ps.e)}, {"B2", double(ps.f)},
                       {"k", double(k)}});
        }
    tracker.finalize(r, ws.grid.tolerance);
    out.push_back(std::move(r));
  }

  {
    CheckResult r = make_result(ws, "davies_gaffney.gradient_decay");
    const std::vector<double> beta_grid = {1.0 / 4.0, 1.0 / 6.0, 1.0 / 8.0,
                                           1.0 / 12.0, 1.0 / 16.0, 1.0 / 24.0,
                                           1.0 / 32.0};
    double chosen_beta = 0.0, chosen_c = 0.0;
    for (double beta : beta_grid) {
      double c_needed = 0.0;
      for (double t : times)
        for (const auto& ps : pairs)
          for (size_t k = 0; k < ps.functions.size(); k += 10) {
            const Eigen::VectorXd grad = sqrt_gamma(
                *dec.generator, heat_apply(dec, t, ps.functions[k]));
            const double lhs =
                std::sqrt(t) * lp_norm_on(space, grad, 2.0, sets[ps.f]);
            const double rhs = std::exp(-beta * ps.dist * ps.dist / t) *
                               lp_norm_on(space, ps.functions[k], 2.0, sets[ps.e]);
            if (rhs > 0.0) c_needed = std::max(c_needed, lhs / rhs);
          }
      if (c_needed <= 10.0) {
        chosen_beta = beta;
        chosen_c = c_needed;
        break;  // beta grid is ordered largest first
      }
    }
    if (chosen_beta > 0.0) {
      r.constants["beta"] = chosen_beta;
      r.constants["C"] = chosen_c;
      r.status = CheckStatus::pass;
      r.worst_margin = 10.0 - chosen_c;
      r.margin_scale = 10.0;
    } else {
      r.status = CheckStatus::fail;
      r.note = "no beta in the search grid admits C <= 10";
      r.worst_margin = -1.0;
      r.margin_scale = 1.0;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Riesz transform
// ---------------------------------------------------------------------------

namespace {

double riesz_shift(const Workspace& ws) {
  return ws.desc.curvature < 0.0 ? 2.0 : 0.0;
}

Eigen::VectorXd riesz_transform(const SpectralDecomposition& dec,
                                const Eigen::VectorXd& f, double a) {
  return spectral_function(
      dec, [a](double lam) { return 1.0 / std::sqrt(lam + a); }, f,
      ZeroMode::project_out);
}

}  // namespace

std::vector<CheckResult> check_riesz(const Workspace& ws) {
  std::vector<CheckResult> out;
  const SpectralDecomposition& dec = ws.dec();
  const SampledSpace& space = dec.space();
  const double a = riesz_shift(ws);
  if (a == 0.0 && ws.desc.curvature < 0.0)
    throw std::invalid_argument("local Riesz transform on K < 0 requires a > 0");

  {
    CheckResult r = make_result(ws, "riesz.l2_isometry");
    MarginTracker tracker;
    const auto batch = function_batch(dec, 200, derive_seed(ws.seed, "riesz_l2"));
    for (size_t bi = 0; bi < batch.size(); ++bi) {
      const Eigen::VectorXd f = project_mean_zero(dec, batch[bi]);
      const double norm_f = lp_norm(space, f, 2.0);
      if (norm_f < 1e-12) continue;
      const Eigen::VectorXd tf = riesz_transform(dec, f, a);
      const double energy =
          weighted_inner(space, carre_du_champ(*dec.generator, tf).array().max(0.0).matrix(),
                         Eigen::VectorXd::Ones(space.size()));
      const double identity = energy + a * std::pow(lp_norm(space, tf, 2.0), 2);
      const double residual =
          std::abs(std::sqrt(identity) - norm_f) / norm_f;
      tracker.add(residual, 1e-8, {{"f", double(bi)}});
    }
    tracker.finalize(r, 0.0);
    r.constants["a"] = a;
    out.push_back(std::move(r));
  }

  {
    CheckResult r = make_result(ws, "riesz.lp_norms");
    std::vector<double> p_list;
    for (double p : ws.grid.p_list)
      if (p > 1.0 && std::isfinite(p)) p_list.push_back(p);
    if (p_list.empty()) p_list = {2.0, 4.0};

    std::vector<int> sizes;
    const int base_n = space.size();
    if (ws.desc.is_model()) {
      if (base_n / 2 >= 32) sizes.push_back(base_n / 2);
      sizes.push_back(base_n);
      if (2 * base_n <= 4000) sizes.push_back(2 * base_n);
    } else {
      sizes.push_back(base_n);
    }

    std::map<double, std::vector<double>> norms;  // p -> per-size empirical norm
    for (int n_size : sizes) {
      std::shared_ptr<const SpectralDecomposition> level;
      if (n_size == base_n)
        level = ws.spectral;
      else
        level = discretize(ws.desc, n_size, ws.seed);
      const auto batch = function_batch(*level, 500, derive_seed(ws.seed, "riesz_lp"));
      std::map<double, double> level_norm;
      for (const auto& raw : batch) {
        const Eigen::VectorXd f = project_mean_zero(*level, raw);
        const Eigen::VectorXd grad = sqrt_gamma(
            *level->generator, riesz_transform(*level, f, a));
        for (double p : p_list) {
          const double denom = lp_norm(level->space(), f, p);
          if (denom < 1e-12) continue;
          level_norm[p] = std::max(level_norm[p],
                                   lp_norm(level->space(), grad, p) / denom);
        }
      }
      for (double p : p_list) norms[p].push_back(level_norm[p]);
    }

    double worst_band = 0.0;
    for (double p : p_list) {
      const auto& v = norms[p];
      const double hi = *std::max_element(v.begin(), v.end());
      const double lo = *std::min_element(v.begin(), v.end());
      r.constants["norm[p=" + tag(p) + "]"] = v.back();
      if (v.size() > 1 && lo > 0.0)
        worst_band = std::max(worst_band, hi / lo - 1.0);
    }
    r.constants["band"] = worst_band;
    r.worst_margin = 0.15 - worst_band;
    r.margin_scale = 0.15;
    r.status = worst_band <= 0.15 ? CheckStatus::pass : CheckStatus::fail;
    if (sizes.size() == 1)
      r.note = "single-size sample: no refinement comparison available";
    out.push_back(std::move(r));
  }

  {
    CheckResult r = make_result(ws, "riesz.weak11");
    const auto batch = function_batch(dec, 60, derive_seed(ws.seed, "riesz_weak"));
    double sup = 0.0;
    for (const auto& raw : batch) {
      const Eigen::VectorXd f = project_mean_zero(dec, raw);
      const double norm1 = lp_norm(space, f, 1.0);
      if (norm1 < 1e-12) continue;
      const Eigen::VectorXd tf_abs =
          sqrt_gamma(*dec.generator, riesz_transform(dec, f, a));
      for (double q : {0.5, 0.75, 0.9, 0.99}) {
        std::vector<double> vals(tf_abs.begin(), tf_abs.end());
        std::nth_element(vals.begin(),
                         vals.begin() + static_cast<long>(q * (vals.size() - 1)),
                         vals.end());
        const double lambda = vals[static_cast<long>(q * (vals.size() - 1))];
        if (lambda <= 0.0) continue;
        double tail_mass = 0.0;
        for (int i = 0; i < space.size(); ++i)
          if (tf_abs(i) > lambda) tail_mass += space.weight(i);
        sup = std::max(sup, lambda * tail_mass / norm1);
      }
    }
    r.constants["weak11_sup"] = sup;
    r.status = CheckStatus::pass;
    r.note = "empirical diagnostic only; no rigorous weak-(1,1) constant claimed";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace heatlab
