#include "heatlab/check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace heatlab {

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::hypothesis_not_met: return "hypothesis_not_met";
    case CheckStatus::untrusted: return "untrusted";
    case CheckStatus::error: return "error";
  }
  return "unknown";
}

void GridSpec::validate() const {
  for (size_t k = 1; k < t_grid.size(); ++k)
    if (t_grid[k] <= t_grid[k - 1])
      throw std::invalid_argument("t_grid must be strictly increasing");
  for (double t : t_grid)
    if (t <= 0.0) throw std::invalid_argument("t_grid must be positive");
  for (double e : eps_list)
    if (!(e > 0.0 && e < 4.0))
      throw std::invalid_argument("eps_list entries must lie in (0, 4)");
  for (double p : p_list)
    if (p < 1.0) throw std::invalid_argument("p_list entries must be >= 1");
}

std::string GridSpec::summary() const {
  std::ostringstream os;
  os << "t[" << (t_grid.empty() ? 0.0 : t_grid.front()) << ","
     << (t_grid.empty() ? 0.0 : t_grid.back()) << "]x" << t_grid.size()
     << " u x" << u_grid.size() << " eps x" << eps_list.size();
  return os.str();
}

GridSpec GridSpec::analytic_default() {
  GridSpec g;
  g.t_grid = log_grid(1.0 / 16.0, 4.0, 16);
  for (int k = 0; k <= 24; ++k) g.u_grid.push_back(0.25 * k);
  g.eps_list = {0.1, 0.5, 1.0};
  g.p_list = {1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()};
  g.tolerance = 1e-9;
  return g;
}

GridSpec GridSpec::discrete_default() {
  GridSpec g = analytic_default();
  g.tolerance = 5e-2;
  return g;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("log_grid needs 0 < lo < hi");
  const double decades = std::log10(hi / lo);
  const int steps = std::max(1, static_cast<int>(std::ceil(decades * per_decade)));
  std::vector<double> out(steps + 1);
  for (int k = 0; k <= steps; ++k)
    out[k] = lo * std::pow(hi / lo, static_cast<double>(k) / steps);
  out.back() = hi;
  return out;
}

SupRatioFit fit_sup_ratio(const std::vector<double>& lhs,
                          const std::vector<double>& rhs) {
  if (lhs.size() != rhs.size())
    throw std::invalid_argument("fit_sup_ratio: field size mismatch");
  if (lhs.empty()) throw std::invalid_argument("fit_sup_ratio: empty grid");
  SupRatioFit fit;
  fit.constant = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < lhs.size(); ++k) {
    if (!(rhs[k] > 0.0))
      throw std::invalid_argument("fit_sup_ratio: rhs must be strictly positive");
    const double ratio = lhs[k] / rhs[k];
    if (ratio > fit.constant) {
      fit.constant = ratio;
      fit.witness_index = static_cast<int>(k);
    }
  }
  return fit;
}

void MarginTracker::add(double lhs, double rhs,
                        const std::map<std::string, double>& coords,
                        double scale_override) {
  const double margin = rhs - lhs;
  const double scale = scale_override > 0.0
                           ? scale_override
                           : std::max(std::abs(lhs), std::abs(rhs));
  // rank by margin relative to its scale so degenerate-scale cells do
  // not mask genuine violations elsewhere
  if (count_ == 0 ||
      margin / std::max(scale, 1e-300) <
          worst_margin_ / std::max(scale_, 1e-300)) {
    worst_margin_ = margin;
    scale_ = scale;
    witness_ = coords;
  }
  ++count_;
}

void MarginTracker::finalize(CheckResult& result, double tolerance) const {
  result.worst_margin = worst_margin_;
  result.margin_scale = scale_;
  result.witness = witness_;
  result.status = worst_margin_ < -tolerance * std::max(scale_, 1e-300)
                      ? CheckStatus::fail
                      : CheckStatus::pass;
}

}  // namespace heatlab
