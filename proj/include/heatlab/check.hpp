#pragma once

#include <map>
#include <string>
#include <vector>

namespace heatlab {

enum class CheckStatus { pass, fail, hypothesis_not_met, untrusted, error };

std::string to_string(CheckStatus status);

/// A grid-sweep table attached to a result, written out as CSV by the runner.
struct SweepTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// One checker outcome: signed worst margin (min over the grid of RHS - LHS),
/// fitted constants, and the grid coordinates of the worst point.
struct CheckResult {
  std::string name;
  std::string space_id;
  std::string grid_summary;
  CheckStatus status = CheckStatus::pass;
  double worst_margin = 0.0;
  double margin_scale = 0.0;  // max(|LHS|, |RHS|) at the witness
  std::map<std::string, double> constants;
  std::map<std::string, double> witness;
  std::string note;
  std::vector<SweepTable> tables;
};

/// Parameter grid shared by the checkers.
struct GridSpec {
  std::vector<double> t_grid;
  std::vector<double> u_grid;      // d / sqrt(t) ratios for kernel sweeps
  std::vector<double> eps_list;    // Gaussian-bound slack parameters
  std::vector<double> p_list;      // Lebesgue exponents
  double tolerance = 1e-9;         // relative slack on margins
  int refinement_factor = 2;       // grid-density multiplier for drift checks

  void validate() const;  // throws on non-increasing t_grid or eps outside (0, 4)
  std::string summary() const;

  static GridSpec analytic_default();
  static GridSpec discrete_default();
};

/// Log-spaced grid with `per_decade` points per decade, endpoints included.
std::vector<double> log_grid(double lo, double hi, int per_decade);

struct SupRatioFit {
  double constant = 0.0;
  int witness_index = -1;
};

/// sup(lhs/rhs) over the grid and its argmax; realizes every "there exists
/// C" clause.  Throws when rhs is not strictly positive somewhere.
SupRatioFit fit_sup_ratio(const std::vector<double>& lhs,
                          const std::vector<double>& rhs);

/// Accumulates margins RHS - LHS over a sweep and resolves pass/fail
/// according to: fail iff worst margin < -tolerance * scale(witness).
class MarginTracker {
 public:
  /// scale_override > 0 replaces the default witness scale max(|lhs|, |rhs|)
  /// (used where the bound itself degenerates to zero).
  void add(double lhs, double rhs, const std::map<std::string, double>& coords,
           double scale_override = 0.0);
  bool empty() const { return count_ == 0; }
  double worst_margin() const { return worst_margin_; }
  double scale() const { return scale_; }
  const std::map<std::string, double>& witness() const { return witness_; }
  /// Fills margin fields of `result` and sets pass/fail from `tolerance`.
  void finalize(CheckResult& result, double tolerance) const;

 private:
  long count_ = 0;
  double worst_margin_ = 0.0;
  double scale_ = 0.0;
  std::map<std::string, double> witness_;
};

}  // namespace heatlab
