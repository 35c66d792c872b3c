#ifndef VOLCOL_REPORT_HPP
#define VOLCOL_REPORT_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "volcol/linalg.hpp"

namespace volcol {

/// Quantities of the Frobenius bound ||X - X_C^Pi X||^2 <= (r+1)/(r+1-k) ||X - X_(k)||^2
/// for one chosen subset.
struct SelectionReport {
  std::string method;
  std::optional<std::uint64_t> seed;
  Index r = 0;
  Index k = 0;
  ColumnSubset chosen;
  double residual_trace = 0;
  double rank_k_error = 0;
  double achieved_ratio = 0;  // +inf when the rank-k error is zero but the residual is not
  double bound = 0;
  bool bound_satisfied = false;
  std::optional<double> wall_time_ms;
};

namespace tol {
inline constexpr double kZeroEnergy = 1e-12;  // relative to ||X||_F^2
inline constexpr double kBoundSlack = 1e-8;   // relative
}  // namespace tol

template <typename Derived>
SelectionReport bound_report(const Eigen::MatrixBase<Derived>& X, const ColumnSubset& C, Index k) {
  require_finite(X);
  C.check_bounds(X.cols());
  if (k < 0 || k > C.size()) throw InvalidArgumentError("need 0 <= k <= |C|");
  const double energy = static_cast<double>(X.squaredNorm());
  const double zero = tol::kZeroEnergy * energy;

  SelectionReport rep;
  rep.r = C.size();
  rep.k = k;
  rep.chosen = C;
  rep.residual_trace = static_cast<double>(residual_trace(X, C));
  rep.rank_k_error = static_cast<double>(rank_k_error(X, k));
  rep.bound = double(rep.r + 1) / double(rep.r + 1 - k);
  if (rep.rank_k_error > zero) {
    rep.achieved_ratio = rep.residual_trace / rep.rank_k_error;
  } else {
    rep.achieved_ratio = rep.residual_trace <= zero ? 1.0 : std::numeric_limits<double>::infinity();
  }
  rep.bound_satisfied = rep.residual_trace <= rep.bound * rep.rank_k_error * (1 + tol::kBoundSlack) + zero;
  return rep;
}

/// Fixed key order: method, seed (randomised methods only), r, k, chosen,
/// residual_trace, rank_k_error, achieved_ratio (null when infinite), bound,
/// bound_satisfied, wall_time_ms (only when timing was requested).
nlohmann::ordered_json to_json(const SelectionReport& rep);

/// Schema violations of a report object; empty when valid. Unknown keys are
/// violations.
std::vector<std::string> validate_report_json(const nlohmann::ordered_json& j);

/// Parses a report, throwing ParseError on any schema violation.
SelectionReport report_from_json(const nlohmann::ordered_json& j);

}  // namespace volcol

#endif  // VOLCOL_REPORT_HPP
