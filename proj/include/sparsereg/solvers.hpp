#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sparsereg/estimators.hpp"

namespace sparsereg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One breakpoint of a solution path. For the lasso, `penalty` is lambda in
/// ||y - X b||^2 + lambda ||b||_1 measured on unit-norm columns, so active
/// correlations sit at penalty / 2. Forward stepwise steps carry penalty 0.
struct PathStep {
  Support support;
  CoefficientVector<double> coefficients;  // original column scale
  double penalty = 0;
  double residual_norm2 = 0;  // ||y - X b||^2
};

enum class PathKind { lars_lasso, forward_stepwise };

enum class Termination {
  max_steps,
  residual_below,
  path_end,    // lasso reached penalty 0
  saturated,   // no further column can enter (rank exhausted)
  no_descent,  // stepwise: every remaining column is orthogonal to the residual
};

std::string to_string(PathKind kind);
std::string to_string(Termination reason);

struct LassoPath {
  PathKind kind = PathKind::lars_lasso;
  std::vector<PathStep> steps;
  std::string design_id;
  Termination termination = Termination::path_end;
};

/// Empty rule runs the full path; setting both stops at whichever fires first.
struct StopRule {
  std::optional<int> max_steps;
  std::optional<double> residual_below;  // stop once ||r||_2 < value

  static StopRule full_path() { return {}; }
  static StopRule steps(int n) { return {n, std::nullopt}; }
  static StopRule residual(double eps) { return {std::nullopt, eps}; }
};

/// Short content hash of a design matrix, used to tie a path to its data.
std::string design_fingerprint(const Matrix& X);

/// LARS with the lasso modification: equiangular moves, a drop step when an
/// active coefficient crosses zero. Columns are scaled to unit norm
/// internally; coefficients are reported on the original scale. Ties in the
/// entry event go to the lowest column index. Throws std::invalid_argument
/// for a zero column.
LassoPath lars_lasso_path(const Vector& y, const Matrix& X, const StopRule& stop);

/// Greedy forward selection: each step adds the column with the largest
/// partial correlation with the residual (equivalently the largest drop in
/// residual sum of squares), then refits by least squares.
LassoPath forward_stepwise(const Vector& y, const Matrix& X, const StopRule& stop);

/// Largest violation of the lasso optimality conditions at a path step:
/// |x_j' r| = penalty / 2 with matching sign on the support, <= penalty / 2
/// elsewhere (unit-norm columns).
double lasso_kkt_violation(const Vector& y, const Matrix& X, const PathStep& step);

}  // namespace sparsereg
