#pragma once

#include <string>
#include <vector>

#include "sparsereg/solvers.hpp"

namespace sparsereg {

/// sigma^2 * sum_{q=1..k} 2 log(p / q). Zero for k = 0.
double ric_penalty(Index p, Index k, double sigma2);

/// A support scored by least-squares refit RSS plus the modified RIC penalty.
struct SubsetModel {
  Support support;
  CoefficientVector<double> refit_coefficients;
  double rss = 0;
  double penalty = 0;
  double criterion = 0;  // rss + penalty
};

SubsetModel score_support(const Vector& y, const Matrix& X, const Support& support,
                          double sigma2);

struct SelectionResult {
  SubsetModel best;
  std::vector<SubsetModel> candidates;  // one per distinct support, path order
  std::vector<std::string> warnings;    // skipped rank-deficient supports
};

/// Scores every distinct support along the path and keeps the smallest
/// criterion, preferring the smaller support on ties.
SelectionResult select_on_path(const LassoPath& path, const Vector& y, const Matrix& X,
                               double sigma2);

}  // namespace sparsereg
