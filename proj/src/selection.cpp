#include "sparsereg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace sparsereg {

double ric_penalty(Index p, Index k, double sigma2) {
  if (k < 0 || k > p) throw std::invalid_argument("ric_penalty: need 0 <= k <= p");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("ric_penalty: sigma2 must be positive");
  double sum = 0.0;
  for (Index q = 1; q <= k; ++q) {
    sum += 2.0 * std::log(static_cast<double>(p) / static_cast<double>(q));
  }
  return sigma2 * sum;
}

SubsetModel score_support(const Vector& y, const Matrix& X, const Support& support,
                          double sigma2) {
  const auto fit = ls_refit(y, X, std::span<const Index>(support));
  SubsetModel model;
  model.support = support;
  model.refit_coefficients = fit.coefficients;
  model.rss = fit.rss;
  model.penalty = ric_penalty(X.cols(), static_cast<Index>(support.size()), sigma2);
  model.criterion = model.rss + model.penalty;
  return model;
}

SelectionResult select_on_path(const LassoPath& path, const Vector& y, const Matrix& X,
                               double sigma2) {
  if (path.steps.empty()) throw std::invalid_argument("select_on_path: empty path");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("select_on_path: sigma2 must be positive");

  SelectionResult result;
  std::set<Support> seen;
  bool have_best = false;
  for (const auto& step : path.steps) {
    Support support = step.support;
    std::sort(support.begin(), support.end());
    if (!seen.insert(support).second) continue;
    try {
      SubsetModel model = score_support(y, X, support, sigma2);
      const bool better =
          !have_best || model.criterion < result.best.criterion ||
          (model.criterion == result.best.criterion &&
           model.support.size() < result.best.support.size());
      if (better) {
        result.best = model;
        have_best = true;
      }
      result.candidates.push_back(std::move(model));
    } catch (const RankDeficientError& e) {
      result.warnings.emplace_back(e.what());
    }
  }
  if (!have_best) throw std::runtime_error("select_on_path: no scorable support on the path");
  return result;
}

}  // namespace sparsereg
