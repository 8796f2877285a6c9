#include "sparsereg/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace sparsereg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Squared distance of a unit column from the active span below which it is
// treated as lying in that span.
constexpr double kCollinear = 1e-10;

Vector column_norms(const Matrix& X) {
  Vector norms = X.colwise().norm().transpose();
  for (Index j = 0; j < norms.size(); ++j) {
    if (!(norms[j] > 0.0)) {
      throw std::invalid_argument("zero-variance column " + std::to_string(j));
    }
  }
  return norms;
}

void check_shapes(const Vector& y, const Matrix& X) {
  if (y.size() != X.rows()) {
    throw std::invalid_argument("y has " + std::to_string(y.size()) +
                                " rows but X has " + std::to_string(X.rows()));
  }
}

bool stop_now(const LassoPath& path, const StopRule& stop, Termination& reason) {
  const auto& last = path.steps.back();
  if (stop.residual_below && std::sqrt(last.residual_norm2) < *stop.residual_below) {
    reason = Termination::residual_below;
    return true;
  }
  if (stop.max_steps && static_cast<int>(path.steps.size()) - 1 >= *stop.max_steps) {
    reason = Termination::max_steps;
    return true;
  }
  return false;
}

}  // namespace

std::string to_string(PathKind kind) {
  return kind == PathKind::lars_lasso ? "lasso" : "stepwise";
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::max_steps: return "max_steps";
    case Termination::residual_below: return "residual_below";
    case Termination::path_end: return "path_end";
    case Termination::saturated: return "saturated";
    case Termination::no_descent: return "no_descent";
  }
  return "unknown";
}

std::string design_fingerprint(const Matrix& X) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const Index dims[2] = {X.rows(), X.cols()};
  mix(dims, sizeof(dims));
  mix(X.data(), sizeof(double) * static_cast<std::size_t>(X.size()));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

LassoPath lars_lasso_path(const Vector& y, const Matrix& X, const StopRule& stop) {
  check_shapes(y, X);
  const Index n = X.rows();
  const Index p = X.cols();
  const Vector norms = column_norms(X);
  const Matrix Xs = X * norms.cwiseInverse().asDiagonal();

  LassoPath path;
  path.kind = PathKind::lars_lasso;
  path.design_id = design_fingerprint(X);

  Vector beta = Vector::Zero(p);  // unit-norm scale
  std::vector<Index> active;
  std::vector<double> sign(static_cast<std::size_t>(p), 0.0);
  std::vector<char> in_active(static_cast<std::size_t>(p), 0);
  std::vector<char> blocked(static_cast<std::size_t>(p), 0);
  Vector r = y;
  Vector c = Xs.transpose() * r;
  double mu = c.cwiseAbs().maxCoeff();
  const double mu0 = mu;
  const double t_tie = 1e-12 * std::max(mu0, 1e-300);
  // Dropped through a zero-length move; may not re-enter until the path moves.
  std::vector<char> zero_dropped(static_cast<std::size_t>(p), 0);
  long iterations = 0;
  const long max_iterations = 50L * (n + p) + 1000;

  auto record = [&] {
    PathStep step;
    step.coefficients = CoefficientVector<double>(beta.cwiseQuotient(norms));
    step.support = step.coefficients.support();
    step.penalty = 2.0 * mu;
    step.residual_norm2 = r.squaredNorm();
    path.steps.push_back(std::move(step));
  };
  record();
  if (mu == 0.0) {
    path.termination = Termination::path_end;
    return path;
  }
  if (stop_now(path, stop, path.termination)) return path;

  Matrix XA;
  Eigen::LDLT<Matrix> gram;
  auto refactor = [&] {
    XA = Xs(Eigen::all, active);
    gram.compute(XA.transpose() * XA);
  };
  // Squared distance of unit column j from span(active), via the Gram system.
  auto distance_to_span = [&](Index j) {
    if (active.empty()) return 1.0;
    const Vector g = XA.transpose() * Xs.col(j);
    return 1.0 - g.dot(gram.solve(g));
  };

  while (true) {
    if (active.empty()) {
      Index best = -1;
      for (Index j = 0; j < p; ++j) {
        if (blocked[j]) continue;
        if (best < 0 || std::abs(c[j]) > std::abs(c[best]) + t_tie) best = j;
      }
      if (best < 0) {
        path.termination = Termination::saturated;
        break;
      }
      // Everything dropped out: slide the penalty down to the next entry.
      mu = std::min(mu, std::abs(c[best]));
      active.push_back(best);
      in_active[best] = 1;
      sign[best] = c[best] >= 0.0 ? 1.0 : -1.0;
    }
    refactor();
    Vector s_active(static_cast<Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) s_active[k] = sign[active[k]];
    const Vector d = gram.solve(s_active);
    const Vector u = XA * d;
    const Vector a = Xs.transpose() * u;

    // Next entry event; a collinear winner is blocked and the search repeats.
    Index j_enter = -1;
    double t_enter = kInf;
    double enter_sign = 0.0;
    while (true) {
      j_enter = -1;
      t_enter = kInf;
      for (Index j = 0; j < p; ++j) {
        if (in_active[j] || blocked[j]) continue;
        for (const double sigma : {1.0, -1.0}) {
          const double denom = 1.0 - sigma * a[j];
          if (denom <= 1e-12) continue;
          double t = (mu - sigma * c[j]) / denom;
          if (zero_dropped[j] && t <= t_tie) continue;
          t = std::max(t, 0.0);
          if (t < t_enter - t_tie) {
            t_enter = t;
            j_enter = j;
            enter_sign = sigma;
          }
        }
      }
      if (j_enter < 0 || t_enter >= mu) break;
      if (distance_to_span(j_enter) > kCollinear) break;
      blocked[j_enter] = 1;
    }

    Index drop_pos = -1;
    double t_drop = kInf;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const Index j = active[k];
      const double dk = d[static_cast<Index>(k)];
      double t = kInf;
      if (beta[j] != 0.0) {
        if (beta[j] * dk < 0.0) t = -beta[j] / dk;
      } else if (sign[j] * dk < 0.0) {
        t = 0.0;  // would leave with the wrong sign
      }
      if (t < t_drop - t_tie) {
        t_drop = t;
        drop_pos = static_cast<Index>(k);
      }
    }

    const double mu_before = mu;
    const double t = std::min({t_enter, t_drop, mu_before});
    for (std::size_t k = 0; k < active.size(); ++k) {
      beta[active[k]] += t * d[static_cast<Index>(k)];
    }
    mu -= t;
    if (t > t_tie) std::fill(zero_dropped.begin(), zero_dropped.end(), 0);

    bool end = false;
    if (drop_pos >= 0 && t_drop <= t_enter && t_drop < mu_before) {
      const Index j = active[static_cast<std::size_t>(drop_pos)];
      beta[j] = 0.0;
      in_active[j] = 0;
      sign[j] = 0.0;
      active.erase(active.begin() + drop_pos);
      std::fill(blocked.begin(), blocked.end(), 0);
      if (t <= t_tie) zero_dropped[j] = 1;
    } else if (j_enter >= 0 && t_enter < mu_before) {
      active.push_back(j_enter);
      in_active[j_enter] = 1;
      sign[j_enter] = enter_sign;
    } else {
      mu = 0.0;
      end = true;
    }

    r = y - Xs * beta;
    c = Xs.transpose() * r;
    if (t > 0.0 || end) {
      record();
      if (stop_now(path, stop, path.termination)) break;
      if (end) {
        path.termination = Termination::path_end;
        break;
      }
    }
    if (++iterations > max_iterations) {
      path.termination = Termination::saturated;
      break;
    }
  }
  return path;
}

LassoPath forward_stepwise(const Vector& y, const Matrix& X, const StopRule& stop) {
  check_shapes(y, X);
  const Index n = X.rows();
  const Index p = X.cols();
  column_norms(X);  // rejects zero columns

  LassoPath path;
  path.kind = PathKind::forward_stepwise;
  path.design_id = design_fingerprint(X);

  Support selected;
  std::vector<char> taken(static_cast<std::size_t>(p), 0);
  Matrix Q(n, 0);  // orthonormal basis of the selected columns
  Vector r = y;
  Vector corr = X.transpose() * r;
  // ||x_j||^2 minus its projection onto span(Q)
  Vector free_norm2 = X.colwise().squaredNorm().transpose();
  const Vector total_norm2 = free_norm2;

  auto record = [&](const RefitResult<double>& fit) {
    PathStep step;
    step.coefficients = fit.coefficients;
    step.support = selected;
    std::sort(step.support.begin(), step.support.end());
    step.residual_norm2 = fit.rss;
    path.steps.push_back(std::move(step));
  };
  record(RefitResult<double>{CoefficientVector<double>(p), y, y.squaredNorm()});
  if (stop_now(path, stop, path.termination)) return path;

  const double y_scale = std::max(y.squaredNorm(), 1e-300);
  while (true) {
    if (static_cast<Index>(selected.size()) >= std::min(n, p)) {
      path.termination = Termination::saturated;
      break;
    }
    Index best = -1;
    double best_score = 0.0;
    for (Index j = 0; j < p; ++j) {
      if (taken[j] || free_norm2[j] <= kCollinear * total_norm2[j]) continue;
      const double score = corr[j] * corr[j] / free_norm2[j];
      if (best < 0 || score > best_score * (1.0 + 1e-12)) {
        best = j;
        best_score = score;
      }
    }
    if (best < 0) {
      path.termination = Termination::saturated;
      break;
    }
    if (best_score <= 1e-28 * y_scale) {
      path.termination = Termination::no_descent;
      break;
    }

    Vector q = X.col(best);
    for (int pass = 0; pass < 2; ++pass) q -= Q * (Q.transpose() * q);
    q.normalize();
    Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
    Q.col(Q.cols() - 1) = q;
    const Vector qx = X.transpose() * q;
    const double qr = q.dot(r);
    r -= qr * q;
    corr -= qr * qx;
    free_norm2 -= qx.cwiseAbs2();
    taken[best] = 1;
    selected.push_back(best);

    record(ls_refit(y, X, std::span<const Index>(selected)));
    if (stop_now(path, stop, path.termination)) break;
  }
  return path;
}

double lasso_kkt_violation(const Vector& y, const Matrix& X, const PathStep& step) {
  check_shapes(y, X);
  const Vector norms = column_norms(X);
  const Vector& b = step.coefficients.values();
  const Vector r = y - X * b;
  const Vector c = (X.transpose() * r).cwiseQuotient(norms);
  const double half = step.penalty / 2.0;
  double worst = 0.0;
  for (Index j = 0; j < X.cols(); ++j) {
    if (b[j] != 0.0) {
      worst = std::max(worst, std::abs(c[j] - std::copysign(half, b[j])));
    } else {
      worst = std::max(worst, std::abs(c[j]) - half);
    }
  }
  return worst;
}

}  // namespace sparsereg
