#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

namespace sparsereg {

using Index = Eigen::Index;
using Support = std::vector<Index>;

/// Coefficient vector whose support is derived from its values, so the
/// support can never disagree with the nonzero pattern.
template <typename Scalar>
class CoefficientVector {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  CoefficientVector() = default;
  explicit CoefficientVector(Index p) : values_(Vector::Zero(p)) {}
  template <typename Derived>
  CoefficientVector(const Eigen::MatrixBase<Derived>& values) : values_(values) {}

  const Vector& values() const { return values_; }
  Vector& values() { return values_; }
  Index size() const { return values_.size(); }
  Scalar operator[](Index i) const { return values_[i]; }

  Support support() const {
    Support s;
    for (Index i = 0; i < values_.size(); ++i) {
      if (values_[i] != Scalar(0)) s.push_back(i);
    }
    return s;
  }
  Index l0_norm() const { return static_cast<Index>((values_.array() != Scalar(0)).count()); }
  Scalar l1_norm() const { return values_.template lpNorm<1>(); }

 private:
  Vector values_;
};

namespace detail {

template <typename Scalar>
void require_cutoff(Scalar gamma) {
  if (!(gamma >= Scalar(0))) {
    throw std::invalid_argument("threshold cutoff must be nonnegative");
  }
}

}  // namespace detail

/// Keeps coordinates with |b| > gamma0 (strict), zeroes the rest.
template <typename Derived>
auto hard_threshold(const Eigen::MatrixBase<Derived>& beta_ls,
                    typename Derived::Scalar gamma0) {
  using Scalar = typename Derived::Scalar;
  detail::require_cutoff(gamma0);
  return beta_ls.unaryExpr(
      [gamma0](Scalar b) { return std::abs(b) > gamma0 ? b : Scalar(0); });
}

/// sign(b) (|b| - gamma1)_+ per coordinate.
template <typename Derived>
auto soft_threshold(const Eigen::MatrixBase<Derived>& beta_ls,
                    typename Derived::Scalar gamma1) {
  using Scalar = typename Derived::Scalar;
  detail::require_cutoff(gamma1);
  return beta_ls.unaryExpr([gamma1](Scalar b) {
    const Scalar shrunk = std::abs(b) - gamma1;
    return shrunk > Scalar(0) ? std::copysign(shrunk, b) : Scalar(0);
  });
}

/// The chosen columns do not have full column rank.
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(Support columns, Index rank)
      : std::runtime_error(describe(columns, rank)), columns_(std::move(columns)), rank_(rank) {}

  const Support& columns() const { return columns_; }
  Index rank() const { return rank_; }

 private:
  static std::string describe(const Support& columns, Index rank) {
    std::string s = "rank-deficient selection (rank " + std::to_string(rank) + ") on columns {";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      s += (i ? "," : "") + std::to_string(columns[i]);
    }
    return s + "}";
  }

  Support columns_;
  Index rank_;
};

template <typename Scalar>
struct RefitResult {
  CoefficientVector<Scalar> coefficients;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> residual;
  Scalar rss = 0;
};

/// Least squares of y on the columns of X listed in support (column-pivoted
/// Householder QR), scattered back into a length-p vector.
template <typename DerivedY, typename DerivedX>
RefitResult<typename DerivedX::Scalar> ls_refit(const Eigen::MatrixBase<DerivedY>& y,
                                                const Eigen::MatrixBase<DerivedX>& X,
                                                std::span<const Index> support) {
  using Scalar = typename DerivedX::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (y.size() != X.rows()) {
    throw std::invalid_argument("ls_refit: y and X disagree on the number of rows");
  }
  RefitResult<Scalar> out;
  out.coefficients = CoefficientVector<Scalar>(X.cols());
  if (support.empty()) {
    out.residual = y;
    out.rss = out.residual.squaredNorm();
    return out;
  }
  const Support cols(support.begin(), support.end());
  if (static_cast<Index>(cols.size()) > X.rows()) {
    throw RankDeficientError(cols, X.rows());
  }
  const Matrix Xc = X(Eigen::all, cols);
  Eigen::ColPivHouseholderQR<Matrix> qr(Xc);
  // Tolerance relative to the largest column scale.
  qr.setThreshold(Scalar(1e-10));
  if (qr.rank() < Xc.cols()) throw RankDeficientError(cols, qr.rank());
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coef = qr.solve(y);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.coefficients.values()[cols[j]] = coef[static_cast<Index>(j)];
  }
  out.residual = y - Xc * coef;
  out.rss = out.residual.squaredNorm();
  return out;
}

}  // namespace sparsereg
