#pragma once

// Two-population decision rules over training statistics.
//
//   D-criterion: a1 (z-xbar)'A^{-1}(z-xbar) < a2 (z-ybar)'A^{-1}(z-ybar)
//   T-criterion: a1 |z-xbar|^2            < a2 |z-ybar|^2
//
// with A the pooled within-group scatter matrix and a_i = n_i / (n_i + 1).
// By the matrix determinant lemma the D rule is det(A1) < det(A2), where A_i
// is A augmented by the rank-one term a_i (z - mean_i)(z - mean_i)'; the T rule
// is the same comparison with traces.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/LU>

#include <cmath>
#include <optional>
#include <string>

#include "hdc/errors.hpp"
#include "hdc/model.hpp"

namespace hdc {

enum class Population { Pi1, Pi2 };

inline Population other(Population p) { return p == Population::Pi1 ? Population::Pi2 : Population::Pi1; }

/// Outcome of a rule: `statistic` is the left-hand side minus the right-hand
/// side of the rule's inequality, so Pi1 is chosen iff statistic <= 0.
struct Decision {
  Population label;
  double statistic;
};

inline Decision decide(double statistic) {
  return {statistic <= 0.0 ? Population::Pi1 : Population::Pi2, statistic};
}

class TrainedStats;
TrainedStats fit(const Matrix& x, const Matrix& y, bool need_scatter);

/// Group means, sizes and (optionally) the factorized pooled scatter matrix.
/// Immutable after fit(); safe to share across threads.
class TrainedStats {
public:
  int dim() const noexcept { return static_cast<int>(mean_x_.size()); }
  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  double alpha1() const noexcept { return n1_ / (n1_ + 1.0); }
  double alpha2() const noexcept { return n2_ / (n2_ + 1.0); }
  const Vector& mean_x() const noexcept { return mean_x_; }
  const Vector& mean_y() const noexcept { return mean_y_; }

  // diag(A): per-coordinate pooled within-group sums of squares.
  const Vector& scatter_diagonal() const noexcept { return scatter_diag_; }

  bool has_scatter() const noexcept { return scatter_.has_value(); }

  const Matrix& pooled_scatter() const {
    if (!scatter_) throw ValidationError("pooled scatter matrix was not computed (fit with need_scatter = true)");
    return *scatter_;
  }

  const Eigen::LLT<Matrix>& scatter_factor() const {
    if (!factor_) throw ValidationError("pooled scatter matrix was not computed (fit with need_scatter = true)");
    return *factor_;
  }

private:
  friend TrainedStats fit(const Matrix& x, const Matrix& y, bool need_scatter);
  TrainedStats() = default;

  Vector mean_x_;
  Vector mean_y_;
  Vector scatter_diag_;
  int n1_ = 0;
  int n2_ = 0;
  std::optional<Matrix> scatter_;
  std::optional<Eigen::LLT<Matrix>> factor_;
};

/// Fits group means and, when `need_scatter`, the pooled scatter
/// A = sum (x_i - xbar)(x_i - xbar)' + sum (y_j - ybar)(y_j - ybar)' with its
/// Cholesky factor. A is only invertible for p < n1 + n2 - 2.
inline TrainedStats fit(const Matrix& x, const Matrix& y, bool need_scatter) {
  if (x.rows() < 2 || y.rows() < 2) throw ValidationError("each training group needs at least 2 observations");
  if (x.cols() != y.cols() || x.cols() < 1) throw ValidationError("training groups have different feature dimensions");
  const int p = static_cast<int>(x.cols());
  const int n = static_cast<int>(x.rows() + y.rows()) - 2;
  if (need_scatter && p >= n)
    throw SingularityError("D-criterion needs the dimension to be smaller than the sample size: p = " +
                           std::to_string(p) + " but n1 + n2 - 2 = " + std::to_string(n) +
                           " (pooled scatter matrix is singular)");

  TrainedStats s;
  s.n1_ = static_cast<int>(x.rows());
  s.n2_ = static_cast<int>(y.rows());
  s.mean_x_ = x.colwise().mean().transpose();
  s.mean_y_ = y.colwise().mean().transpose();
  const Matrix xc = x.rowwise() - s.mean_x_.transpose();
  const Matrix yc = y.rowwise() - s.mean_y_.transpose();
  s.scatter_diag_ = (xc.colwise().squaredNorm() + yc.colwise().squaredNorm()).transpose();

  if (need_scatter) {
    Matrix a = Matrix::Zero(p, p);
    a.selfadjointView<Eigen::Lower>().rankUpdate(xc.transpose());
    a.selfadjointView<Eigen::Lower>().rankUpdate(yc.transpose());
    a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success || !(llt.rcond() >= kMinReciprocalCondition))
      throw ConditioningError("pooled scatter matrix is ill-conditioned (estimated condition > 1e12); p/n = " +
                              std::to_string(static_cast<double>(p) / n));
    s.scatter_ = std::move(a);
    s.factor_ = std::move(llt);
  }
  return s;
}

inline Vector pooled_variances(const TrainedStats& stats) {
  return stats.scatter_diagonal() / static_cast<double>(stats.n1() + stats.n2() - 2);
}

namespace detail {

inline void require_points(const TrainedStats& stats, const Matrix& z) {
  if (z.cols() != stats.dim()) throw ValidationError("test points have the wrong dimension");
}

// Row-wise (z_i - m)' A^{-1} (z_i - m) through one triangular solve.
inline Vector quadratic_forms(const Eigen::LLT<Matrix>& llt, const Matrix& z, const Vector& m) {
  Matrix centered = (z.rowwise() - m.transpose()).transpose();
  llt.matrixL().solveInPlace(centered);
  return centered.colwise().squaredNorm().transpose();
}

}  // namespace detail

/// D-criterion statistics for every row of z.
inline Vector d_statistics(const TrainedStats& stats, const Matrix& z) {
  detail::require_points(stats, z);
  const auto& llt = stats.scatter_factor();
  return stats.alpha1() * detail::quadratic_forms(llt, z, stats.mean_x()) -
         stats.alpha2() * detail::quadratic_forms(llt, z, stats.mean_y());
}

inline Decision d_criterion(const TrainedStats& stats, const Vector& z) {
  return decide(d_statistics(stats, z.transpose())[0]);
}

/// T-criterion statistics for every row of z.
inline Vector t_statistics(const TrainedStats& stats, const Matrix& z) {
  detail::require_points(stats, z);
  const Vector dx = (z.rowwise() - stats.mean_x().transpose()).rowwise().squaredNorm();
  const Vector dy = (z.rowwise() - stats.mean_y().transpose()).rowwise().squaredNorm();
  return stats.alpha1() * dx - stats.alpha2() * dy;
}

inline Decision t_criterion(const TrainedStats& stats, const Vector& z) {
  return decide(t_statistics(stats, z.transpose())[0]);
}

/// Independence rule with diagonal D: chooses Pi1 iff
/// (z - (xbar + ybar)/2)' D^{-1} (xbar - ybar) >= 0. The returned statistic is
/// the negated score so the Decision sign convention holds.
inline Vector nb_statistics(const TrainedStats& stats, const Vector& variances, const Matrix& z) {
  detail::require_points(stats, z);
  if (variances.size() != stats.dim()) throw ValidationError("naive Bayes: variance vector has the wrong dimension");
  for (Eigen::Index l = 0; l < variances.size(); ++l)
    if (!(variances[l] > 0.0))
      throw ValidationError("naive Bayes: feature " + std::to_string(l) + " has zero pooled variance (degenerate feature)");
  const Vector w = (stats.mean_x() - stats.mean_y()).cwiseQuotient(variances);
  const Vector mid = 0.5 * (stats.mean_x() + stats.mean_y());
  return -((z.rowwise() - mid.transpose()) * w);
}

inline Decision naive_bayes(const TrainedStats& stats, const Vector& variances, const Vector& z) {
  return decide(nb_statistics(stats, variances, z.transpose())[0]);
}

/// Fisher's linear rule with the true parameters; the performance floor.
class OracleRule {
public:
  OracleRule(const Vector& mu1, const Vector& mu2, const CovarianceSpec& sigma)
      : weights_(apply_inverse(sigma, mu1 - mu2)), mid_(0.5 * (mu1 + mu2)) {
    if (mu1.size() != sigma.dim() || mu2.size() != sigma.dim())
      throw ValidationError("oracle rule: dimension mismatch");
  }

  Vector statistics(const Matrix& z) const {
    if (z.cols() != weights_.size()) throw ValidationError("test points have the wrong dimension");
    return -((z.rowwise() - mid_.transpose()) * weights_);
  }

private:
  Vector weights_;
  Vector mid_;
};

inline Decision oracle_fisher(const Vector& mu1, const Vector& mu2, const CovarianceSpec& sigma, const Vector& z) {
  return decide(OracleRule(mu1, mu2, sigma).statistics(z.transpose())[0]);
}

namespace detail {

inline double log_det_positive(const Matrix& m) {
  Eigen::PartialPivLU<Matrix> lu(m);
  const Matrix& u = lu.matrixLU();
  double log_det = 0.0;
  double sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double d = u(i, i);
    if (d == 0.0 || !std::isfinite(d)) throw SingularityError("augmented scatter matrix is singular");
    if (d < 0.0) sign = -sign;
    log_det += std::log(std::abs(d));
  }
  if (sign < 0.0) throw SingularityError("augmented scatter matrix has a non-positive determinant");
  return log_det;
}

}  // namespace detail

/// Slow path, O(p^3) per query: forms A1 and A2 explicitly and compares their
/// determinants. The statistic is log det(A1) - log det(A2).
inline Decision d_criterion_det(const Matrix& x, const Matrix& y, const Vector& z) {
  if (x.rows() < 2 || y.rows() < 2) throw ValidationError("each training group needs at least 2 observations");
  if (x.cols() != y.cols() || z.size() != x.cols()) throw ValidationError("dimension mismatch");
  const Eigen::Index p = x.cols();
  const Eigen::Index n1 = x.rows();
  const Eigen::Index n2 = y.rows();
  if (p >= n1 + n2 - 1) throw SingularityError("d_criterion_det needs p < n1 + n2 - 1");

  Vector xbar = Vector::Zero(p), ybar = Vector::Zero(p);
  for (Eigen::Index i = 0; i < n1; ++i) xbar += x.row(i).transpose();
  for (Eigen::Index j = 0; j < n2; ++j) ybar += y.row(j).transpose();
  xbar /= static_cast<double>(n1);
  ybar /= static_cast<double>(n2);

  Matrix a = Matrix::Zero(p, p);
  for (Eigen::Index i = 0; i < n1; ++i) {
    const Vector d = x.row(i).transpose() - xbar;
    a += d * d.transpose();
  }
  for (Eigen::Index j = 0; j < n2; ++j) {
    const Vector d = y.row(j).transpose() - ybar;
    a += d * d.transpose();
  }
  const Vector dx = z - xbar;
  const Vector dy = z - ybar;
  const Matrix a1 = a + (n1 / (n1 + 1.0)) * dx * dx.transpose();
  const Matrix a2 = a + (n2 / (n2 + 1.0)) * dy * dy.transpose();
  return decide(detail::log_det_positive(a1) - detail::log_det_positive(a2));
}

}  // namespace hdc
