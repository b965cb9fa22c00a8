#pragma once

// Closed-form asymptotic misclassification probabilities for the D- and
// T-criteria, the exact first two moments of the T statistic under a diagonal
// covariance, and Marchenko-Pastur limits used as numerical diagnostics.

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>

#include "hdc/errors.hpp"
#include "hdc/model.hpp"
#include "hdc/rng.hpp"

namespace hdc {

/// Standard normal CDF through erfc; accurate to ~1e-16 absolute.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// ---------------------------------------------------------------- D-criterion

/// Limits y = p/n, lambda = n1/n (n = n1 + n2 - 2) and Delta^2.
struct TheoryInputsD {
  double y = 0.5;
  double lambda = 0.5;
  double delta2 = 0.0;

  // Finite-sample plug-in: y = p/(n1+n2-2), lambda = n1/(n1+n2-2).
  static TheoryInputsD from_design(int p, int n1, int n2, double delta2) {
    const double n = n1 + n2 - 2.0;
    return {p / n, n1 / n, delta2};
  }
};

namespace detail {

inline void require_d_inputs(const TheoryInputsD& in) {
  if (!(in.y > 0.0 && in.y < 1.0)) throw DomainError("y must lie in (0, 1), got " + std::to_string(in.y));
  if (!(in.lambda > 0.0 && in.lambda < 1.0))
    throw DomainError("lambda must lie in (0, 1), got " + std::to_string(in.lambda));
  if (!(in.delta2 >= 0.0) || !std::isfinite(in.delta2))
    throw DomainError("delta2 must be a finite non-negative number");
}

}  // namespace detail

/// theta1 = -Delta^2 sqrt(1 - y) / (2 sqrt(y / (lambda (1 - lambda)) + Delta^2));
/// the D-criterion misclassification probability tends to Phi(theta1).
inline double theta1(const TheoryInputsD& in) {
  detail::require_d_inputs(in);
  const double spread = in.y / (in.lambda * (1.0 - in.lambda)) + in.delta2;
  return -(in.delta2 / (2.0 * std::sqrt(spread))) * std::sqrt(1.0 - in.y);
}

/// Normal-theory limit theta2 = -Delta sqrt(1 - y) / 2.
inline double theta2(double y, double delta2) {
  detail::require_d_inputs({y, 0.5, delta2});
  return -0.5 * std::sqrt(delta2) * std::sqrt(1.0 - y);
}

/// theta1 = tau * theta2.
inline double tau(const TheoryInputsD& in) {
  detail::require_d_inputs(in);
  if (!(in.delta2 > 0.0)) throw DomainError("tau is undefined for delta2 = 0");
  return 1.0 / std::sqrt(in.y / (in.lambda * (1.0 - in.lambda) * in.delta2) + 1.0);
}

inline double d_misclass(const TheoryInputsD& in) { return normal_cdf(theta1(in)); }

/// Error of Fisher's rule with the true parameters: Phi(-Delta / 2).
inline double oracle_misclass(double delta2) { return normal_cdf(-0.5 * std::sqrt(std::max(0.0, delta2))); }

// ---------------------------------------------------------------- T-criterion

struct InnovationMoments {
  double theta = 0.0;   // E x*^3
  double gamma4 = 3.0;  // E x*^4

  static InnovationMoments of(const InnovationSpec& s) { return {s.theta(), s.gamma4()}; }
};

struct TheoryInputsT {
  Vector delta;
  CovarianceSpec sigma;
  MixingMatrix gamma;
  int n1 = 0;
  int n2 = 0;
  InnovationMoments x;
  InnovationMoments y;

  static TheoryInputsT make(Vector delta, CovarianceSpec sigma, int n1, int n2, InnovationMoments x,
                            InnovationMoments y) {
    if (delta.size() != sigma.dim()) throw ValidationError("delta and covariance dimensions differ");
    if (n1 < 1 || n2 < 1) throw DomainError("group sizes must be positive");
    MixingMatrix gamma = MixingMatrix::from(sigma);
    return TheoryInputsT{std::move(delta), std::move(sigma), std::move(gamma), n1, n2, x, y};
  }
};

enum class VarianceVariant {
  Full,  // exact variance of the statistic (diagonal Sigma only)
  V1,    // keeps the O(p/n) skewness term
  V2,    // drops the skewness term
  V3     // leading term 4 delta' Sigma delta
};

inline std::string to_string(VarianceVariant v) {
  switch (v) {
    case VarianceVariant::Full: return "full";
    case VarianceVariant::V1: return "v1";
    case VarianceVariant::V2: return "v2";
    default: return "v3";
  }
}

/// The four scalar functionals of (Sigma, Gamma, delta) the variance
/// formulas depend on.
struct TVarianceTerms {
  double trace_sigma2 = 0.0;       // tr(Sigma^2)
  double ones_gamma3_delta = 0.0;  // 1' Gamma^3 delta
  double delta_sigma_delta = 0.0;  // delta' Sigma delta
  double delta_norm2 = 0.0;        // |delta|^2
  bool sigma_diagonal = false;
};

inline TVarianceTerms variance_terms(const TheoryInputsT& in) {
  TVarianceTerms t;
  const Matrix sigma = build_covariance(in.sigma);
  t.trace_sigma2 = sigma.squaredNorm();
  t.ones_gamma3_delta = in.gamma.cube_apply(in.delta).sum();
  t.delta_sigma_delta = in.delta.dot(sigma * in.delta);
  t.delta_norm2 = in.delta.squaredNorm();
  t.sigma_diagonal = in.sigma.is_diagonal();
  return t;
}

/// Coefficients of the exact variance
///   Var = [beta0 + beta1] tr(Sigma^2) + beta2 1'Gamma^3 delta + 4 a2 delta'Sigma delta.
struct TVarianceBetas {
  double beta0;
  double beta1;
  double beta2;
};

inline TVarianceBetas variance_betas(int n1, int n2, InnovationMoments x, InnovationMoments y) {
  const double m1 = n1, m2 = n2;
  const double a1 = m1 / (m1 + 1.0);
  const double a2 = m2 / (m2 + 1.0);
  const double c1 = (6.0 * m1 * m1 + 3.0 * m1 - 3.0) / (m1 * m1 * m1);
  const double c2 = (6.0 * m2 * m2 + 3.0 * m2 - 3.0) / (m2 * m2 * m2);
  TVarianceBetas b;
  b.beta0 = a1 * a1 * c1 + a2 * a2 * c2 + 2.0 * (a1 * a2 - 1.0);
  b.beta1 = x.gamma4 * (a1 * a1 / (m1 * m1 * m1) + (a1 - a2) * (a1 - a2)) + a2 * a2 / (m2 * m2 * m2) * y.gamma4;
  // The theta_y coefficient carries a2^2: E(k_l) expansion term -4 a2^2 mu_l E(z - ybar)^3.
  b.beta2 = 4.0 * a2 * (a1 - a2) * x.theta + 4.0 * a2 * a2 / (m2 * m2) * y.theta;
  return b;
}

inline double t_variance(const TVarianceTerms& t, int n1, int n2, InnovationMoments x, InnovationMoments y,
                         VarianceVariant variant) {
  if (n1 < 1 || n2 < 1) throw DomainError("group sizes must be positive");
  const double inv1 = 1.0 / n1, inv2 = 1.0 / n2;
  switch (variant) {
    case VarianceVariant::Full: {
      if (!t.sigma_diagonal)
        throw AssumptionError("the exact T-statistic variance requires a diagonal covariance matrix");
      const auto b = variance_betas(n1, n2, x, y);
      const double a2 = n2 / (n2 + 1.0);
      return (b.beta0 + b.beta1) * t.trace_sigma2 + b.beta2 * t.ones_gamma3_delta + 4.0 * a2 * t.delta_sigma_delta;
    }
    case VarianceVariant::V1:
      return 4.0 * (inv1 + inv2) * t.trace_sigma2 + 4.0 * x.theta * (inv2 - inv1) * t.ones_gamma3_delta +
             4.0 * (1.0 - inv2) * t.delta_sigma_delta;
    case VarianceVariant::V2:
      return 4.0 * (inv1 + inv2) * t.trace_sigma2 + 4.0 * (1.0 - inv2) * t.delta_sigma_delta;
    case VarianceVariant::V3:
      return 4.0 * t.delta_sigma_delta;
  }
  return 0.0;
}

inline double t_variance(const TheoryInputsT& in, VarianceVariant variant) {
  return t_variance(variance_terms(in), in.n1, in.n2, in.x, in.y, variant);
}

/// Phi(-a2 |delta|^2 / B_p), B_p^2 the chosen variance approximation.
inline double t_misclass(const TVarianceTerms& t, int n1, int n2, InnovationMoments x, InnovationMoments y,
                         VarianceVariant variant) {
  const double v = t_variance(t, n1, n2, x, y, variant);
  if (t.delta_norm2 == 0.0) return 0.5;
  if (!(v > 0.0)) throw DomainError("T-criterion variance approximation is not positive");
  const double a2 = n2 / (n2 + 1.0);
  return normal_cdf(-a2 * t.delta_norm2 / std::sqrt(v));
}

inline double t_misclass(const TheoryInputsT& in, VarianceVariant variant) {
  return t_misclass(variance_terms(in), in.n1, in.n2, in.x, in.y, variant);
}

struct StatMoments {
  double mean;
  double variance;
};

/// Exact mean and variance of the T statistic a1|z-xbar|^2 - a2|z-ybar|^2
/// for z from the first population, under a diagonal Sigma.
inline StatMoments lemma3_moments(const TheoryInputsT& in) {
  const auto t = variance_terms(in);
  const double a2 = in.n2 / (in.n2 + 1.0);
  return {-a2 * t.delta_norm2, t_variance(t, in.n1, in.n2, in.x, in.y, VarianceVariant::Full)};
}

// -------------------------------------------------------- Marchenko-Pastur

struct MPLimits {
  double a1;  // lim tr(S^{-1}) / p
  double a2;  // lim tr(S^{-2}) / p
};

inline MPLimits mp_limits(double y) {
  if (!(y > 0.0 && y < 1.0)) throw DomainError("y must lie in (0, 1), got " + std::to_string(y));
  const double a1 = 1.0 / (1.0 - y);
  return {a1, a1 * a1 * a1};
}

struct MPDiagnostics {
  double t1;  // tr(S^{-1}) / p
  double t2;  // tr(S^{-2}) / p
  double q1;  // xbar*' S^{-1} xbar* * n1/p  (|xbar*|^2 ~ p/n1)
  double q2;  // xbar*' S^{-2} xbar* * n1/p
};

/// One draw of the standardized pooled scatter S = A/n (both groups of size
/// ceil(n/2)) and its normalized inverse traces; these approach mp_limits(p/n).
inline MPDiagnostics mp_empirical(int n, int p, const InnovationSpec& innovation, Rng& rng) {
  if (p < 1 || n < 2) throw DomainError("mp_empirical needs p >= 1 and n >= 2");
  if (p >= n) throw SingularityError("mp_empirical needs p < n");
  const int group = (n + 1) / 2;
  if (p >= 2 * group - 2) throw SingularityError("mp_empirical: pooled scatter would be singular");
  Matrix x(group, p), y(group, p);
  innovation.fill(x, rng);
  innovation.fill(y, rng);
  const Vector xbar = x.colwise().mean().transpose();
  const Vector ybar = y.colwise().mean().transpose();
  x.rowwise() -= xbar.transpose();
  y.rowwise() -= ybar.transpose();
  Matrix a = Matrix::Zero(p, p);
  a.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  a.selfadjointView<Eigen::Lower>().rankUpdate(y.transpose());
  a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
  const Matrix s = a / static_cast<double>(n);
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) throw ConditioningError("sample covariance is not positive definite");
  const Matrix s_inv = llt.solve(Matrix::Identity(p, p));
  const Vector u = s_inv * xbar;
  const double scale = static_cast<double>(group) / p;
  return {s_inv.trace() / p, s_inv.squaredNorm() / p, xbar.dot(u) * scale, u.squaredNorm() * scale};
}

}  // namespace hdc
