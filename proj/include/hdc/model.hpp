#pragma once

// Covariance structures, mean-difference scenarios and population samplers
// for two populations sharing a common covariance matrix:
//
//   x = Gamma x* + mu1,   y = Gamma y* + mu2,   Gamma Gamma = Sigma,
//
// where x*, y* have i.i.d. centered, standardized components.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <variant>

#include "hdc/errors.hpp"
#include "hdc/rng.hpp"

namespace hdc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Reciprocal condition number below which a factorization is refused.
inline constexpr double kMinReciprocalCondition = 1e-12;

namespace cov {
struct Identity {};
struct EqualCorr {
  double rho;
};
struct AR1 {
  double rho;
};
struct Diagonal {
  Vector variances;
};
struct Explicit {
  Matrix sigma;
};
}  // namespace cov

/// Symbolic description of a p x p covariance matrix. Construction validates
/// the parameter ranges, so every instance describes a positive definite matrix.
class CovarianceSpec {
public:
  using Kind = std::variant<cov::Identity, cov::EqualCorr, cov::AR1, cov::Diagonal, cov::Explicit>;

  static CovarianceSpec identity(int p) {
    require_dim(p);
    return CovarianceSpec(cov::Identity{}, p);
  }

  // Sigma_ll' = rho for l != l', unit diagonal. Needs -1/(p-1) < rho < 1.
  static CovarianceSpec equal_corr(int p, double rho) {
    require_dim(p);
    const double lower = p > 1 ? -1.0 / (p - 1) : -1.0;
    if (!std::isfinite(rho) || rho <= lower || rho >= 1.0)
      throw DomainError("equal-correlation rho must lie in (" + std::to_string(lower) + ", 1), got " +
                        std::to_string(rho));
    return CovarianceSpec(cov::EqualCorr{rho}, p);
  }

  // Sigma_ll' = rho^|l - l'|. Needs |rho| < 1.
  static CovarianceSpec ar1(int p, double rho) {
    require_dim(p);
    if (!std::isfinite(rho) || std::abs(rho) >= 1.0)
      throw DomainError("AR(1) rho must lie in (-1, 1), got " + std::to_string(rho));
    return CovarianceSpec(cov::AR1{rho}, p);
  }

  static CovarianceSpec diagonal(Vector variances) {
    require_dim(static_cast<int>(variances.size()));
    for (Eigen::Index i = 0; i < variances.size(); ++i)
      if (!(variances[i] > 0.0) || !std::isfinite(variances[i]))
        throw DomainError("diagonal covariance entries must be positive and finite");
    const int p = static_cast<int>(variances.size());
    return CovarianceSpec(cov::Diagonal{std::move(variances)}, p);
  }

  static CovarianceSpec explicit_matrix(Matrix sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() < 1)
      throw StructureError("explicit covariance must be a non-empty square matrix");
    if (!sigma.allFinite()) throw StructureError("explicit covariance has non-finite entries");
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw StructureError("explicit covariance is not symmetric");
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) throw StructureError("explicit covariance is not positive definite");
    const int p = static_cast<int>(sigma.rows());
    return CovarianceSpec(cov::Explicit{std::move(sigma)}, p);
  }

  int dim() const noexcept { return p_; }
  const Kind& kind() const noexcept { return kind_; }

  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(kind_);
  }

  bool is_diagonal() const noexcept {
    if (is<cov::Identity>() || is<cov::Diagonal>()) return true;
    if (const auto* e = std::get_if<cov::EqualCorr>(&kind_)) return e->rho == 0.0 || p_ == 1;
    if (const auto* a = std::get_if<cov::AR1>(&kind_)) return a->rho == 0.0 || p_ == 1;
    const auto& s = std::get<cov::Explicit>(kind_).sigma;
    return (s - Matrix(s.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  }

  // Correlation parameter for EqualCorr / AR1, 0 for Identity.
  double rho() const {
    if (const auto* e = std::get_if<cov::EqualCorr>(&kind_)) return e->rho;
    if (const auto* a = std::get_if<cov::AR1>(&kind_)) return a->rho;
    if (is<cov::Identity>()) return 0.0;
    throw UnsupportedError("covariance kind '" + name() + "' has no rho parameter");
  }

  std::string name() const {
    switch (kind_.index()) {
      case 0: return "identity";
      case 1: return "equal_corr";
      case 2: return "ar1";
      case 3: return "diagonal";
      default: return "explicit";
    }
  }

private:
  CovarianceSpec(Kind kind, int p) : kind_(std::move(kind)), p_(p) {}

  static void require_dim(int p) {
    if (p < 1) throw DomainError("covariance dimension p must be >= 1");
  }

  Kind kind_;
  int p_;
};

/// Materializes Sigma. Entries are filled symmetrically so the result is
/// bitwise symmetric.
inline Matrix build_covariance(const CovarianceSpec& spec) {
  const int p = spec.dim();
  Matrix s = Matrix::Identity(p, p);
  if (const auto* e = std::get_if<cov::EqualCorr>(&spec.kind())) {
    s.setConstant(e->rho);
    s.diagonal().setOnes();
  } else if (const auto* a = std::get_if<cov::AR1>(&spec.kind())) {
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) s(i, j) = s(j, i) = std::pow(a->rho, j - i);
  } else if (const auto* d = std::get_if<cov::Diagonal>(&spec.kind())) {
    s = d->variances.asDiagonal();
  } else if (const auto* x = std::get_if<cov::Explicit>(&spec.kind())) {
    s = x->sigma;
  }
  return s;
}

namespace detail {

inline Eigen::LLT<Matrix> checked_llt(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success || !(llt.rcond() >= kMinReciprocalCondition))
    throw ConditioningError(std::string(what) + " is singular or ill-conditioned (estimated condition > 1e12)");
  return llt;
}

}  // namespace detail

/// Sigma^{-1}. EqualCorr uses Sherman-Morrison, AR1 the tridiagonal closed
/// form, Diagonal/Identity are trivial and Explicit is factorized.
inline Matrix inverse_covariance(const CovarianceSpec& spec) {
  const int p = spec.dim();
  if (spec.is<cov::Identity>()) return Matrix::Identity(p, p);
  if (const auto* d = std::get_if<cov::Diagonal>(&spec.kind())) return d->variances.cwiseInverse().asDiagonal();
  if (const auto* e = std::get_if<cov::EqualCorr>(&spec.kind())) {
    const double rho = e->rho;
    const double c = rho / (1.0 + (p - 1) * rho);
    Matrix inv = Matrix::Constant(p, p, -c / (1.0 - rho));
    inv.diagonal().setConstant((1.0 - c) / (1.0 - rho));
    return inv;
  }
  if (const auto* a = std::get_if<cov::AR1>(&spec.kind())) {
    const double rho = a->rho;
    const double k = 1.0 / (1.0 - rho * rho);
    Matrix inv = Matrix::Zero(p, p);
    if (p == 1) {
      inv(0, 0) = 1.0;
      return inv;
    }
    for (int i = 0; i < p; ++i) {
      inv(i, i) = (i == 0 || i == p - 1 ? 1.0 : 1.0 + rho * rho) * k;
      if (i + 1 < p) inv(i, i + 1) = inv(i + 1, i) = -rho * k;
    }
    return inv;
  }
  const auto& sigma = std::get<cov::Explicit>(spec.kind()).sigma;
  Matrix inv = detail::checked_llt(sigma, "covariance matrix").solve(Matrix::Identity(p, p));
  return (inv + inv.transpose()) * 0.5;
}

/// Sigma^{-1} v in O(p) for the structured kinds.
inline Vector apply_inverse(const CovarianceSpec& spec, const Vector& v) {
  const int p = spec.dim();
  if (v.size() != p) throw ValidationError("dimension mismatch in apply_inverse");
  if (spec.is<cov::Identity>()) return v;
  if (const auto* d = std::get_if<cov::Diagonal>(&spec.kind())) return v.cwiseQuotient(d->variances);
  if (const auto* e = std::get_if<cov::EqualCorr>(&spec.kind())) {
    const double c = e->rho / (1.0 + (p - 1) * e->rho);
    return (v.array() - c * v.sum()).matrix() / (1.0 - e->rho);
  }
  if (const auto* a = std::get_if<cov::AR1>(&spec.kind())) {
    if (p == 1) return v;
    const double rho = a->rho;
    Vector out(p);
    for (int i = 0; i < p; ++i) {
      double acc = (i == 0 || i == p - 1 ? 1.0 : 1.0 + rho * rho) * v[i];
      if (i > 0) acc -= rho * v[i - 1];
      if (i + 1 < p) acc -= rho * v[i + 1];
      out[i] = acc;
    }
    return out / (1.0 - rho * rho);
  }
  return detail::checked_llt(std::get<cov::Explicit>(spec.kind()).sigma, "covariance matrix").solve(v);
}

/// Delta^2 = delta' Sigma^{-1} delta.
inline double mahalanobis(const Vector& delta, const CovarianceSpec& sigma) {
  if (delta.size() != sigma.dim()) throw ValidationError("mahalanobis: dimension mismatch");
  return std::max(0.0, delta.dot(apply_inverse(sigma, delta)));
}

/// Calibration constant for the delocalized scenario: with mu2 entries drawn
/// from Uniform(e/2, 3e/2), e = Delta_L / beta, the expected Mahalanobis
/// distance equals the localized one. Identity is treated as rho = 0.
inline double beta_squared(const CovarianceSpec& spec) {
  const double p = spec.dim();
  if (p < 2) throw DomainError("beta_squared needs p >= 2");
  if (spec.is<cov::Identity>() || spec.is<cov::EqualCorr>()) {
    const double rho = spec.rho();
    return p * (p * rho - 14.0 * rho + 13.0) / (12.0 * (1.0 - rho + p * rho) * (1.0 - rho));
  }
  if (spec.is<cov::AR1>()) {
    const double rho = spec.rho();
    return (p * (24.0 * rho - 13.0 * rho * rho - 13.0) - 24.0 * rho + 26.0 * rho * rho) / (12.0 * (rho * rho - 1.0));
  }
  if (const auto* d = std::get_if<cov::Diagonal>(&spec.kind()); d && (d->variances.array() == 1.0).all())
    return 13.0 * p / 12.0;
  throw UnsupportedError("delocalized calibration is only available for identity, equal_corr and ar1 covariance, not '" +
                         spec.name() + "'");
}

/// Symmetric square root Gamma of Sigma (Gamma = Gamma', Gamma Gamma = Sigma).
/// Identity and diagonal structures are tagged so sampling can skip the
/// dense product.
class MixingMatrix {
public:
  enum class Structure { Identity, Diagonal, Dense };

  static MixingMatrix from(const CovarianceSpec& spec) {
    const int p = spec.dim();
    if (spec.is<cov::Identity>() || (spec.is_diagonal() && !spec.is<cov::Diagonal>() && !spec.is<cov::Explicit>()))
      return MixingMatrix(Matrix::Identity(p, p), Structure::Identity);
    if (const auto* d = std::get_if<cov::Diagonal>(&spec.kind()))
      return MixingMatrix(Matrix(d->variances.cwiseSqrt().asDiagonal()), Structure::Diagonal);
    const Matrix sigma = build_covariance(spec);
    if (spec.is_diagonal()) return MixingMatrix(Matrix(sigma.diagonal().cwiseSqrt().asDiagonal()), Structure::Diagonal);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0)
      throw StructureError("covariance matrix is not positive definite");
    Matrix root = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
    root = (root + root.transpose()) * 0.5;
    return MixingMatrix(std::move(root), Structure::Dense);
  }

  const Matrix& matrix() const noexcept { return gamma_; }
  Structure structure() const noexcept { return structure_; }
  int dim() const noexcept { return static_cast<int>(gamma_.rows()); }

  // Rows of `innovations` are x*'; returns rows (Gamma x*)'.
  void mix_rows(Matrix& innovations) const {
    switch (structure_) {
      case Structure::Identity: return;
      case Structure::Diagonal: innovations = innovations * gamma_.diagonal().asDiagonal(); return;
      case Structure::Dense: innovations = innovations * gamma_; return;
    }
  }

  // Gamma^3 v.
  Vector cube_apply(const Vector& v) const {
    switch (structure_) {
      case Structure::Identity: return v;
      case Structure::Diagonal: return gamma_.diagonal().array().cube().matrix().cwiseProduct(v);
      case Structure::Dense: break;
    }
    return gamma_ * (gamma_ * (gamma_ * v));
  }

private:
  MixingMatrix(Matrix g, Structure s) : gamma_(std::move(g)), structure_(s) {}

  Matrix gamma_;
  Structure structure_;
};

/// Law of one standardized innovation component (mean 0, variance 1).
class InnovationSpec {
public:
  enum class Kind { StandardNormal, StudentT, GammaShifted };

  static InnovationSpec standard_normal() { return InnovationSpec(Kind::StandardNormal, 0, 1.0); }

  // t_nu scaled by sqrt((nu - 2) / nu). nu > 4 keeps the fourth moment finite.
  static InnovationSpec student_t(int nu) {
    if (nu <= 4) throw DomainError("Student t degrees of freedom must be an integer > 4, got " + std::to_string(nu));
    return InnovationSpec(Kind::StudentT, nu, 1.0);
  }

  // sign * (u - 1), u ~ Gamma(shape 1, scale 1). sign = +1 gives theta = +2.
  static InnovationSpec gamma_shifted(double sign = 1.0) {
    if (sign != 1.0 && sign != -1.0) throw DomainError("gamma innovation sign must be +1 or -1");
    return InnovationSpec(Kind::GammaShifted, 0, sign);
  }

  Kind kind() const noexcept { return kind_; }
  int degrees_of_freedom() const noexcept { return nu_; }
  double sign() const noexcept { return sign_; }

  // Third moment E x*^3.
  double theta() const noexcept {
    switch (kind_) {
      case Kind::GammaShifted: return 2.0 * sign_;
      default: return 0.0;
    }
  }

  // Fourth moment E x*^4.
  double gamma4() const noexcept {
    switch (kind_) {
      case Kind::StudentT: return 3.0 + 6.0 / (nu_ - 4.0);
      case Kind::GammaShifted: return 9.0;
      default: return 3.0;
    }
  }

  std::string name() const {
    switch (kind_) {
      case Kind::StudentT: return "student_t";
      case Kind::GammaShifted: return "gamma";
      default: return "normal";
    }
  }

  // Fills `out` with i.i.d. draws in storage order.
  void fill(Eigen::Ref<Matrix> out, Rng& rng) const {
    double* data = out.data();
    const Eigen::Index count = out.size();
    switch (kind_) {
      case Kind::StandardNormal: {
        std::normal_distribution<double> dist(0.0, 1.0);
        for (Eigen::Index i = 0; i < count; ++i) data[i] = dist(rng);
        break;
      }
      case Kind::StudentT: {
        std::student_t_distribution<double> dist(nu_);
        const double scale = std::sqrt((nu_ - 2.0) / nu_);
        for (Eigen::Index i = 0; i < count; ++i) data[i] = scale * dist(rng);
        break;
      }
      case Kind::GammaShifted: {
        std::exponential_distribution<double> dist(1.0);
        for (Eigen::Index i = 0; i < count; ++i) data[i] = sign_ * (dist(rng) - 1.0);
        break;
      }
    }
  }

  friend bool operator==(const InnovationSpec&, const InnovationSpec&) = default;

private:
  InnovationSpec(Kind k, int nu, double sign) : kind_(k), nu_(nu), sign_(sign) {}

  Kind kind_;
  int nu_;
  double sign_;
};

struct ScenarioSpec {
  enum class Kind {
    Localized,    // mu2 = (1_{n0}, 0_{p-n0})
    Delocalized,  // mu2_l ~ Uniform(e/2, 3e/2), calibrated to the localized Delta^2
    Flat          // delta = c 1_p with Delta^2 = delta2
  };

  Kind kind = Kind::Delocalized;
  int n0 = 10;
  bool redraw_mu2 = true;
  double delta2 = 0.0;  // Flat only

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

inline std::string to_string(ScenarioSpec::Kind k) {
  switch (k) {
    case ScenarioSpec::Kind::Localized: return "localized";
    case ScenarioSpec::Kind::Delocalized: return "delocalized";
    default: return "flat";
  }
}

struct MeanPair {
  Vector mu1;
  Vector mu2;
};

inline Vector localized_mean(int p, int n0) {
  Vector mu = Vector::Zero(p);
  mu.head(n0).setOnes();
  return mu;
}

/// Builds (mu1, mu2) for the scenario. mu1 is always zero; the rng is only
/// consumed by the delocalized scenario (exactly p uniform draws).
inline MeanPair make_scenario_means(const ScenarioSpec& scenario, const CovarianceSpec& sigma, Rng& rng) {
  const int p = sigma.dim();
  MeanPair out{Vector::Zero(p), Vector::Zero(p)};
  switch (scenario.kind) {
    case ScenarioSpec::Kind::Localized:
    case ScenarioSpec::Kind::Delocalized:
      if (scenario.n0 < 1 || scenario.n0 > p)
        throw DomainError("sparsity size n0 must lie in [1, p], got " + std::to_string(scenario.n0));
      break;
    case ScenarioSpec::Kind::Flat:
      if (!(scenario.delta2 >= 0.0)) throw DomainError("flat scenario needs delta2 >= 0");
      break;
  }
  if (scenario.kind == ScenarioSpec::Kind::Localized) {
    out.mu2 = localized_mean(p, scenario.n0);
  } else if (scenario.kind == ScenarioSpec::Kind::Delocalized) {
    const double beta2 = beta_squared(sigma);
    const double delta_l2 = mahalanobis(localized_mean(p, scenario.n0), sigma);
    const double e = std::sqrt(delta_l2 / beta2);
    std::uniform_real_distribution<double> unif(0.5 * e, 1.5 * e);
    for (int l = 0; l < p; ++l) out.mu2[l] = unif(rng);
  } else {
    const Vector ones = Vector::Ones(p);
    const double base = mahalanobis(ones, sigma);
    out.mu2 = ones * std::sqrt(scenario.delta2 / base);
  }
  return out;
}

/// Two populations with common Sigma and mixing matrix Gamma.
struct PopulationPair {
  Vector mu1;
  Vector mu2;
  CovarianceSpec sigma;
  MixingMatrix gamma;
  InnovationSpec innov1;
  InnovationSpec innov2;

  static PopulationPair make(MeanPair means, CovarianceSpec sigma, InnovationSpec innov1, InnovationSpec innov2) {
    if (means.mu1.size() != sigma.dim() || means.mu2.size() != sigma.dim())
      throw ValidationError("population means do not match covariance dimension");
    MixingMatrix gamma = MixingMatrix::from(sigma);
    return PopulationPair{std::move(means.mu1), std::move(means.mu2), std::move(sigma), std::move(gamma), innov1, innov2};
  }

  Vector delta() const { return mu2 - mu1; }
};

/// n x p sample with rows Gamma x* + mu.
inline Matrix sample_population(int n, const Vector& mu, const MixingMatrix& gamma, const InnovationSpec& innovation,
                                Rng& rng) {
  if (n < 1) throw DomainError("sample size must be >= 1");
  if (mu.size() != gamma.dim()) throw ValidationError("mean and mixing matrix dimensions differ");
  Matrix x(n, gamma.dim());
  innovation.fill(x, rng);
  gamma.mix_rows(x);
  x.rowwise() += mu.transpose();
  return x;
}

inline Matrix sample_first(int n, const PopulationPair& pair, Rng& rng) {
  return sample_population(n, pair.mu1, pair.gamma, pair.innov1, rng);
}

inline Matrix sample_second(int n, const PopulationPair& pair, Rng& rng) {
  return sample_population(n, pair.mu2, pair.gamma, pair.innov2, rng);
}

}  // namespace hdc
