#include <gtest/gtest.h>

#include <cmath>

#include "hdc/classify.hpp"
#include "hdc/rng.hpp"
#include "hdc/theory.hpp"

using namespace hdc;

namespace {

Matrix column(std::initializer_list<double> v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

Matrix gaussian(int rows, int cols, Rng& rng, double shift = 0.0) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng) + shift;
  return m;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST(Fit, ScalarHandComputation) {
  const auto s = fit(column({0, 2}), column({1, 3}), true);
  EXPECT_DOUBLE_EQ(s.mean_x()[0], 1.0);
  EXPECT_DOUBLE_EQ(s.mean_y()[0], 2.0);
  EXPECT_DOUBLE_EQ(s.pooled_scatter()(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(s.scatter_diagonal()[0], 4.0);
  EXPECT_DOUBLE_EQ(s.alpha1(), 2.0 / 3.0);
}

TEST(Fit, IdenticalGroupsHaveEqualMeans) {
  Rng rng = make_stream(1, 0);
  const Matrix x = gaussian(6, 4, rng);
  const auto s = fit(x, x, false);
  EXPECT_EQ(s.mean_x(), s.mean_y());
  EXPECT_FALSE(s.has_scatter());
  EXPECT_THROW(s.pooled_scatter(), ValidationError);
}

TEST(Fit, DimensionLimitIsASingularityError) {
  Rng rng = make_stream(2, 0);
  try {
    fit(gaussian(3, 5, rng), gaussian(3, 5, rng), true);
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("dimension to be smaller than the sample size"), std::string::npos);
  }
  EXPECT_NO_THROW(fit(gaussian(3, 5, rng), gaussian(3, 5, rng), false));
}

TEST(Fit, NearlySingularScatterIsAConditioningError) {
  Rng rng = make_stream(3, 0);
  Matrix x = gaussian(10, 3, rng), y = gaussian(10, 3, rng);
  x.col(2) = x.col(0) + 1e-9 * x.col(1);
  y.col(2) = y.col(0) + 1e-9 * y.col(1);
  EXPECT_THROW(fit(x, y, true), ConditioningError);
}

TEST(Fit, PooledScatterIsSymmetricPsd) {
  Rng rng = make_stream(4, 0);
  const auto s = fit(gaussian(20, 6, rng), gaussian(15, 6, rng, 1.0), true);
  const Matrix& a = s.pooled_scatter();
  EXPECT_EQ(a, a.transpose());
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(a).eigenvalues().minCoeff(), 0.0);
}

TEST(Fit, AlphaIncreasesWithSampleSize) {
  Rng rng = make_stream(5, 0);
  double prev = 0.0;
  for (int n : {2, 3, 10, 100}) {
    const auto s = fit(gaussian(n, 1, rng), gaussian(n, 1, rng), false);
    EXPECT_GT(s.alpha1(), prev);
    prev = s.alpha1();
  }
}

TEST(DCriterion, PointAtFirstMeanGoesToFirstPopulation) {
  Rng rng = make_stream(6, 0);
  const auto s = fit(gaussian(10, 3, rng), gaussian(10, 3, rng, 2.0), true);
  EXPECT_EQ(d_criterion(s, s.mean_x()).label, Population::Pi1);
  EXPECT_EQ(d_criterion(s, s.mean_y()).label, Population::Pi2);
}

TEST(DCriterion, ScalarExample) {
  const auto s = fit(column({0, 2}), column({1, 3}), true);
  const auto d = d_criterion(s, vec({1.4}));
  const double a = 2.0 / 3.0;
  EXPECT_NEAR(d.statistic, a * 0.16 / 4 - a * 0.36 / 4, 1e-15);
  EXPECT_EQ(d.label, Population::Pi1);
  EXPECT_EQ(d_criterion_det(column({0, 2}), column({1, 3}), vec({1.4})).label, Population::Pi1);
}

TEST(DCriterion, MatchesDeterminantRule) {
  Rng rng = make_stream(7, 0);
  std::uniform_int_distribution<int> pick_p(1, 10);
  std::normal_distribution<double> g;
  int agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = pick_p(rng);
    std::uniform_int_distribution<int> pick_n(p + 3, 30);
    const int n1 = pick_n(rng), n2 = pick_n(rng);
    Matrix b = gaussian(p, p, rng);
    const Matrix sigma = b * b.transpose() + 0.5 * Matrix::Identity(p, p);
    const Matrix root = Eigen::LLT<Matrix>(sigma).matrixL();
    const Matrix x = gaussian(n1, p, rng) * root.transpose();
    const Matrix y = (gaussian(n2, p, rng, 0.5) * root.transpose());
    Vector z(p);
    for (int l = 0; l < p; ++l) z[l] = g(rng);
    const auto fast = d_criterion(fit(x, y, true), z);
    const auto slow = d_criterion_det(x, y, z);
    agree += fast.label == slow.label;
    // log det(A1) - log det(A2) = log(1 + a1 q1) - log(1 + a2 q2); signs agree.
    EXPECT_EQ(fast.statistic > 0, slow.statistic > 0);
  }
  EXPECT_EQ(agree, 1000);
}

TEST(DCriterion, TieAtEqualMeans) {
  const Matrix x = column({0, 2}), y = column({-1, 3});
  EXPECT_EQ(d_criterion_det(x, y, vec({1.0})).statistic, 0.0);
  EXPECT_EQ(d_criterion_det(x, y, vec({1.0})).label, Population::Pi1);
  const auto s = fit(x, y, true);
  EXPECT_EQ(d_criterion(s, vec({1.0})).statistic, 0.0);
  EXPECT_EQ(d_criterion(s, vec({1.0})).label, Population::Pi1);
}

TEST(DCriterion, AffineInvariance) {
  Rng rng = make_stream(8, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = gaussian(15, 4, rng), y = gaussian(12, 4, rng, 0.7);
    const Matrix z = gaussian(5, 4, rng, 0.3);
    const Matrix t = gaussian(4, 4, rng) + 3.0 * Matrix::Identity(4, 4);
    const Vector c = Vector::LinSpaced(4, -3, 5);
    const Vector s1 = d_statistics(fit(x, y, true), z);
    const auto moved = [&](const Matrix& m) { return Matrix((m * t.transpose()).rowwise() + c.transpose()); };
    const Vector s2 = d_statistics(fit(moved(x), moved(y), true), moved(z));
    EXPECT_LE((s1 - s2).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + s1.cwiseAbs().maxCoeff()));
  }
}

TEST(TCriterion, Examples) {
  // n1 = n2, xbar = 0, ybar = (2, 0, 0).
  const Matrix x = (Matrix(2, 3) << -1, 0, 0, 1, 0, 0).finished();
  const Matrix y = (Matrix(2, 3) << 1, 0, 0, 3, 0, 0).finished();
  const auto s = fit(x, y, false);
  EXPECT_EQ(t_criterion(s, vec({0.5, 0, 0})).label, Population::Pi1);
  const auto tie = t_criterion(s, vec({1.0, 4.0, -2.0}));
  EXPECT_EQ(tie.statistic, 0.0);
  EXPECT_EQ(tie.label, Population::Pi1);

  const auto w = fit(Matrix::Zero(10, 1), Matrix::Constant(1000, 1, 2.0), false);
  const auto d = t_criterion(w, vec({1.0}));
  EXPECT_NEAR(d.statistic, 10.0 / 11.0 - 1000.0 / 1001.0, 1e-15);
  EXPECT_EQ(d.label, Population::Pi1);
}

TEST(TCriterion, OrthogonalInvariance) {
  Rng rng = make_stream(9, 0);
  const Matrix x = gaussian(8, 5, rng), y = gaussian(9, 5, rng, 0.4), z = gaussian(6, 5, rng, 0.2);
  const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian(5, 5, rng)).householderQ();
  const Vector s1 = t_statistics(fit(x, y, false), z);
  const Vector s2 = t_statistics(fit(x * q.transpose(), y * q.transpose(), false), z * q.transpose());
  EXPECT_LE((s1 - s2).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Classifiers, TranslationInvariance) {
  Rng rng = make_stream(10, 0);
  const Matrix x = gaussian(12, 3, rng), y = gaussian(12, 3, rng, 0.8), z = gaussian(20, 3, rng, 0.4);
  const Vector c = vec({100.0, -7.0, 3.5});
  const auto shift = [&](const Matrix& m) { return Matrix(m.rowwise() + c.transpose()); };
  const auto a = fit(x, y, true), b = fit(shift(x), shift(y), true);
  const Vector va = pooled_variances(a), vb = pooled_variances(b);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const Vector zi = z.row(i).transpose(), zs = shift(z).row(i).transpose();
    EXPECT_EQ(d_criterion(a, zi).label, d_criterion(b, zs).label);
    EXPECT_EQ(t_criterion(a, zi).label, t_criterion(b, zs).label);
    EXPECT_EQ(naive_bayes(a, va, zi).label, naive_bayes(b, vb, zs).label);
  }
}

TEST(Classifiers, SwappingGroupsFlipsDecisions) {
  Rng rng = make_stream(11, 0);
  const Matrix x = gaussian(10, 4, rng), y = gaussian(10, 4, rng, 0.5), z = gaussian(50, 4, rng, 0.25);
  const auto a = fit(x, y, true), b = fit(y, x, true);
  const Vector d1 = d_statistics(a, z), d2 = d_statistics(b, z);
  const Vector t1 = t_statistics(a, z), t2 = t_statistics(b, z);
  const Vector n1 = nb_statistics(a, pooled_variances(a), z), n2 = nb_statistics(b, pooled_variances(b), z);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    EXPECT_NE(decide(d1[i]).label, decide(d2[i]).label);
    EXPECT_NE(decide(t1[i]).label, decide(t2[i]).label);
    EXPECT_NE(decide(n1[i]).label, decide(n2[i]).label);
  }
}

TEST(NaiveBayes, Examples) {
  const Matrix x = (Matrix(2, 2) << 0, -2, 2, 2).finished();   // mean (1, 0)
  const Matrix y = (Matrix(2, 2) << -2, -1, 0, 1).finished();  // mean (-1, 0)
  const auto s = fit(x, y, false);
  const auto d = naive_bayes(s, vec({1.0, 4.0}), vec({0.2, 5.0}));
  EXPECT_NEAR(d.statistic, -0.4, 1e-15);
  EXPECT_EQ(d.label, Population::Pi1);
  EXPECT_EQ(naive_bayes(s, vec({1.0, 4.0}), s.mean_x()).label, Population::Pi1);
  EXPECT_THROW(naive_bayes(s, vec({1.0, 0.0}), s.mean_x()), ValidationError);
}

TEST(NaiveBayes, UnitVariancesMatchTCriterionForEqualSizes) {
  Rng rng = make_stream(12, 0);
  const auto s = fit(gaussian(9, 6, rng), gaussian(9, 6, rng, 0.3), false);
  const Matrix z = gaussian(100, 6, rng, 0.15);
  const Vector nb = nb_statistics(s, Vector::Ones(6), z);
  const Vector t = t_statistics(s, z);
  for (Eigen::Index i = 0; i < z.rows(); ++i) EXPECT_EQ(decide(nb[i]).label, decide(t[i]).label);
}

TEST(NaiveBayes, PooledVarianceUsesScatterDiagonal) {
  const auto s = fit(column({0, 2}), column({1, 3}), false);
  EXPECT_DOUBLE_EQ(pooled_variances(s)[0], 2.0);
}

TEST(Oracle, Examples) {
  const auto sigma = CovarianceSpec::equal_corr(3, 0.4);
  const Vector mu1 = Vector::Zero(3), mu2 = vec({1, 2, 0});
  EXPECT_EQ(oracle_fisher(mu1, mu2, sigma, mu1).label, Population::Pi1);
  EXPECT_EQ(oracle_fisher(mu1, mu2, sigma, mu2).label, Population::Pi2);
  const auto id = CovarianceSpec::identity(2);
  EXPECT_EQ(oracle_fisher(vec({0, 0}), vec({2, 0}), id, vec({0.9, 7})).label, Population::Pi1);
  EXPECT_EQ(oracle_fisher(vec({0, 0}), vec({2, 0}), id, vec({1.1, -7})).label, Population::Pi2);
}

TEST(Oracle, ErrorRateMatchesHalfDistance) {
  // Identity Sigma, Delta^2 = 10: Phi(-sqrt(10)/2) = 5.69%.
  const int p = 20;
  const Vector mu1 = Vector::Zero(p);
  Vector mu2 = Vector::Zero(p);
  mu2.head(10).setOnes();
  const OracleRule rule(mu1, mu2, CovarianceSpec::identity(p));
  Rng rng = make_stream(13, 0);
  const Matrix z = gaussian(200000, p, rng);
  const double err = static_cast<double>((rule.statistics(z).array() > 0).count()) / z.rows();
  EXPECT_NEAR(oracle_misclass(10.0), 0.0569231490033290, 1e-14);
  EXPECT_NEAR(err, 0.0569231490033290, 0.002);
}
