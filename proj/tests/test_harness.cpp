#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hdc/format.hpp"
#include "hdc/harness.hpp"

using namespace hdc;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.id = "small";
  c.p = 20;
  c.n1 = c.n2 = 30;
  c.m1 = c.m2 = 40;
  c.reps = 25;
  c.master_seed = 123;
  c.covariance = CovarianceSpec::equal_corr(20, 0.3);
  c.scenario = {ScenarioSpec::Kind::Delocalized, 5, true, 0.0};
  c.classifiers = {ClassifierId::D, ClassifierId::T, ClassifierId::NB, ClassifierId::Oracle};
  c.theory_overlay = true;
  return c;
}

ExperimentConfig flat_config(int p, double delta2, int n, int m) {
  ExperimentConfig c;
  c.p = p;
  c.n1 = c.n2 = n;
  c.m1 = c.m2 = m;
  c.reps = 1;
  c.master_seed = 5;
  c.covariance = CovarianceSpec::identity(p);
  c.scenario = {ScenarioSpec::Kind::Flat, 1, false, delta2};
  c.classifiers = {ClassifierId::D, ClassifierId::T, ClassifierId::NB, ClassifierId::Oracle};
  return c;
}

LabeledDataset toy(const std::vector<std::vector<double>>& rows, const std::vector<Population>& labels) {
  LabeledDataset ds;
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) ds.features(i, j) = rows[i][j];
  ds.labels = labels;
  ds.label_names = {"a", "b"};
  return ds;
}

}  // namespace

TEST(Validate, RejectsBadConfigs) {
  auto c = small_config();
  c.p = 60;
  c.covariance = CovarianceSpec::equal_corr(60, 0.3);
  try {
    validate(c);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("dimension to be smaller than the sample size"), std::string::npos);
  }
  c = small_config();
  c.m1 = 1;
  EXPECT_THROW(validate(c), ValidationError);
  c = small_config();
  c.covariance = CovarianceSpec::identity(19);
  EXPECT_THROW(validate(c), ValidationError);
  c = small_config();
  c.classifiers = {ClassifierId::T, ClassifierId::T};
  EXPECT_THROW(validate(c), ValidationError);
  c = small_config();
  c.scenario.n0 = 21;
  EXPECT_THROW(validate(c), ValidationError);
  EXPECT_THROW(parse_classifier("lda"), ValidationError);
  EXPECT_EQ(parse_classifier("D-criterion"), ClassifierId::D);
}

TEST(Replication, SeparatedPopulationsGiveZeroError) {
  auto c = flat_config(5, 50000.0, 20, 100);  // delta = 100 * 1_5
  const auto out = run_replication(c, 0);
  for (double e : out.error_pct) EXPECT_EQ(e, 0.0);
}

TEST(Replication, EqualPopulationsGiveChance) {
  auto c = flat_config(10, 0.0, 50, 250);
  c.reps = 200;
  const auto r = run_experiment(c);
  for (const auto& cr : r.classifiers) {
    EXPECT_GE(cr.median_error_pct, 45.0) << to_string(cr.id);
    EXPECT_LE(cr.median_error_pct, 55.0) << to_string(cr.id);
  }
}

TEST(Replication, EqualCorrelationRowZeroSingleReplication) {
  ExperimentConfig c = correlation_experiment(CovarianceSpec::equal_corr(125, 0.0), InnovationSpec::standard_normal(),
                                              {ClassifierId::D}, 1, 2024);
  const auto out = run_replication(c, 0);
  EXPECT_NEAR(out.error_pct[0], 9.6, 4.5);
}

TEST(Replication, ErrorsCarryTheReplicationIndex) {
  try {
    detail::rethrow_tagged(ConditioningError("pooled scatter matrix is ill-conditioned"), 17);
  } catch (const ConditioningError& e) {
    EXPECT_EQ(std::string(e.what()), "replication 17: pooled scatter matrix is ill-conditioned");
  }
}

TEST(Experiment, SingleReplication) {
  auto c = small_config();
  c.reps = 1;
  const auto r = run_experiment(c);
  const auto single = run_replication(c, 0);
  for (std::size_t k = 0; k < c.classifiers.size(); ++k) {
    EXPECT_EQ(r.classifiers[k].median_error_pct, single.error_pct[k]);
    EXPECT_EQ(r.classifiers[k].se_pct, 0.0);
    EXPECT_FALSE(r.classifiers[k].se_defined);
  }
}

TEST(Experiment, AggregatesAndBounds) {
  const auto c = small_config();
  const auto r = run_experiment(c);
  ASSERT_EQ(r.classifiers.size(), 4u);
  for (const auto& cr : r.classifiers) {
    ASSERT_EQ(cr.per_rep_errors.size(), 25u);
    const auto [lo, hi] = std::minmax_element(cr.per_rep_errors.begin(), cr.per_rep_errors.end());
    EXPECT_GE(*lo, 0.0);
    EXPECT_LE(*hi, 100.0);
    EXPECT_GE(cr.median_error_pct, *lo);
    EXPECT_LE(cr.median_error_pct, *hi);
    EXPECT_GT(cr.se_pct, 0.0);
  }
  EXPECT_TRUE(r.at(ClassifierId::D).theory_pred_pct.has_value());
  EXPECT_TRUE(r.at(ClassifierId::T).theory_pred_pct.has_value());
  EXPECT_FALSE(r.at(ClassifierId::NB).theory_pred_pct.has_value());
  EXPECT_TRUE(std::isnan(r.theory(ClassifierId::T, "full")));  // equal correlation is not diagonal
  EXPECT_GT(r.theory(ClassifierId::Oracle, "phi_half_delta"), 0.0);
}

TEST(Experiment, MedianOfEvenCountAveragesMiddlePair) {
  EXPECT_EQ(detail::median({4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_EQ(detail::median({5.0, 1.0, 3.0}), 3.0);
  EXPECT_NEAR(detail::sample_sd({1.0, 2.0, 3.0, 4.0}), std::sqrt(5.0 / 3.0), 1e-15);
}

TEST(Experiment, DeterministicAcrossWorkerCounts) {
  const auto c = small_config();
  const auto a = run_experiment(c, {1});
  const auto b = run_experiment(c, {3});
  const auto d = run_experiment(c, {8});
  for (std::size_t k = 0; k < a.classifiers.size(); ++k) {
    EXPECT_EQ(a.classifiers[k].per_rep_errors, b.classifiers[k].per_rep_errors);
    EXPECT_EQ(a.classifiers[k].per_rep_errors, d.classifiers[k].per_rep_errors);
    ASSERT_EQ(a.classifiers[k].theory.size(), d.classifiers[k].theory.size());
    for (std::size_t j = 0; j < a.classifiers[k].theory.size(); ++j)  // NaN-safe comparison
      EXPECT_EQ(format_double(a.classifiers[k].theory[j].second), format_double(d.classifiers[k].theory[j].second));
  }
}

TEST(Experiment, SeedChangesErrorsButNotTheirLevel) {
  auto c = small_config();
  c.reps = 300;
  c.classifiers = {ClassifierId::T};
  const auto a = run_experiment(c);
  c.master_seed = 999;
  const auto b = run_experiment(c);
  EXPECT_NE(a.classifiers[0].per_rep_errors, b.classifiers[0].per_rep_errors);
  const double se = a.classifiers[0].se_pct;
  EXPECT_LE(std::abs(a.classifiers[0].mean_error_pct - b.classifiers[0].mean_error_pct), 5 * se / std::sqrt(300.0));
}

TEST(Experiment, FixedMeanIsSharedAcrossReplications) {
  auto c = small_config();
  c.scenario.redraw_mu2 = false;
  c.classifiers = {ClassifierId::Oracle};
  c.reps = 4;
  const auto r = run_experiment(c);
  const double first = r.theory(ClassifierId::Oracle, "phi_half_delta");
  const auto rep0 = run_replication(c, 0);
  const auto rep3 = run_replication(c, 3);
  EXPECT_EQ(rep0.theory[0][0], rep3.theory[0][0]);
  EXPECT_EQ(first, rep0.theory[0][0]);
}

TEST(Experiment, LabelSwapSymmetry) {
  // Paired replications: the same draws classified with the populations'
  // roles exchanged must give identical error counts when n1 = n2.
  const int p = 30, n = 40, m = 100;
  const auto spec = CovarianceSpec::ar1(p, 0.5);
  const auto gamma = MixingMatrix::from(spec);
  const std::vector<ClassifierId> ids{ClassifierId::D, ClassifierId::T, ClassifierId::NB, ClassifierId::Oracle};
  int identical = 0;
  for (int rep = 0; rep < 200; ++rep) {
    Rng rng = make_stream(77, static_cast<std::uint64_t>(rep));
    const auto means = make_scenario_means({ScenarioSpec::Kind::Delocalized, 10, true, 0.0}, spec, rng);
    const auto norm = InnovationSpec::standard_normal();
    const Matrix x = sample_population(n, means.mu1, gamma, norm, rng);
    const Matrix y = sample_population(n, means.mu2, gamma, norm, rng);
    const Matrix z1 = sample_population(m, means.mu1, gamma, norm, rng);
    const Matrix z2 = sample_population(m, means.mu2, gamma, norm, rng);
    const OracleRule fwd(means.mu1, means.mu2, spec), bwd(means.mu2, means.mu1, spec);
    const auto a = evaluate_classifiers(ids, fit(x, y, true), z1, z2, &fwd);
    const auto b = evaluate_classifiers(ids, fit(y, x, true), z2, z1, &bwd);
    bool same = true;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const int ea = count_pi1_errors(a[k].on_pi1) + count_pi2_errors(a[k].on_pi2);
      const int eb = count_pi1_errors(b[k].on_pi1) + count_pi2_errors(b[k].on_pi2);
      same = same && ea == eb;
    }
    identical += same;
  }
  EXPECT_EQ(identical, 200);
}

TEST(Experiment, OracleErrorFallsWithCorrelation) {
  std::vector<double> medians;
  for (std::size_t i = 0; i < reference::kRhoGrid.size(); ++i) {
    auto c = correlation_experiment(CovarianceSpec::equal_corr(125, reference::kRhoGrid[i]),
                                    InnovationSpec::standard_normal(), {ClassifierId::Oracle}, 60, 500 + i);
    medians.push_back(run_experiment(c).classifiers[0].median_error_pct);
  }
  int inversions = 0;
  for (std::size_t i = 1; i < medians.size(); ++i) {
    if (medians[i] > medians[i - 1]) {
      ++inversions;
      EXPECT_LE(medians[i] - medians[i - 1], 0.3);
    }
  }
  EXPECT_LE(inversions, 1);
  EXPECT_NEAR(medians.front(), 5.6, 1.0);
  EXPECT_LE(medians.back(), 0.2);
}

TEST(TStatistics, DeterministicDraws) {
  const auto pair = PopulationPair::make({Vector::Zero(4), Vector::Ones(4)}, CovarianceSpec::identity(4),
                                         InnovationSpec::gamma_shifted(), InnovationSpec::gamma_shifted());
  const auto a = simulate_t_statistics(pair, 5, 6, 500, 3, {1});
  const auto b = simulate_t_statistics(pair, 5, 6, 500, 3, {4});
  EXPECT_EQ(a, b);
}

TEST(ClassifyDataset, SeparatedToyHasNoErrors) {
  const auto ds = toy({{0, 0}, {0.2, 0.1}, {-0.1, 0.3}, {5, 5}, {5.2, 4.9}, {4.8, 5.1}},
                      {Population::Pi1, Population::Pi1, Population::Pi1, Population::Pi2, Population::Pi2,
                       Population::Pi2});
  for (const auto& e : classify_dataset(ds, ds, {ClassifierId::T, ClassifierId::NB, ClassifierId::D})) {
    EXPECT_EQ(e.train_errors, 0) << to_string(e.id);
    EXPECT_EQ(e.test_errors, 0) << to_string(e.id);
    EXPECT_EQ(e.features_used, 2);
  }
}

TEST(ClassifyDataset, Preconditions) {
  const auto ds = toy({{0, 0}, {0.2, 0.1}, {5, 5}, {5.2, 4.9}},
                      {Population::Pi1, Population::Pi1, Population::Pi2, Population::Pi2});
  auto other = ds;
  other.label_names = {"x", "y"};
  EXPECT_THROW(classify_dataset(ds, other, {ClassifierId::T}), ValidationError);
  auto narrow = toy({{0}, {0.2}, {5}, {5.2}}, ds.labels);
  EXPECT_THROW(classify_dataset(ds, narrow, {ClassifierId::T}), ValidationError);
  EXPECT_THROW(classify_dataset(ds, ds, {ClassifierId::Oracle}), ValidationError);
  // p = 2 >= n - 2 = 2: D-criterion cannot be fitted.
  EXPECT_THROW(classify_dataset(ds, ds, {ClassifierId::D}), SingularityError);
}

TEST(Reproduce, TargetsAndScale) {
  EXPECT_EQ(parse_target("fig5"), ReproduceTarget::Fig5);
  EXPECT_THROW(parse_target("table9"), ValidationError);
  EXPECT_THROW(reproduce(ReproduceTarget::Table1, 0.01), ValidationError);   // 10 replications
  EXPECT_THROW(reproduce(ReproduceTarget::Fig1, 0.001), ValidationError);    // 10 replications
  EXPECT_THROW(reproduce(ReproduceTarget::Table4, 1.5), ValidationError);
}

TEST(Reproduce, Table4Grid) {
  const auto rep = reproduce(ReproduceTarget::Table4, 0.05, {});
  EXPECT_EQ(rep.reps, 50);
  ASSERT_EQ(rep.tables.size(), 1u);
  const auto& t = rep.tables[0];
  ASSERT_EQ(t.rows.size(), 9u);
  EXPECT_EQ(t.columns[1], "t_median");
  EXPECT_EQ(t.rows.front()[0], 100.0);
  EXPECT_EQ(t.rows.back()[0], 500.0);
  EXPECT_EQ(t.rows.front()[3], 13.00);
  EXPECT_EQ(t.rows.back()[4], 0.89);
  EXPECT_NEAR(t.rows.front()[1], 13.0, 2.0);
  EXPECT_EQ(rep.experiments.size(), 9u);
}
