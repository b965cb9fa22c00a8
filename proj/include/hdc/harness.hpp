#pragma once

// Replicated Monte Carlo classification experiments.
//
// Replication r of an experiment draws everything from the stream
// make_stream(master_seed, r), in a fixed order: mu2 (delocalized scenario
// with redraw), training X (n1) and Y (n2), then test points from Pi1 (m1) and
// Pi2 (m2). Results are therefore independent of the worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hdc/classify.hpp"
#include "hdc/dataset.hpp"
#include "hdc/errors.hpp"
#include "hdc/model.hpp"
#include "hdc/reference_tables.hpp"
#include "hdc/rng.hpp"
#include "hdc/theory.hpp"

namespace hdc {

enum class ClassifierId { D, T, NB, Oracle };

inline std::string to_string(ClassifierId id) {
  switch (id) {
    case ClassifierId::D: return "d_criterion";
    case ClassifierId::T: return "t_criterion";
    case ClassifierId::NB: return "naive_bayes";
    default: return "oracle";
  }
}

inline ClassifierId parse_classifier(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  if (name == "d" || name == "d_criterion" || name == "d-criterion") return ClassifierId::D;
  if (name == "t" || name == "t_criterion" || name == "t-criterion") return ClassifierId::T;
  if (name == "nb" || name == "naive_bayes") return ClassifierId::NB;
  if (name == "oracle") return ClassifierId::Oracle;
  throw ValidationError("unknown classifier '" + name + "' (expected d, t, nb or oracle)");
}

struct ExperimentConfig {
  std::string id = "experiment";
  int p = 1;
  int n1 = 2;
  int n2 = 2;
  int m1 = 2;
  int m2 = 2;
  int reps = 1000;
  std::uint64_t master_seed = 0;
  CovarianceSpec covariance = CovarianceSpec::identity(1);
  ScenarioSpec scenario;
  InnovationSpec innovation1 = InnovationSpec::standard_normal();
  InnovationSpec innovation2 = InnovationSpec::standard_normal();
  std::vector<ClassifierId> classifiers{ClassifierId::T};
  bool theory_overlay = false;

  bool uses(ClassifierId id) const { return std::find(classifiers.begin(), classifiers.end(), id) != classifiers.end(); }
};

inline std::string d_dimension_limit_message(int p, int n1, int n2) {
  return "D-criterion needs the dimension to be smaller than the sample size: p = " + std::to_string(p) +
         " but n1 + n2 - 2 = " + std::to_string(n1 + n2 - 2);
}

inline void validate(const ExperimentConfig& c) {
  if (c.p < 1) throw ValidationError("p must be >= 1");
  if (c.n1 < 2 || c.n2 < 2) throw ValidationError("training sizes n1, n2 must be >= 2");
  if (c.m1 < 2 || c.m2 < 2) throw ValidationError("test sizes m1, m2 must be >= 2");
  if (c.reps < 1) throw ValidationError("reps must be >= 1");
  if (c.covariance.dim() != c.p) throw ValidationError("covariance dimension does not match p");
  if (c.classifiers.empty()) throw ValidationError("no classifiers requested");
  for (std::size_t i = 0; i < c.classifiers.size(); ++i)
    for (std::size_t j = i + 1; j < c.classifiers.size(); ++j)
      if (c.classifiers[i] == c.classifiers[j])
        throw ValidationError("classifier '" + to_string(c.classifiers[i]) + "' listed twice");
  if (c.uses(ClassifierId::D) && c.p >= c.n1 + c.n2 - 2)
    throw ValidationError(d_dimension_limit_message(c.p, c.n1, c.n2));
  if (c.scenario.kind != ScenarioSpec::Kind::Flat && (c.scenario.n0 < 1 || c.scenario.n0 > c.p))
    throw ValidationError("scenario n0 must lie in [1, p]");
  if (c.scenario.kind == ScenarioSpec::Kind::Delocalized) beta_squared(c.covariance);
  if (c.scenario.kind == ScenarioSpec::Kind::Flat && !(c.scenario.delta2 >= 0.0))
    throw ValidationError("flat scenario needs delta2 >= 0");
}

/// Names of the theory predictions attached to each classifier when the
/// overlay is on. All are misclassification probabilities P(2|1).
inline std::vector<std::string> theory_names(ClassifierId id) {
  switch (id) {
    case ClassifierId::D: return {"phi_theta1", "phi_theta2"};
    case ClassifierId::T: return {"v1", "v2", "v3", "full"};
    case ClassifierId::Oracle: return {"phi_half_delta"};
    default: return {};
  }
}

struct ReplicationOutcome {
  std::vector<double> error_pct;            // per classifier, config order
  std::vector<double> p21;                  // fraction of Pi1 test points sent to Pi2
  std::vector<std::vector<double>> theory;  // per classifier, aligned with theory_names()
};

namespace detail {

template <class E>
[[noreturn]] void rethrow_tagged(const E& e, std::uint64_t rep) {
  throw E("replication " + std::to_string(rep) + ": " + e.what());
}

inline void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  const auto hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(workers > 0 ? workers : static_cast<int>(hw)));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

inline double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace detail

struct ClassifierStats {
  Vector on_pi1;  // statistics for the Pi1 test points
  Vector on_pi2;
};

/// Statistics of each requested classifier on the two test samples.
/// `oracle` (built from the true parameters) is required for the oracle.
inline std::vector<ClassifierStats> evaluate_classifiers(const std::vector<ClassifierId>& ids,
                                                         const TrainedStats& stats, const Matrix& z1,
                                                         const Matrix& z2, const OracleRule* oracle) {
  std::vector<ClassifierStats> out;
  out.reserve(ids.size());
  std::optional<Vector> nb_var;
  for (auto id : ids) {
    switch (id) {
      case ClassifierId::D: out.push_back({d_statistics(stats, z1), d_statistics(stats, z2)}); break;
      case ClassifierId::T: out.push_back({t_statistics(stats, z1), t_statistics(stats, z2)}); break;
      case ClassifierId::NB:
        if (!nb_var) nb_var = pooled_variances(stats);
        out.push_back({nb_statistics(stats, *nb_var, z1), nb_statistics(stats, *nb_var, z2)});
        break;
      case ClassifierId::Oracle:
        if (!oracle) throw ValidationError("the oracle classifier needs the true population parameters");
        out.push_back({oracle->statistics(z1), oracle->statistics(z2)});
        break;
    }
  }
  return out;
}

// Pi1 points are wrong when statistic > 0, Pi2 points when statistic <= 0.
inline int count_pi1_errors(const Vector& s) { return static_cast<int>((s.array() > 0.0).count()); }
inline int count_pi2_errors(const Vector& s) { return static_cast<int>((s.array() <= 0.0).count()); }

/// Validated experiment with the per-experiment constants precomputed.
class ExperimentPlan {
public:
  explicit ExperimentPlan(ExperimentConfig config)
      : cfg_(std::move(config)), gamma_(MixingMatrix::from((validate(cfg_), cfg_.covariance))) {
    if (cfg_.scenario.kind != ScenarioSpec::Kind::Delocalized || !cfg_.scenario.redraw_mu2) {
      Rng rng = make_stream(cfg_.master_seed, kFixedMeanStream);
      fixed_means_ = make_scenario_means(cfg_.scenario, cfg_.covariance, rng);
    }
    if (cfg_.theory_overlay && cfg_.uses(ClassifierId::T)) {
      sigma_ = build_covariance(cfg_.covariance);
      trace_sigma2_ = sigma_.squaredNorm();
    }
  }

  const ExperimentConfig& config() const noexcept { return cfg_; }

  ReplicationOutcome run_replication(std::uint64_t rep) const {
    try {
      return run(rep);
    } catch (const ConditioningError& e) {
      detail::rethrow_tagged(e, rep);
    } catch (const SingularityError& e) {
      detail::rethrow_tagged(e, rep);
    } catch (const ValidationError& e) {
      detail::rethrow_tagged(e, rep);
    }
  }

private:
  ReplicationOutcome run(std::uint64_t rep) const {
    const auto& c = cfg_;
    Rng rng = make_stream(c.master_seed, rep);
    MeanPair means = fixed_means_ ? *fixed_means_ : make_scenario_means(c.scenario, c.covariance, rng);
    const Matrix x = sample_population(c.n1, means.mu1, gamma_, c.innovation1, rng);
    const Matrix y = sample_population(c.n2, means.mu2, gamma_, c.innovation2, rng);
    const Matrix z1 = sample_population(c.m1, means.mu1, gamma_, c.innovation1, rng);
    const Matrix z2 = sample_population(c.m2, means.mu2, gamma_, c.innovation2, rng);

    const TrainedStats stats = fit(x, y, c.uses(ClassifierId::D));
    std::optional<OracleRule> oracle;
    if (c.uses(ClassifierId::Oracle)) oracle.emplace(means.mu1, means.mu2, c.covariance);
    const auto evals = evaluate_classifiers(c.classifiers, stats, z1, z2, oracle ? &*oracle : nullptr);

    ReplicationOutcome out;
    for (const auto& e : evals) {
      const int e1 = count_pi1_errors(e.on_pi1);
      const int e2 = count_pi2_errors(e.on_pi2);
      out.error_pct.push_back(100.0 * (e1 + e2) / (c.m1 + c.m2));
      out.p21.push_back(static_cast<double>(e1) / c.m1);
    }
    if (c.theory_overlay) {
      const Vector delta = means.mu2 - means.mu1;
      const double delta2 = mahalanobis(delta, c.covariance);
      for (auto id : c.classifiers) out.theory.push_back(theory_for(id, delta, delta2));
    }
    return out;
  }

  std::vector<double> theory_for(ClassifierId id, const Vector& delta, double delta2) const {
    const auto& c = cfg_;
    switch (id) {
      case ClassifierId::D: {
        const auto in = TheoryInputsD::from_design(c.p, c.n1, c.n2, delta2);
        return {normal_cdf(theta1(in)), normal_cdf(theta2(in.y, delta2))};
      }
      case ClassifierId::T: {
        TVarianceTerms t;
        t.trace_sigma2 = trace_sigma2_;
        t.ones_gamma3_delta = gamma_.cube_apply(delta).sum();
        t.delta_sigma_delta = delta.dot(sigma_ * delta);
        t.delta_norm2 = delta.squaredNorm();
        t.sigma_diagonal = c.covariance.is_diagonal();
        const auto mx = InnovationMoments::of(c.innovation1);
        const auto my = InnovationMoments::of(c.innovation2);
        std::vector<double> v;
        for (auto variant : {VarianceVariant::V1, VarianceVariant::V2, VarianceVariant::V3})
          v.push_back(t_misclass(t, c.n1, c.n2, mx, my, variant));
        v.push_back(t.sigma_diagonal ? t_misclass(t, c.n1, c.n2, mx, my, VarianceVariant::Full)
                                     : std::numeric_limits<double>::quiet_NaN());
        return v;
      }
      case ClassifierId::Oracle: return {oracle_misclass(delta2)};
      default: return {};
    }
  }

  ExperimentConfig cfg_;
  MixingMatrix gamma_;
  std::optional<MeanPair> fixed_means_;
  Matrix sigma_;
  double trace_sigma2_ = 0.0;
};

inline ReplicationOutcome run_replication(const ExperimentConfig& config, std::uint64_t rep_index) {
  return ExperimentPlan(config).run_replication(rep_index);
}

struct ClassifierResult {
  ClassifierId id = ClassifierId::T;
  double median_error_pct = 0.0;
  double se_pct = 0.0;     // standard deviation of per-replication errors
  bool se_defined = true;  // false when reps == 1 (se reported as 0)
  double mean_error_pct = 0.0;
  double mean_p21 = 0.0;  // empirical P(2|1), averaged over replications
  std::vector<double> per_rep_errors;
  std::optional<double> theory_pred_pct;               // Phi(theta1) for D, V1 for T
  std::vector<std::pair<std::string, double>> theory;  // all overlay values, mean over replications
};

struct ExperimentResult {
  std::string experiment_id;
  int reps = 0;
  std::uint64_t master_seed = 0;
  std::vector<ClassifierResult> classifiers;

  const ClassifierResult& at(ClassifierId id) const {
    for (const auto& c : classifiers)
      if (c.id == id) return c;
    throw ValidationError("classifier '" + to_string(id) + "' was not part of experiment " + experiment_id);
  }

  double theory(ClassifierId id, const std::string& name) const {
    for (const auto& [k, v] : at(id).theory)
      if (k == name) return v;
    return std::numeric_limits<double>::quiet_NaN();
  }
};

struct RunOptions {
  int workers = 0;  // 0: one per hardware thread
};

inline ExperimentResult aggregate(const ExperimentConfig& c, const std::vector<ReplicationOutcome>& outcomes) {
  ExperimentResult r;
  r.experiment_id = c.id;
  r.reps = static_cast<int>(outcomes.size());
  r.master_seed = c.master_seed;
  for (std::size_t k = 0; k < c.classifiers.size(); ++k) {
    ClassifierResult cr;
    cr.id = c.classifiers[k];
    double p21 = 0.0;
    for (const auto& o : outcomes) {
      cr.per_rep_errors.push_back(o.error_pct[k]);
      p21 += o.p21[k];
    }
    cr.median_error_pct = detail::median(cr.per_rep_errors);
    cr.se_defined = outcomes.size() > 1;
    cr.se_pct = detail::sample_sd(cr.per_rep_errors);
    cr.mean_error_pct = std::accumulate(cr.per_rep_errors.begin(), cr.per_rep_errors.end(), 0.0) / r.reps;
    cr.mean_p21 = p21 / r.reps;
    if (c.theory_overlay) {
      const auto names = theory_names(cr.id);
      for (std::size_t j = 0; j < names.size(); ++j) {
        double sum = 0.0;
        for (const auto& o : outcomes) sum += o.theory[k][j];
        cr.theory.emplace_back(names[j], sum / r.reps);
      }
      if (cr.id == ClassifierId::D || cr.id == ClassifierId::T) cr.theory_pred_pct = 100.0 * cr.theory.front().second;
    }
    r.classifiers.push_back(std::move(cr));
  }
  return r;
}

/// Runs all replications on a worker pool and aggregates them in replication
/// order, so the result is bit-identical for any worker count.
inline ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& opts = {}) {
  const ExperimentPlan plan(config);
  std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(config.reps));
  detail::parallel_for(outcomes.size(), opts.workers, [&](std::size_t r) { outcomes[r] = plan.run_replication(r); });
  return aggregate(config, outcomes);
}

/// Draws of the T statistic a1|z - xbar|^2 - a2|z - ybar|^2 with z from Pi1
/// and fresh training samples per draw.
inline std::vector<double> simulate_t_statistics(const PopulationPair& pair, int n1, int n2, int draws,
                                                 std::uint64_t seed, const RunOptions& opts = {}) {
  std::vector<double> out(static_cast<std::size_t>(draws));
  detail::parallel_for(out.size(), opts.workers, [&](std::size_t d) {
    Rng rng = make_stream(seed, d);
    const Matrix x = sample_first(n1, pair, rng);
    const Matrix y = sample_second(n2, pair, rng);
    const Matrix z = sample_first(1, pair, rng);
    out[d] = t_statistics(fit(x, y, false), z)[0];
  });
  return out;
}

// ------------------------------------------------------------ real data

struct DatasetErrors {
  ClassifierId id;
  int train_errors;
  int test_errors;
  int train_size;
  int test_size;
  int features_used;
};

/// Fits on `train` and reports re-substitution and test error counts.
inline std::vector<DatasetErrors> classify_dataset(const LabeledDataset& train, const LabeledDataset& test,
                                                   const std::vector<ClassifierId>& ids) {
  if (train.label_names.size() != 2 || test.label_names.size() != 2)
    throw ValidationError("datasets must have exactly two labels");
  if (train.label_names != test.label_names)
    throw ValidationError("training and test label sets differ (" + train.label_names[0] + "/" +
                          train.label_names[1] + " vs " + test.label_names[0] + "/" + test.label_names[1] + ")");
  if (train.dim() != test.dim())
    throw ValidationError("feature dimensions differ: train has " + std::to_string(train.dim()) + ", test has " +
                          std::to_string(test.dim()));
  for (auto id : ids)
    if (id == ClassifierId::Oracle) throw ValidationError("the oracle classifier needs true parameters, not data");
  const bool need_d = std::find(ids.begin(), ids.end(), ClassifierId::D) != ids.end();
  const Matrix x = train.group(Population::Pi1);
  const Matrix y = train.group(Population::Pi2);
  if (x.rows() < 2 || y.rows() < 2) throw ValidationError("each training class needs at least 2 samples");
  const TrainedStats stats = fit(x, y, need_d);

  auto split = [](const LabeledDataset& ds) {
    return std::pair{ds.group(Population::Pi1), ds.group(Population::Pi2)};
  };
  const auto [tr1, tr2] = split(train);
  const auto [te1, te2] = split(test);
  const auto on_train = evaluate_classifiers(ids, stats, tr1, tr2, nullptr);
  const auto on_test = evaluate_classifiers(ids, stats, te1, te2, nullptr);
  std::vector<DatasetErrors> out;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    out.push_back({ids[k], count_pi1_errors(on_train[k].on_pi1) + count_pi2_errors(on_train[k].on_pi2),
                   count_pi1_errors(on_test[k].on_pi1) + count_pi2_errors(on_test[k].on_pi2), train.size(),
                   test.size(), train.dim()});
  }
  return out;
}

// ------------------------------------------------------------ reproduction

enum class ReproduceTarget { Table1, Table2, Table3, Table4, Fig1, Fig2, Fig5 };

inline ReproduceTarget parse_target(const std::string& s) {
  if (s == "table1") return ReproduceTarget::Table1;
  if (s == "table2") return ReproduceTarget::Table2;
  if (s == "table3") return ReproduceTarget::Table3;
  if (s == "table4") return ReproduceTarget::Table4;
  if (s == "fig1") return ReproduceTarget::Fig1;
  if (s == "fig2") return ReproduceTarget::Fig2;
  if (s == "fig5") return ReproduceTarget::Fig5;
  throw ValidationError("unknown reproduction target '" + s + "' (expected table1..table4, fig1, fig2, fig5)");
}

inline std::string to_string(ReproduceTarget t) {
  switch (t) {
    case ReproduceTarget::Table1: return "table1";
    case ReproduceTarget::Table2: return "table2";
    case ReproduceTarget::Table3: return "table3";
    case ReproduceTarget::Table4: return "table4";
    case ReproduceTarget::Fig1: return "fig1";
    case ReproduceTarget::Fig2: return "fig2";
    default: return "fig5";
  }
}

/// Numeric table; NaN marks a missing cell.
struct ReportTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ReproduceReport {
  std::string target;
  int reps = 0;
  std::vector<ReportTable> tables;  // [0] is the side-by-side comparison
  std::vector<ExperimentResult> experiments;
};

struct ReproduceOptions {
  int workers = 0;
  std::uint64_t seed = 20240101;
  std::function<void(const std::string&)> progress;
};

// Replications behind the published tables (not stated; 1000 assumed) and figures.
inline constexpr int kTableReps = 1000;
inline constexpr int kFigureReps = 10000;

namespace detail {

inline int scaled_reps(double scale, int base) {
  if (!(scale > 0.0 && scale <= 1.0)) throw ValidationError("scale must lie in (0, 1]");
  const int reps = static_cast<int>(std::lround(scale * base));
  if (reps < 50)
    throw ValidationError("scale " + std::to_string(scale) + " gives " + std::to_string(reps) +
                          " replications; at least 50 are required");
  return reps;
}

inline std::string fmt_param(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace detail

/// Table 1-3 style experiment: p = 125, n1 = n2 = m1 = m2 = 250, delocalized n0 = 10.
inline ExperimentConfig correlation_experiment(CovarianceSpec sigma, InnovationSpec innovation,
                                               std::vector<ClassifierId> ids, int reps, std::uint64_t seed) {
  ExperimentConfig c;
  c.p = 125;
  c.n1 = c.n2 = c.m1 = c.m2 = 250;
  c.reps = reps;
  c.master_seed = seed;
  c.covariance = std::move(sigma);
  c.scenario = {ScenarioSpec::Kind::Delocalized, 10, true, 0.0};
  c.innovation1 = c.innovation2 = innovation;
  c.classifiers = std::move(ids);
  return c;
}

/// Table 4 style experiment: Sigma = I_500, delocalized n0 = 10, T-criterion.
inline ExperimentConfig identity_t_experiment(int n1, int n2, InnovationSpec innovation, int reps,
                                              std::uint64_t seed) {
  ExperimentConfig c;
  c.p = 500;
  c.n1 = c.m1 = n1;
  c.n2 = c.m2 = n2;
  c.reps = reps;
  c.master_seed = seed;
  c.covariance = CovarianceSpec::identity(500);
  c.scenario = {ScenarioSpec::Kind::Delocalized, 10, true, 0.0};
  c.innovation1 = c.innovation2 = innovation;
  c.classifiers = {ClassifierId::T};
  c.theory_overlay = true;
  return c;
}

/// Figure 1/2 style experiment: Sigma = I, delta = c 1_p with
/// Delta^2 = (4/3) y, y = p / (n1 + n2 - 2), so that tau = 1/2 when n1 = n2.
inline ExperimentConfig flat_d_experiment(int p, int n1, int n2, int reps, std::uint64_t seed) {
  ExperimentConfig c;
  c.p = p;
  c.n1 = c.m1 = n1;
  c.n2 = c.m2 = n2;
  c.reps = reps;
  c.master_seed = seed;
  c.covariance = CovarianceSpec::identity(p);
  const double y = static_cast<double>(p) / (n1 + n2 - 2);
  c.scenario = {ScenarioSpec::Kind::Flat, 1, false, 4.0 / 3.0 * y};
  c.classifiers = {ClassifierId::D};
  c.theory_overlay = true;
  return c;
}

inline ReproduceReport reproduce(ReproduceTarget target, double scale, const ReproduceOptions& opts = {}) {
  using detail::kNaN;
  ReproduceReport rep;
  rep.target = to_string(target);
  const bool figure = target == ReproduceTarget::Fig1 || target == ReproduceTarget::Fig2 ||
                      target == ReproduceTarget::Fig5;
  rep.reps = detail::scaled_reps(scale, figure ? kFigureReps : kTableReps);
  const RunOptions run_opts{opts.workers};
  auto run = [&](ExperimentConfig c) -> const ExperimentResult& {
    if (opts.progress) opts.progress("running " + c.id + " (" + std::to_string(c.reps) + " replications)");
    rep.experiments.push_back(run_experiment(c, run_opts));
    return rep.experiments.back();
  };
  auto cell = [](const ExperimentResult& r, ClassifierId id) {
    const auto& c = r.at(id);
    return std::pair{c.median_error_pct, c.se_pct};
  };

  switch (target) {
    case ReproduceTarget::Table1:
    case ReproduceTarget::Table2: {
      const bool t2 = target == ReproduceTarget::Table2;
      const auto& paper = t2 ? reference::kTable2 : reference::kTable1;
      ReportTable tab{rep.target,
                      {"rho", "d_median", "d_se", "paper_d_median", "paper_d_se", "nb_median", "nb_se",
                       "paper_nb_median", "paper_nb_se", "oracle_median", "oracle_se", "paper_oracle_median",
                       "paper_oracle_se", "t_median", "t_se", "paper_t_median", "paper_t_se",
                       "quoted_road_median", "quoted_sroad1_median", "quoted_sroad2_median"},
                      {}};
      for (std::size_t i = 0; i < reference::kRhoGrid.size(); ++i) {
        const double rho = reference::kRhoGrid[i];
        auto c = correlation_experiment(CovarianceSpec::equal_corr(125, rho),
                                        t2 ? InnovationSpec::student_t(7) : InnovationSpec::standard_normal(),
                                        {ClassifierId::D, ClassifierId::NB, ClassifierId::Oracle, ClassifierId::T},
                                        rep.reps, opts.seed + i);
        c.id = rep.target + "_rho" + detail::fmt_param(rho);
        const auto& r = run(c);
        const auto& pr = paper[i];
        const auto [dm, ds] = cell(r, ClassifierId::D);
        const auto [nm, ns] = cell(r, ClassifierId::NB);
        const auto [om, os] = cell(r, ClassifierId::Oracle);
        const auto [tm, ts] = cell(r, ClassifierId::T);
        tab.rows.push_back({rho, dm, ds, pr.d.first, pr.d.second, nm, ns, pr.nb.first, pr.nb.second, om, os,
                            pr.oracle.first, pr.oracle.second, tm, ts, pr.t.first, pr.t.second, pr.road.first,
                            pr.sroad1.first, pr.sroad2.first});
      }
      rep.tables.push_back(std::move(tab));
      break;
    }
    case ReproduceTarget::Table3: {
      ReportTable tab{rep.target,
                      {"rho", "d_median", "d_se", "paper_d_median", "paper_d_se", "oracle_median", "oracle_se",
                       "paper_oracle_median", "paper_oracle_se", "t_median", "t_se", "paper_t_median", "paper_t_se",
                       "quoted_road_median", "quoted_sroad1_median", "quoted_sroad2_median"},
                      {}};
      for (std::size_t i = 0; i < reference::kRhoGrid.size(); ++i) {
        const double rho = reference::kRhoGrid[i];
        auto c = correlation_experiment(CovarianceSpec::ar1(125, rho), InnovationSpec::standard_normal(),
                                        {ClassifierId::D, ClassifierId::Oracle, ClassifierId::T}, rep.reps,
                                        opts.seed + i);
        c.id = rep.target + "_rho" + detail::fmt_param(rho);
        const auto& r = run(c);
        const auto& pr = reference::kTable3[i];
        const auto [dm, ds] = cell(r, ClassifierId::D);
        const auto [om, os] = cell(r, ClassifierId::Oracle);
        const auto [tm, ts] = cell(r, ClassifierId::T);
        tab.rows.push_back({rho, dm, ds, pr.d.first, pr.d.second, om, os, pr.oracle.first, pr.oracle.second, tm, ts,
                            pr.t.first, pr.t.second, pr.road.first, pr.sroad1.first, pr.sroad2.first});
      }
      rep.tables.push_back(std::move(tab));
      break;
    }
    case ReproduceTarget::Table4: {
      ReportTable tab{rep.target,
                      {"n", "t_median", "t_se", "paper_t_median", "paper_t_se", "theory_v1_pct", "theory_v2_pct"},
                      {}};
      for (std::size_t i = 0; i < reference::kTable4Sizes.size(); ++i) {
        const int n = reference::kTable4Sizes[i];
        auto c = identity_t_experiment(n, n, InnovationSpec::standard_normal(), rep.reps, opts.seed + i);
        c.id = rep.target + "_n" + std::to_string(n);
        const auto& r = run(c);
        const auto [tm, ts] = cell(r, ClassifierId::T);
        tab.rows.push_back({static_cast<double>(n), tm, ts, reference::kTable4[i].first,
                            reference::kTable4[i].second, 100.0 * r.theory(ClassifierId::T, "v1"),
                            100.0 * r.theory(ClassifierId::T, "v2")});
      }
      rep.tables.push_back(std::move(tab));
      break;
    }
    case ReproduceTarget::Fig1:
    case ReproduceTarget::Fig2: {
      struct Panel {
        std::string name;
        int n1, n2;
      };
      std::vector<Panel> panels;
      if (target == ReproduceTarget::Fig1) panels = {{"fig1", 500, 500}};
      else panels = {{"fig2a", 250, 250}, {"fig2b", 125, 375}};
      const bool with_theta2 = target == ReproduceTarget::Fig1;
      ReportTable summary{rep.target, {"n1", "n2", "p", "x", "phi_theta1", "phi_theta2", "empirical"}, {}};
      for (const auto& panel : panels) {
        ReportTable plot{panel.name, {"x", "phi_theta1"}, {}};
        if (with_theta2) plot.columns.push_back("phi_theta2");
        plot.columns.push_back("empirical");
        for (int p = 50; p <= 450; p += 50) {
          auto c = flat_d_experiment(p, panel.n1, panel.n2, rep.reps, opts.seed + static_cast<std::uint64_t>(p));
          c.id = panel.name + "_p" + std::to_string(p);
          const auto& r = run(c);
          const double x = static_cast<double>(p) / (panel.n1 + panel.n2 - 2);
          const double th1 = r.theory(ClassifierId::D, "phi_theta1");
          const double th2 = r.theory(ClassifierId::D, "phi_theta2");
          const double emp = r.at(ClassifierId::D).mean_p21;
          if (with_theta2) plot.rows.push_back({x, th1, th2, emp});
          else plot.rows.push_back({x, th1, emp});
          summary.rows.push_back({static_cast<double>(panel.n1), static_cast<double>(panel.n2),
                                  static_cast<double>(p), x, th1, th2, emp});
        }
        rep.tables.push_back(std::move(plot));
      }
      rep.tables.insert(rep.tables.begin(), std::move(summary));
      break;
    }
    case ReproduceTarget::Fig5: {
      ReportTable summary{rep.target, {"panel", "n1", "n2", "empirical", "phi_v1", "phi_v2", "phi_v3"}, {}};
      const std::pair<std::string, InnovationSpec> panels[] = {{"fig5_normal", InnovationSpec::standard_normal()},
                                                               {"fig5_gamma", InnovationSpec::gamma_shifted()}};
      for (std::size_t k = 0; k < 2; ++k) {
        ReportTable plot{panels[k].first, {"x", "empirical", "phi_v1", "phi_v2", "phi_v3"}, {}};
        for (int n1 = 50; n1 <= 500; n1 += 50) {
          auto c = identity_t_experiment(n1, n1 + 100, panels[k].second, rep.reps,
                                         opts.seed + 1000 * k + static_cast<std::uint64_t>(n1));
          c.id = panels[k].first + "_n" + std::to_string(n1);
          const auto& r = run(c);
          const double emp = r.at(ClassifierId::T).mean_p21;
          const double v1 = r.theory(ClassifierId::T, "v1");
          const double v2 = r.theory(ClassifierId::T, "v2");
          const double v3 = r.theory(ClassifierId::T, "v3");
          plot.rows.push_back({static_cast<double>(n1), emp, v1, v2, v3});
          summary.rows.push_back({static_cast<double>(k), static_cast<double>(n1), n1 + 100.0, emp, v1, v2, v3});
        }
        rep.tables.push_back(std::move(plot));
      }
      rep.tables.insert(rep.tables.begin(), std::move(summary));
      break;
    }
  }
  (void)detail::kNaN;
  return rep;
}

}  // namespace hdc
