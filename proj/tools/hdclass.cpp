// hdclass: command-line front end for the D/T classification library.
//
// Exit codes: 0 success, 1 validation or usage error, 2 numerical failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hdc/hdc.hpp"

namespace {

constexpr const char* kConfigSchema = R"(Config file (INI):
  [experiment]  p (required), n or n1+n2 (required), seed (required),
                m or m1+m2 (default: training sizes), reps (1000), id,
                theory_overlay (false)
  [covariance]  kind = identity | equal_corr | ar1 | diagonal; rho; sigmas
  [scenario]    kind = delocalized | localized | flat; n0 (10);
                redraw_mu2 (true); delta2 (flat only)
  [innovation]  kind = normal | t | gamma; df; gamma_sign (+1/-1);
                kind1/kind2, df1/df2 per population
  [classifiers] list = d, t, nb, oracle
  [output]      directory ($HDC_OUTPUT_DIR or ./results); formats = csv, json
)";

void print_experiment(const hdc::ExperimentResult& r) {
  std::printf("%s (%d replications)\n", r.experiment_id.c_str(), r.reps);
  std::printf("  %-12s %10s %8s %12s\n", "classifier", "median %", "se", "theory %");
  for (const auto& c : r.classifiers) {
    std::printf("  %-12s %10.2f %8.2f", hdc::to_string(c.id).c_str(), c.median_error_pct, c.se_pct);
    if (c.theory_pred_pct) std::printf(" %12.2f", *c.theory_pred_pct);
    std::printf("\n");
  }
  for (const auto& c : r.classifiers)
    if (!c.se_defined) std::printf("  note: se is undefined for a single replication and reported as 0\n");
}

void print_written(const std::vector<std::string>& files) {
  for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
}

int run_simulate(const std::string& config_path, const std::string& out, int workers) {
  const auto rc = hdc::parse_run_file(config_path);
  const auto result = hdc::run_experiment(rc.experiment, {workers});
  print_experiment(result);
  const std::string dir = !out.empty() ? out : !rc.output.directory.empty() ? rc.output.directory
                                                                            : hdc::default_output_dir();
  print_written(hdc::emit_results({result}, rc.output.formats, dir, rc.experiment.id));
  return 0;
}

int run_theory_d(double y, double lambda, double delta2) {
  const hdc::TheoryInputsD in{y, lambda, delta2};
  const double t1 = hdc::theta1(in);
  const double t2 = hdc::theta2(y, delta2);
  std::printf("theta1      = %.10g\n", t1);
  std::printf("Phi(theta1) = %.10g\n", hdc::normal_cdf(t1));
  std::printf("theta2      = %.10g\n", t2);
  std::printf("Phi(theta2) = %.10g\n", hdc::normal_cdf(t2));
  std::printf("tau         = %.10g\n", hdc::tau(in));
  return 0;
}

int run_theory_t(const std::string& config_path) {
  const auto c = hdc::parse_config(config_path);
  hdc::Rng rng = hdc::make_stream(c.master_seed, hdc::kFixedMeanStream);
  const auto means = hdc::make_scenario_means(c.scenario, c.covariance, rng);
  const auto in = hdc::TheoryInputsT::make(means.mu2 - means.mu1, c.covariance, c.n1, c.n2,
                                           hdc::InnovationMoments::of(c.innovation1),
                                           hdc::InnovationMoments::of(c.innovation2));
  const auto terms = hdc::variance_terms(in);
  std::printf("|delta|^2 = %.10g, delta'Sigma^-1 delta = %.10g\n", terms.delta_norm2,
              hdc::mahalanobis(in.delta, c.covariance));
  if (c.scenario.kind == hdc::ScenarioSpec::Kind::Delocalized)
    std::printf("(delocalized mu2 drawn once from the fixed-mean stream of seed %llu)\n",
                static_cast<unsigned long long>(c.master_seed));
  std::printf("%-8s %16s %16s\n", "variant", "B_p^2", "P(2|1)");
  for (auto v : {hdc::VarianceVariant::V1, hdc::VarianceVariant::V2, hdc::VarianceVariant::V3,
                 hdc::VarianceVariant::Full}) {
    if (v == hdc::VarianceVariant::Full && !terms.sigma_diagonal) {
      std::printf("%-8s %16s %16s\n", "full", "-", "- (needs diagonal Sigma)");
      continue;
    }
    const double var = hdc::t_variance(terms, c.n1, c.n2, in.x, in.y, v);
    const double p21 = hdc::t_misclass(terms, c.n1, c.n2, in.x, in.y, v);
    std::printf("%-8s %16.10g %16.10g\n", hdc::to_string(v).c_str(), var, p21);
  }
  return 0;
}

struct ClassifyArgs {
  std::string train, test, labels, train_labels, test_labels, positive_label;
  std::vector<std::string> classifiers{"t", "nb"};
};

int run_classify(const ClassifyArgs& a) {
  if (!a.labels.empty() && (!a.train_labels.empty() || !a.test_labels.empty()))
    throw hdc::ValidationError("use either --labels or --train-labels/--test-labels, not both");
  if (a.train_labels.empty() != a.test_labels.empty())
    throw hdc::ValidationError("--train-labels and --test-labels must be given together");
  hdc::CsvOptions train_opts;
  if (!a.labels.empty()) train_opts.label_column = a.labels;
  if (!a.train_labels.empty()) train_opts.labels_path = a.train_labels;
  if (!a.positive_label.empty()) train_opts.positive_label = a.positive_label;
  const auto train = hdc::ingest_csv(a.train, train_opts);

  hdc::CsvOptions test_opts;
  if (!a.labels.empty()) test_opts.label_column = a.labels;
  if (!a.test_labels.empty()) test_opts.labels_path = a.test_labels;
  test_opts.label_order = train.label_names;
  const auto test = hdc::ingest_csv(a.test, test_opts);

  std::vector<hdc::ClassifierId> ids;
  for (const auto& c : a.classifiers) ids.push_back(hdc::parse_classifier(c));
  if (std::find(ids.begin(), ids.end(), hdc::ClassifierId::D) != ids.end() && train.dim() >= train.size() - 2)
    throw hdc::SingularityError(hdc::d_dimension_limit_message(train.dim(), train.count(hdc::Population::Pi1),
                                                               train.count(hdc::Population::Pi2)));

  std::printf("train: %d samples (%s: %d, %s: %d), test: %d samples, %d features\n", train.size(),
              train.label_names[0].c_str(), train.count(hdc::Population::Pi1), train.label_names[1].c_str(),
              train.count(hdc::Population::Pi2), test.size(), train.dim());
  std::printf("%-12s %14s %14s %10s\n", "classifier", "train errors", "test errors", "features");
  for (const auto& e : hdc::classify_dataset(train, test, ids))
    std::printf("%-12s %14d %14d %10d\n", hdc::to_string(e.id).c_str(), e.train_errors, e.test_errors,
                e.features_used);
  return 0;
}

int run_reproduce(const std::string& target, double scale, const std::string& out, int workers,
                  std::uint64_t seed) {
  hdc::ReproduceOptions opts;
  opts.workers = workers;
  opts.seed = seed;
  opts.progress = [](const std::string& msg) { std::fprintf(stderr, "%s\n", msg.c_str()); };
  const auto report = hdc::reproduce(hdc::parse_target(target), scale, opts);
  std::printf("%s: %d replications per cell\n", report.target.c_str(), report.reps);
  std::printf("%s", hdc::render_table(report.tables.front(), 3).c_str());
  print_written(hdc::emit_report(report, out.empty() ? hdc::default_output_dir() : out));
  return 0;
}

int run_mp(int n, int p, std::uint64_t seed, const std::string& innovation) {
  hdc::InnovationSpec spec = hdc::InnovationSpec::standard_normal();
  if (innovation == "gamma") spec = hdc::InnovationSpec::gamma_shifted();
  else if (innovation == "t7") spec = hdc::InnovationSpec::student_t(7);
  else if (innovation != "normal") throw hdc::ValidationError("--innovation must be normal, t7 or gamma");
  hdc::Rng rng = hdc::make_stream(seed, 0);
  const auto d = hdc::mp_empirical(n, p, spec, rng);
  const auto lim = hdc::mp_limits(static_cast<double>(p) / n);
  std::printf("%-22s %12s %12s\n", "statistic", "empirical", "limit");
  std::printf("%-22s %12.6f %12.6f\n", "tr(S^-1)/p", d.t1, lim.a1);
  std::printf("%-22s %12.6f %12.6f\n", "tr(S^-2)/p", d.t2, lim.a2);
  std::printf("%-22s %12.6f %12.6f\n", "xbar'S^-1 xbar n1/p", d.q1, lim.a1);
  std::printf("%-22s %12.6f %12.6f\n", "xbar'S^-2 xbar n1/p", d.q2, lim.a2);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-dimensional two-population classification: D- and T-criteria, theory and experiments"};
  app.require_subcommand(1);
  app.footer(kConfigSchema);

  auto* simulate = app.add_subcommand("simulate", "Run a replicated Monte Carlo experiment from a config file");
  std::string config_path, out;
  int workers = 0;
  simulate->add_option("--config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out, "Output directory (overrides [output].directory)");
  simulate->add_option("--workers", workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  simulate->footer(kConfigSchema);

  auto* theory = app.add_subcommand("theory", "Asymptotic misclassification predictions");
  theory->require_subcommand(1);
  auto* theory_d = theory->add_subcommand("d", "Phi(theta1), Phi(theta2) and tau for the D-criterion");
  double y = 0, lambda = 0, delta2 = 0;
  theory_d->add_option("--y", y, "p / (n1 + n2 - 2), in (0, 1)")->required();
  theory_d->add_option("--lambda", lambda, "n1 / (n1 + n2 - 2), in (0, 1)")->required();
  theory_d->add_option("--delta2", delta2, "Mahalanobis distance Delta^2 >= 0")->required();
  auto* theory_t = theory->add_subcommand("t", "Phi(-a2 |delta|^2 / B_p) for each variance variant");
  std::string theory_config;
  theory_t->add_option("--config", theory_config, "INI config file")->required()->check(CLI::ExistingFile);

  auto* classify = app.add_subcommand("classify", "Fit on a training CSV and report train/test error counts");
  ClassifyArgs cargs;
  classify->add_option("--train", cargs.train, "Training features CSV (rows are samples)")->required()->check(CLI::ExistingFile);
  classify->add_option("--test", cargs.test, "Test features CSV")->required()->check(CLI::ExistingFile);
  classify->add_option("--labels", cargs.labels, "Label column (header name or 0-based index); default: last column");
  classify->add_option("--train-labels", cargs.train_labels, "Training labels file, one per line")->check(CLI::ExistingFile);
  classify->add_option("--test-labels", cargs.test_labels, "Test labels file, one per line")->check(CLI::ExistingFile);
  classify->add_option("--classifier", cargs.classifiers, "Classifiers: d, t, nb (repeatable)")->delimiter(',');
  classify->add_option("--positive-label", cargs.positive_label, "Label mapped to the first population");

  auto* repro = app.add_subcommand("reproduce", "Reproduce a published table or figure grid");
  std::string target;
  double scale = 1.0;
  std::string repro_out;
  int repro_workers = 0;
  std::uint64_t repro_seed = hdc::ReproduceOptions{}.seed;
  repro->add_option("target", target, "table1 | table2 | table3 | table4 | fig1 | fig2 | fig5")->required();
  repro->add_option("--scale", scale, "Fraction of the published replication count, in (0, 1]");
  repro->add_option("--out", repro_out, "Output directory (default $HDC_OUTPUT_DIR or ./results)");
  repro->add_option("--workers", repro_workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  repro->add_option("--seed", repro_seed, "Master seed");

  auto* mp = app.add_subcommand("mp", "Marchenko-Pastur trace diagnostics for one pooled sample covariance");
  int mp_n = 400, mp_p = 200;
  std::uint64_t mp_seed = 1;
  std::string mp_innovation = "normal";
  mp->add_option("--n", mp_n, "Total sample size");
  mp->add_option("--p", mp_p, "Dimension");
  mp->add_option("--seed", mp_seed, "Seed");
  mp->add_option("--innovation", mp_innovation, "normal | t7 | gamma");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) std::cerr << "\n" << app.help();
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate) return run_simulate(config_path, out, workers);
    if (*theory_d) return run_theory_d(y, lambda, delta2);
    if (*theory_t) return run_theory_t(theory_config);
    if (*classify) return run_classify(cargs);
    if (*repro) return run_reproduce(target, scale, repro_out, repro_workers, repro_seed);
    if (*mp) return run_mp(mp_n, mp_p, mp_seed, mp_innovation);
  } catch (const hdc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const hdc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
