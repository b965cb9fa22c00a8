// Fits the D- and T-criteria on one equal-correlation training sample and
// compares the test error with the asymptotic D-criterion prediction.

#include <cstdio>

#include "hdc/hdc.hpp"

int main() {
  const int p = 125, n = 250;
  const auto sigma = hdc::CovarianceSpec::equal_corr(p, 0.5);
  hdc::Rng rng = hdc::make_stream(42, 0);
  const hdc::ScenarioSpec scenario{hdc::ScenarioSpec::Kind::Delocalized, 10, true, 0.0};
  const auto pair = hdc::PopulationPair::make(hdc::make_scenario_means(scenario, sigma, rng), sigma,
                                              hdc::InnovationSpec::standard_normal(),
                                              hdc::InnovationSpec::standard_normal());

  const hdc::Matrix x = hdc::sample_first(n, pair, rng);
  const hdc::Matrix y = hdc::sample_second(n, pair, rng);
  const hdc::Matrix z1 = hdc::sample_first(n, pair, rng);
  const hdc::Matrix z2 = hdc::sample_second(n, pair, rng);
  const auto stats = hdc::fit(x, y, true);

  const auto report = [&](const char* name, const hdc::Vector& s1, const hdc::Vector& s2) {
    const int errors = hdc::count_pi1_errors(s1) + hdc::count_pi2_errors(s2);
    std::printf("%-12s test error %5.1f%%\n", name, 100.0 * errors / (2.0 * n));
  };
  report("D-criterion", hdc::d_statistics(stats, z1), hdc::d_statistics(stats, z2));
  report("T-criterion", hdc::t_statistics(stats, z1), hdc::t_statistics(stats, z2));

  const double delta2 = hdc::mahalanobis(pair.delta(), sigma);
  const auto in = hdc::TheoryInputsD::from_design(p, n, n, delta2);
  std::printf("Delta^2 = %.3f, predicted D-criterion error Phi(theta1) = %.1f%%\n", delta2,
              100.0 * hdc::d_misclass(in));
  return 0;
}
