#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "svar/errors.hpp"
#include "svar/estimators.hpp"
#include "svar/numerics.hpp"
#include "svar/theory.hpp"

using namespace svar;

namespace {

FinitePopulation make_pop(std::vector<std::vector<double>> strata) {
  FinitePopulation pop;
  pop.strata = std::move(strata);
  pop.group_of.resize(pop.strata.size());
  for (std::size_t h = 0; h < pop.strata.size(); ++h) pop.group_of[h] = h / 2;
  std::size_t total = 0;
  for (const auto& s : pop.strata) total += s.size();
  pop.weights.resize(pop.strata.size());
  for (std::size_t h = 0; h < pop.strata.size(); ++h)
    pop.weights[h] = static_cast<double>(pop.strata[h].size()) / static_cast<double>(total);
  pop.validate();
  return pop;
}

SampleDraw one_per_stratum_draw(std::vector<double> values) {
  SampleDraw d;
  d.kind = DesignKind::OnePerStratum;
  for (double v : values) d.values.push_back({v});
  return d;
}

}  // namespace

TEST_CASE("stratified mean") {
  const SampleDraw constant = one_per_stratum_draw({3.5, 3.5, 3.5, 3.5});
  const std::vector<double> w{0.25, 0.25, 0.25, 0.25};
  CHECK(stratified_mean(constant, w).value == 3.5);

  const SampleDraw two = one_per_stratum_draw({4.0, 6.0});
  const std::vector<double> half{0.5, 0.5};
  CHECK(stratified_mean(two, half).value == 5.0);

  CHECK_THROWS_AS(stratified_mean(two, w), std::invalid_argument);
  const std::vector<double> bad{0.5, -0.5};
  CHECK_THROWS_AS(stratified_mean(two, bad), std::invalid_argument);
  const std::vector<double> not_normalized{0.9, 0.9};
  CHECK_THROWS_AS(stratified_mean(two, not_normalized), std::invalid_argument);
}

TEST_CASE("true variance") {
  // Single-unit strata are a census under Design 1: zero variance with FPC.
  const FinitePopulation census = make_pop({{4}, {7}});
  CHECK(true_variance(census, {DesignKind::OnePerStratum}, false) == 0.0);

  // Equal strata, FPC dropped: (1/4H^2) sum of S_h^2.
  const FinitePopulation pop = make_pop({{1, 2, 3}, {4, 6, 8}, {0, 5, 10}, {2, 2, 2}});
  const double expect = (1.0 + 4.0 + 25.0 + 0.0) / (4.0 * 2.0 * 2.0);
  CHECK(true_variance(pop, {DesignKind::OnePerStratum}, true) ==
        doctest::Approx(expect).epsilon(1e-14));

  // Merged census: two-per-stratum over merged groups of exactly 2 units.
  const FinitePopulation merged_census = make_pop({{4}, {7}, {1}, {3}});
  CHECK(true_variance(merged_census, {DesignKind::TwoPerStratum}, false) == 0.0);
}

TEST_CASE("true variance matches Table 1 row 1 scale on a fresh gamma draw") {
  PopulationSpec spec;
  spec.kind = PopulationKind::BivariateGamma;
  spec.total_units = 20000;
  spec.strata_count = 10;
  spec.seed = 424243;
  const FinitePopulation pop = generate_bivariate_gamma(spec);
  const double v1 = true_variance(pop, {DesignKind::OnePerStratum}, false);
  CHECK(v1 == doctest::Approx(0.2515).epsilon(0.10));
}

TEST_CASE("collapsed variance") {
  const FinitePopulation pop = make_pop({{0, 1}, {0, 1}});
  const SampleDraw draw = one_per_stratum_draw({3.0, 7.0});
  const VarianceEstimate v = collapsed_variance(draw, pop.group_of, 1);
  CHECK(v.group_components == std::vector<double>{8.0});
  CHECK(v.value == 4.0);

  // Equal sampled pairs give exactly zero.
  const SampleDraw flat = one_per_stratum_draw({2.0, 2.0});
  CHECK(collapsed_variance(flat, pop.group_of, 1).value == 0.0);

  // The general-weights form agrees with the printed coefficient under
  // equal weights.
  const FinitePopulation pop4 = make_pop({{0, 1}, {0, 1}, {0, 1}, {0, 1}});
  const SampleDraw d4 = one_per_stratum_draw({1.0, 4.0, 2.0, 9.0});
  const VarianceEstimate eq = collapsed_variance(d4, pop4.group_of, 2);
  const VarianceEstimate gen = collapsed_variance(d4, pop4.group_of, 2, pop4.weights);
  CHECK(eq.value == doctest::Approx(gen.value).epsilon(1e-12));

  // Location invariance (exact on integer data) and quadratic scale.
  const SampleDraw shifted = one_per_stratum_draw({11.0, 14.0, 12.0, 19.0});
  CHECK(collapsed_variance(shifted, pop4.group_of, 2).value == eq.value);
  const SampleDraw doubled = one_per_stratum_draw({2.0, 8.0, 4.0, 18.0});
  CHECK(collapsed_variance(doubled, pop4.group_of, 2).value == 4.0 * eq.value);

  CHECK_THROWS_AS(collapsed_variance(one_per_stratum_draw({1.0, 2.0, 3.0}), pop4.group_of, 2),
                  std::invalid_argument);
}

TEST_CASE("two-per-stratum variance") {
  SampleDraw d;
  d.kind = DesignKind::TwoPerStratum;
  d.values = {{1.0, 5.0}};
  const std::vector<double> w{1.0};
  const VarianceEstimate v = two_per_stratum_variance(d, w, {}, /*ignore_fpc=*/true);
  CHECK(v.group_components == std::vector<double>{8.0});
  CHECK(v.value == 4.0);

  SampleDraw flat;
  flat.kind = DesignKind::TwoPerStratum;
  flat.values = {{2.0, 2.0}, {5.0, 5.0}};
  const std::vector<double> w2{0.5, 0.5};
  const std::vector<std::size_t> sizes{4, 4};
  CHECK(two_per_stratum_variance(flat, w2, sizes, false).value == 0.0);

  SampleDraw wrong;
  wrong.kind = DesignKind::TwoPerStratum;
  wrong.values = {{1.0}, {2.0, 3.0}};
  CHECK_THROWS_AS(two_per_stratum_variance(wrong, w2, sizes, false), std::invalid_argument);
}

TEST_CASE("enumeration means: HT and two-per-stratum unbiasedness on {0,0,2,2}") {
  // One merged stratum of 4 units, values {0,0,2,2}: the enumeration mean
  // of the FPC estimator equals the true variance of ybar under SRSWOR(2 of 4).
  const FinitePopulation pop = make_pop({{0.0, 0.0}, {2.0, 2.0}});
  const DesignSpec design{DesignKind::TwoPerStratum};
  const auto weights = sampling_weights(pop, design);
  const auto sizes = sampling_sizes(pop, design);

  NeumaierSum ev;
  for_each_sample(pop, design, 1000, [&](const SampleDraw& s, double p) {
    ev.add(p * two_per_stratum_variance(s, weights, sizes, false).value);
  });
  const double truth = true_variance(pop, design, false);
  CHECK(truth == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(ev.value() == doctest::Approx(truth).epsilon(1e-13));

  // And the point estimator is design-unbiased for the population mean.
  const double oracle_mean =
      oracle_expectation(pop, design, OracleStatistic::StratifiedMean, 1000);
  CHECK(oracle_mean == doctest::Approx(pop.mean()).epsilon(1e-13));
}
