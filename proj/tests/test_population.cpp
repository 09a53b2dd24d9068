#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "svar/errors.hpp"
#include "svar/numerics.hpp"
#include "svar/population.hpp"

using namespace svar;

namespace {

PopulationSpec gamma_spec(std::size_t total, std::size_t strata, std::uint64_t seed) {
  PopulationSpec spec;
  spec.kind = PopulationKind::BivariateGamma;
  spec.total_units = total;
  spec.strata_count = strata;
  spec.seed = seed;
  return spec;
}

PopulationSpec normal_spec(CaseStudy cs, std::uint64_t seed) {
  PopulationSpec spec;
  spec.kind = PopulationKind::NormalGroups;
  spec.total_units = 20000;
  spec.strata_count = 10;
  spec.case_study = cs;
  spec.base_mean = 2.9;
  spec.base_variance = 5.5;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("bivariate gamma x moments match Gamma(2,5)") {
  const FinitePopulation pop = generate_bivariate_gamma(gamma_spec(20000, 10, 7001));
  REQUIRE(pop.has_x());
  std::vector<double> xs;
  for (const auto& s : pop.x_aux) xs.insert(xs.end(), s.begin(), s.end());
  const StratumSummary m = summarize_stratum(xs);
  const double n = static_cast<double>(xs.size());
  // mean 10, variance 50; mu4 of Gamma(2,5) is (3 + 6/k) sigma^4 = 15000.
  CHECK(std::abs(m.mean - 10.0) < 10.0 * std::sqrt(50.0 / n));
  CHECK(std::abs(m.s2 - 50.0) < 10.0 * std::sqrt((15000.0 - 2500.0) / n));
}

TEST_CASE("conditional mean and variance of y given x") {
  const FinitePopulation pop = generate_bivariate_gamma(gamma_spec(20000, 10, 7002));
  for (std::size_t h = 0; h < pop.strata_count(); ++h) {
    const auto& ys = pop.strata[h];
    const auto& xs = pop.x_aux[h];
    const double n = static_cast<double>(ys.size());
    const StratumSummary ym = summarize_stratum(ys);
    const StratumSummary xm = summarize_stratum(xs);

    // E[y|x] = 0.4 + 0.25 x, so the bin mean of y tracks 0.4 + 0.25 mean(x).
    const double expected_mean = 0.4 + 0.25 * xm.mean;
    const double mean_se = std::sqrt(ym.s2 / n);
    CHECK(std::abs(ym.mean - expected_mean) < 3.0 * mean_se);

    // Var[y|x] = 0.0625 x^{3/2}; the bin variance adds the spread of the
    // conditional mean, 0.0625^2 var(x).
    NeumaierSum vbar;
    for (double x : xs) vbar.add(0.0625 * std::pow(x, 1.5));
    const double expected_var = vbar.value() / n + 0.0625 * 0.0625 * xm.s2;
    const double var_se = std::sqrt(std::max(ym.mu4 - ym.s2 * ym.s2, 0.0) / n);
    CHECK(std::abs(ym.s2 - expected_var) < 3.0 * var_se);
  }
}

TEST_CASE("quantile stratification: equal bins, monotone x means, unit weights") {
  const FinitePopulation pop = generate_bivariate_gamma(gamma_spec(2000, 10, 7003));
  for (const auto& s : pop.strata) CHECK(s.size() == 200);

  double prev = -1.0;
  for (const auto& xs : pop.x_aux) {
    const double m = neumaier_total(xs) / static_cast<double>(xs.size());
    CHECK(m >= prev);
    prev = m;
  }

  NeumaierSum w;
  for (double wh : pop.weights) w.add(wh);
  CHECK(std::abs(w.value() - 1.0) <= 1e-12);
}

TEST_CASE("same seed reproduces the population bitwise") {
  const auto spec = gamma_spec(4000, 10, 7004);
  const FinitePopulation a = generate_bivariate_gamma(spec);
  const FinitePopulation b = generate_bivariate_gamma(spec);
  CHECK(a.strata == b.strata);
  CHECK(a.x_aux == b.x_aux);

  const auto nspec = normal_spec(CaseStudy::NeqMeanNeqVar, 7005);
  CHECK(generate_normal_groups(nspec).strata == generate_normal_groups(nspec).strata);
}

TEST_CASE("normal groups follow the case-study layout") {
  // Equal means and variances: both strata of group 1 target N(mu+1, s2).
  const FinitePopulation eq = generate_normal_groups(normal_spec(CaseStudy::EqMeanEqVar, 7006));
  const std::size_t n = eq.strata[0].size();
  const double mean0 = neumaier_total(eq.strata[0]) / static_cast<double>(n);
  const double mean1 = neumaier_total(eq.strata[1]) / static_cast<double>(n);
  CHECK(std::abs(mean0 - mean1) < 4.0 * std::sqrt(2.0 * 5.5 / static_cast<double>(n)));

  // Unequal means: group 5 strata target mu+5 and mu+10 with variance 5 s2.
  const FinitePopulation neq = generate_normal_groups(normal_spec(CaseStudy::NeqMeanEqVar, 7007));
  const double m8 = neumaier_total(neq.strata[8]) / static_cast<double>(n);
  const double m9 = neumaier_total(neq.strata[9]) / static_cast<double>(n);
  const double tol = 5.0 * std::sqrt(5.0 * 5.5 / static_cast<double>(n));
  CHECK(std::abs(m8 - (2.9 + 5.0)) < tol);
  CHECK(std::abs(m9 - (2.9 + 10.0)) < tol);

  // Unequal variances double the second stratum's variance multiplier.
  const FinitePopulation nv = generate_normal_groups(normal_spec(CaseStudy::EqMeanNeqVar, 7008));
  const double s2_first = summarize_stratum(nv.strata[8]).s2;
  const double s2_second = summarize_stratum(nv.strata[9]).s2;
  CHECK(s2_second / s2_first > 1.5);  // targets 5 s2 vs 10 s2
}

TEST_CASE("population spec validation") {
  auto bad_var = normal_spec(CaseStudy::EqMeanEqVar, 1);
  bad_var.base_variance = 0.0;
  CHECK_THROWS_AS(generate_normal_groups(bad_var), ConfigError);

  auto bad_mult = normal_spec(CaseStudy::EqMeanEqVar, 1);
  bad_mult.multipliers = {{1, 1}, {2, -2}, {3, 3}, {4, 4}, {5, 5}};
  CHECK_THROWS_AS(generate_normal_groups(bad_mult), ConfigError);

  auto odd = gamma_spec(2100, 7, 1);
  CHECK_THROWS_AS(generate_bivariate_gamma(odd), ConfigError);

  auto indivisible = gamma_spec(2001, 10, 1);
  CHECK_THROWS_AS(generate_bivariate_gamma(indivisible), ConfigError);

  auto zero = gamma_spec(0, 10, 1);
  CHECK_THROWS_AS(generate_bivariate_gamma(zero), ConfigError);
}

TEST_CASE("summarize_stratum: pinned values") {
  const std::vector<double> constant{1, 1, 1, 1};
  const StratumSummary c = summarize_stratum(constant);
  CHECK(c.mean == 1.0);
  CHECK(c.s2 == 0.0);
  CHECK(c.mu3 == 0.0);
  CHECK(c.mu4 == 0.0);

  const std::vector<double> two{0, 2};
  const StratumSummary t = summarize_stratum(two);
  CHECK(t.mean == 1.0);
  CHECK(t.s2 == 2.0);
  CHECK(t.mu3 == 0.0);
  CHECK(t.mu4 == 2.0);

  const std::vector<double> three{1, 2, 3};
  const StratumSummary s = summarize_stratum(three);
  CHECK(s.mean == 2.0);
  CHECK(s.s2 == 1.0);
  CHECK(s.mu3 == 0.0);
  CHECK(s.mu4 == 1.0);

  CHECK_THROWS_AS(summarize_stratum(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("summarize_stratum: permutation, location and scale behavior") {
  // Integer values over a power-of-two count keep every intermediate exact,
  // so these properties hold bitwise.
  const std::vector<double> base{3, 9, 1, 7, 5, 5, 11, 7};
  const StratumSummary ref = summarize_stratum(base);

  std::vector<double> perm = base;
  std::sort(perm.begin(), perm.end());
  const StratumSummary p = summarize_stratum(perm);
  CHECK(p.mean == ref.mean);
  CHECK(p.s2 == ref.s2);
  CHECK(p.mu3 == ref.mu3);
  CHECK(p.mu4 == ref.mu4);

  std::vector<double> shifted(base.size());
  std::transform(base.begin(), base.end(), shifted.begin(), [](double y) { return y + 100.0; });
  const StratumSummary sh = summarize_stratum(shifted);
  CHECK(sh.mean == ref.mean + 100.0);
  CHECK(sh.s2 == ref.s2);
  CHECK(sh.mu3 == ref.mu3);
  CHECK(sh.mu4 == ref.mu4);

  std::vector<double> scaled(base.size());
  std::transform(base.begin(), base.end(), scaled.begin(), [](double y) { return 2.0 * y; });
  const StratumSummary sc = summarize_stratum(scaled);
  CHECK(sc.mean == 2.0 * ref.mean);
  CHECK(sc.s2 == 4.0 * ref.s2);
  CHECK(sc.mu3 == 8.0 * ref.mu3);
  CHECK(sc.mu4 == 16.0 * ref.mu4);

  // Random-valued inputs keep the properties to floating-point accuracy.
  Rng rng(99);
  std::normal_distribution<double> dist(0.0, 3.0);
  std::vector<double> random(37);
  for (double& y : random) y = dist(rng);
  const StratumSummary r0 = summarize_stratum(random);
  std::vector<double> reversed(random.rbegin(), random.rend());
  const StratumSummary r1 = summarize_stratum(reversed);
  CHECK(r0.mean == doctest::Approx(r1.mean).epsilon(1e-12));
  CHECK(r0.mu3 == doctest::Approx(r1.mu3).epsilon(1e-12));
}
