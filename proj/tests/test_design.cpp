#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "svar/design.hpp"
#include "svar/errors.hpp"
#include "svar/numerics.hpp"

using namespace svar;

namespace {

// Builds a population directly from per-stratum value lists (adjacent
// strata pair into groups).
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

}  // namespace

TEST_CASE("forced selections") {
  // Single-unit strata force the draw under Design 1.
  const FinitePopulation pop = make_pop({{4.0}, {9.0}});
  const SampleDraw d1 = draw_sample(pop, {DesignKind::OnePerStratum}, 123);
  CHECK(d1.values == std::vector<std::vector<double>>{{4.0}, {9.0}});

  // A merged stratum of size 2 is a census under Design 2.
  const SampleDraw d2 = draw_sample(pop, {DesignKind::TwoPerStratum}, 123);
  REQUIRE(d2.values.size() == 1);
  const std::set<double> got(d2.values[0].begin(), d2.values[0].end());
  CHECK(got == std::set<double>{4.0, 9.0});
}

TEST_CASE("empirical inclusion probability under SRSWOR") {
  std::vector<std::vector<double>> strata(2);
  for (int h = 0; h < 2; ++h)
    for (int j = 0; j < 200; ++j) strata[h].push_back(h * 1000.0 + j);
  const FinitePopulation pop = make_pop(std::move(strata));

  const int reps = 10000;
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    const SampleDraw d = draw_sample(pop, {DesignKind::OnePerStratum}, mix_seed(881, r));
    if (d.values[0][0] == 0.0) ++hits;  // unit 0 of stratum 0
  }
  const double p = 1.0 / 200.0;
  const double se = std::sqrt(p * (1.0 - p) / reps);
  CHECK(std::abs(static_cast<double>(hits) / reps - p) < 3.0 * se);
}

TEST_CASE("draws are reproducible from the replication seed") {
  const FinitePopulation pop = make_pop({{1, 2, 3, 4}, {5, 6, 7, 8}, {9, 10, 11, 12}, {13, 14, 15, 16}});
  const SampleDraw a = draw_sample(pop, {DesignKind::TwoPerStratum}, 42);
  const SampleDraw b = draw_sample(pop, {DesignKind::TwoPerStratum}, 42);
  CHECK(a.values == b.values);

  bool any_difference = false;
  for (std::uint64_t r = 0; r < 32 && !any_difference; ++r)
    any_difference = draw_sample(pop, {DesignKind::OnePerStratum}, mix_seed(7, r)).values !=
                     draw_sample(pop, {DesignKind::OnePerStratum}, mix_seed(7, r + 1)).values;
  CHECK(any_difference);
}

TEST_CASE("enumeration counts and probabilities") {
  const FinitePopulation two_by_three = make_pop({{1, 2, 3}, {4, 5, 6}});
  CHECK(sample_space_size(two_by_three, {DesignKind::OnePerStratum}, 1000) == 9);

  const FinitePopulation merged_four = make_pop({{1, 2}, {3, 4}});
  CHECK(sample_space_size(merged_four, {DesignKind::TwoPerStratum}, 1000) == 6);

  const FinitePopulation four_by_four =
      make_pop({{1, 2, 3, 4}, {5, 6, 7, 8}, {9, 10, 11, 12}, {13, 14, 15, 16}});
  CHECK(sample_space_size(four_by_four, {DesignKind::OnePerStratum}, 1000) == 256);

  // Every sample distinct, probabilities uniform and summing to 1.
  std::set<std::vector<std::vector<double>>> seen;
  NeumaierSum prob_total;
  for_each_sample(two_by_three, {DesignKind::OnePerStratum}, 1000,
                  [&](const SampleDraw& s, double p) {
                    CHECK(p == 1.0 / 9.0);
                    seen.insert(s.values);
                    prob_total.add(p);
                  });
  CHECK(seen.size() == 9);
  CHECK(std::abs(prob_total.value() - 1.0) <= 1e-12);
}

TEST_CASE("enumerated mean of the stratified mean recovers the population mean") {
  const FinitePopulation pop = make_pop({{1, 5, 9}, {2, 2, 8}, {3, 7, 7, 11}, {1, 4}});
  const double ybar = pop.mean();
  for (DesignKind dk : {DesignKind::OnePerStratum, DesignKind::TwoPerStratum}) {
    const DesignSpec design{dk};
    const auto weights = sampling_weights(pop, design);
    NeumaierSum acc;
    for_each_sample(pop, design, 100000, [&](const SampleDraw& s, double p) {
      acc.add(p * stratified_mean(s, weights).value);
    });
    CHECK(acc.value() == doctest::Approx(ybar).epsilon(1e-13));
  }
}

TEST_CASE("enumeration cap raises an infeasibility error naming the count") {
  std::vector<std::vector<double>> strata(2);
  for (int h = 0; h < 2; ++h)
    for (int j = 0; j < 2000; ++j) strata[h].push_back(j);
  const FinitePopulation pop = make_pop(std::move(strata));
  try {
    sample_space_size(pop, {DesignKind::OnePerStratum}, kDefaultEnumerationCap);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).find("4000000") != std::string::npos);
  }
}

TEST_CASE("decode_sample matches the enumeration stream") {
  const FinitePopulation pop = make_pop({{1, 2, 3}, {4, 5}, {6, 7, 8, 9}, {10, 11}});
  const DesignSpec design{DesignKind::TwoPerStratum};
  std::uint64_t idx = 0;
  SampleDraw decoded;
  for_each_sample(pop, design, 100000, [&](const SampleDraw& s, double) {
    decode_sample(pop, design, idx++, decoded);
    CHECK(decoded.values == s.values);
  });
}
