#include "svar/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "svar/errors.hpp"
#include "svar/numerics.hpp"

namespace svar {

void PopulationSpec::validate() const {
  if (total_units == 0) throw ConfigError("population: total_units must be positive");
  if (strata_count == 0 || strata_count % 2 != 0)
    throw ConfigError("population: strata_count must be a positive even number");
  if (total_units % strata_count != 0)
    throw ConfigError("population: total_units must be divisible by strata_count");
  if (kind == PopulationKind::BivariateGamma) {
    if (gamma_shape <= 0.0 || gamma_scale <= 0.0)
      throw ConfigError("population: gamma shape and scale must be positive");
  } else {
    if (base_variance <= 0.0)
      throw ConfigError("population: base_variance must be positive");
    if (!multipliers.empty() && multipliers.size() != group_count())
      throw ConfigError("population: multipliers list must have one entry per group");
    for (const auto& m : multipliers)
      if (m.variance <= 0.0)
        throw ConfigError("population: variance multipliers must be positive");
  }
}

std::size_t FinitePopulation::group_count() const { return strata.size() / 2; }

std::size_t FinitePopulation::total_units() const {
  std::size_t n = 0;
  for (const auto& s : strata) n += s.size();
  return n;
}

std::array<std::size_t, 2> FinitePopulation::strata_of_group(std::size_t g) const {
  std::array<std::size_t, 2> out{strata.size(), strata.size()};
  std::size_t found = 0;
  for (std::size_t h = 0; h < group_of.size(); ++h) {
    if (group_of[h] == g) {
      if (found < 2) out[found] = h;
      ++found;
    }
  }
  if (found != 2) throw ConfigError("population: group " + std::to_string(g) + " does not contain exactly 2 strata");
  return out;
}

double FinitePopulation::group_weight(std::size_t g) const {
  const auto hs = strata_of_group(g);
  return weights[hs[0]] + weights[hs[1]];
}

std::size_t FinitePopulation::group_size(std::size_t g) const {
  const auto hs = strata_of_group(g);
  return strata[hs[0]].size() + strata[hs[1]].size();
}

double FinitePopulation::mean() const {
  NeumaierSum total;
  std::size_t n = 0;
  for (const auto& s : strata) {
    for (double y : s) total.add(y);
    n += s.size();
  }
  return total.value() / static_cast<double>(n);
}

void FinitePopulation::validate() const {
  if (strata.empty() || strata.size() % 2 != 0)
    throw ConfigError("population: needs a positive even number of strata");
  if (group_of.size() != strata.size() || weights.size() != strata.size())
    throw ConfigError("population: group_of/weights size mismatch");
  NeumaierSum wsum;
  for (std::size_t h = 0; h < strata.size(); ++h) {
    if (strata[h].empty()) throw ConfigError("population: stratum " + std::to_string(h) + " is empty");
    if (weights[h] <= 0.0 || weights[h] > 1.0)
      throw ConfigError("population: weight out of (0,1] in stratum " + std::to_string(h));
    wsum.add(weights[h]);
  }
  if (std::abs(wsum.value() - 1.0) > 1e-12)
    throw ConfigError("population: stratum weights do not sum to 1");
  for (std::size_t g = 0; g < group_count(); ++g) strata_of_group(g);  // throws unless exactly 2
}

namespace {

FinitePopulation make_shell(std::size_t strata_count, std::size_t units_per_stratum) {
  FinitePopulation pop;
  pop.strata.assign(strata_count, {});
  for (auto& s : pop.strata) s.reserve(units_per_stratum);
  pop.group_of.resize(strata_count);
  for (std::size_t h = 0; h < strata_count; ++h) pop.group_of[h] = h / 2;
  pop.weights.assign(strata_count, 1.0 / static_cast<double>(strata_count));
  return pop;
}

}  // namespace

FinitePopulation generate_bivariate_gamma(const PopulationSpec& spec) {
  spec.validate();
  if (spec.kind != PopulationKind::BivariateGamma)
    throw ConfigError("generate_bivariate_gamma: spec kind mismatch");

  const std::size_t n_total = spec.total_units;
  Rng rng(spec.seed);
  std::gamma_distribution<double> x_dist(spec.gamma_shape, spec.gamma_scale);

  std::vector<double> xs(n_total), ys(n_total);
  for (std::size_t i = 0; i < n_total; ++i) {
    double x = x_dist(rng);
    while (!(x > 0.0)) x = x_dist(rng);  // guards underflow to 0
    // y|x ~ Gamma(c, b) with c = .04 x^{-3/2} (8+5x)^2 and
    // b = 1.25 x^{3/2} (8+5x)^{-1}, so E[y|x] = .05(8+5x) and
    // Var[y|x] = .0625 x^{3/2}.
    const double t = 8.0 + 5.0 * x;
    const double c = 0.04 * std::pow(x, -1.5) * t * t;
    const double b = 1.25 * std::pow(x, 1.5) / t;
    std::gamma_distribution<double> y_dist(c, b);
    xs[i] = x;
    ys[i] = y_dist(rng);
  }

  // Strata are equal-count bins on the quantiles of x: sort-order ranks are
  // assigned to bins directly, so boundary ties resolve to the lower bin.
  std::vector<std::size_t> order(n_total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&xs](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  const std::size_t per_stratum = n_total / spec.strata_count;
  std::vector<std::size_t> stratum_of(n_total);
  for (std::size_t rank = 0; rank < n_total; ++rank)
    stratum_of[order[rank]] = std::min(rank / per_stratum, spec.strata_count - 1);

  FinitePopulation pop = make_shell(spec.strata_count, per_stratum);
  pop.x_aux.assign(spec.strata_count, {});
  for (auto& s : pop.x_aux) s.reserve(per_stratum);
  for (std::size_t i = 0; i < n_total; ++i) {  // generation order within stratum
    pop.strata[stratum_of[i]].push_back(ys[i]);
    pop.x_aux[stratum_of[i]].push_back(xs[i]);
  }
  pop.validate();
  return pop;
}

FinitePopulation generate_normal_groups(const PopulationSpec& spec) {
  spec.validate();
  if (spec.kind != PopulationKind::NormalGroups)
    throw ConfigError("generate_normal_groups: spec kind mismatch");

  const std::size_t groups = spec.group_count();
  std::vector<GroupMultiplier> mult = spec.multipliers;
  if (mult.empty()) {
    mult.resize(groups);
    for (std::size_t g = 0; g < groups; ++g)
      mult[g] = {static_cast<double>(g + 1), static_cast<double>(g + 1)};
  }

  const bool neq_mean = spec.case_study == CaseStudy::NeqMeanEqVar ||
                        spec.case_study == CaseStudy::NeqMeanNeqVar;
  const bool neq_var = spec.case_study == CaseStudy::NeqMeanNeqVar ||
                       spec.case_study == CaseStudy::EqMeanNeqVar;

  const std::size_t per_stratum = spec.total_units / spec.strata_count;
  FinitePopulation pop = make_shell(spec.strata_count, per_stratum);
  Rng rng(spec.seed);
  for (std::size_t g = 0; g < groups; ++g) {
    for (int i = 0; i < 2; ++i) {
      const double mean_mult = (i == 1 && neq_mean) ? 2.0 * mult[g].mean : mult[g].mean;
      const double var_mult = (i == 1 && neq_var) ? 2.0 * mult[g].variance : mult[g].variance;
      std::normal_distribution<double> dist(spec.base_mean + mean_mult,
                                            std::sqrt(var_mult * spec.base_variance));
      auto& stratum = pop.strata[2 * g + i];
      for (std::size_t j = 0; j < per_stratum; ++j) stratum.push_back(dist(rng));
    }
  }
  pop.validate();
  return pop;
}

FinitePopulation generate_population(const PopulationSpec& spec) {
  return spec.kind == PopulationKind::BivariateGamma ? generate_bivariate_gamma(spec)
                                                     : generate_normal_groups(spec);
}

StratumSummary summarize_stratum(std::span<const double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("summarize_stratum: needs at least 2 values");
  StratumSummary out;
  out.count = values.size();

  NeumaierSum total;
  for (double y : values) total.add(y);
  out.mean = total.value() / static_cast<double>(values.size());

  NeumaierSum d2, d3, d4;
  for (double y : values) {
    const double d = y - out.mean;
    const double dd = d * d;
    d2.add(dd);
    d3.add(dd * d);
    d4.add(dd * dd);
  }
  const double denom = static_cast<double>(values.size() - 1);
  out.s2 = d2.value() / denom;
  out.mu3 = d3.value() / denom;
  out.mu4 = d4.value() / denom;
  return out;
}

std::vector<StratumSummary> summarize_population(const FinitePopulation& pop) {
  std::vector<StratumSummary> out;
  out.reserve(pop.strata_count());
  for (const auto& s : pop.strata) out.push_back(summarize_stratum(s));
  return out;
}

}  // namespace svar
