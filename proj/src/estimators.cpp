#include "svar/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "svar/errors.hpp"
#include "svar/numerics.hpp"

namespace svar {

std::string method_name(VarianceMethod m) {
  switch (m) {
    case VarianceMethod::Collapsed: return "collapsed";
    case VarianceMethod::TwoPerStratumUnbiased: return "two_per_stratum";
    case VarianceMethod::EB: return "eb";
    case VarianceMethod::CEB: return "ceb";
  }
  return "unknown";
}

VarianceMethod method_from_name(const std::string& name) {
  if (name == "collapsed") return VarianceMethod::Collapsed;
  if (name == "two_per_stratum") return VarianceMethod::TwoPerStratumUnbiased;
  if (name == "eb") return VarianceMethod::EB;
  if (name == "ceb") return VarianceMethod::CEB;
  throw ConfigError("unknown estimator: " + name);
}

PointEstimate stratified_mean(const SampleDraw& sample, std::span<const double> weights) {
  if (weights.size() != sample.values.size())
    throw std::invalid_argument("stratified_mean: weight/stratum count mismatch");
  double wsum = 0.0;
  for (double w : weights) {
    if (w <= 0.0) throw std::invalid_argument("stratified_mean: weights must be positive");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-6)
    throw std::invalid_argument("stratified_mean: weights must sum to 1");

  PointEstimate out;
  out.weights.assign(weights.begin(), weights.end());
  out.stratum_means.reserve(sample.values.size());
  for (const auto& vals : sample.values) {
    if (vals.empty()) throw std::invalid_argument("stratified_mean: empty sampling stratum");
    double m = 0.0;
    for (double y : vals) m += y;
    out.stratum_means.push_back(m / static_cast<double>(vals.size()));
  }
  double total = 0.0;
  for (std::size_t h = 0; h < weights.size(); ++h)
    total += out.weights[h] * out.stratum_means[h];
  out.value = total;
  return out;
}

double true_variance(const FinitePopulation& pop, DesignSpec design, bool ignore_fpc) {
  const auto weights = sampling_weights(pop, design);
  const double n_h = static_cast<double>(design.units_per_stratum());
  NeumaierSum total;
  if (design.kind == DesignKind::OnePerStratum) {
    for (std::size_t h = 0; h < pop.strata_count(); ++h) {
      const auto sum = summarize_stratum(pop.strata[h]);
      const double fpc = ignore_fpc ? 1.0 : 1.0 - n_h / static_cast<double>(sum.count);
      total.add(weights[h] * weights[h] * fpc * sum.s2);
    }
  } else {
    for (std::size_t g = 0; g < pop.group_count(); ++g) {
      const auto hs = pop.strata_of_group(g);
      const auto a = summarize_stratum(pop.strata[hs[0]]);
      const auto b = summarize_stratum(pop.strata[hs[1]]);
      // Exact merged-stratum variance from the per-stratum summaries.
      const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count);
      const double m = (na * a.mean + nb * b.mean) / (na + nb);
      const double ss = (na - 1.0) * a.s2 + na * (a.mean - m) * (a.mean - m) +
                        (nb - 1.0) * b.s2 + nb * (b.mean - m) * (b.mean - m);
      const double s2 = ss / (na + nb - 1.0);
      const double fpc = ignore_fpc ? 1.0 : 1.0 - n_h / (na + nb);
      total.add(weights[g] * weights[g] * (1.0 / n_h) * fpc * s2);
    }
  }
  return total.value();
}

std::vector<double> collapsed_group_s2(const SampleDraw& sample,
                                       std::span<const std::size_t> group_of,
                                       std::size_t group_count) {
  if (sample.kind != DesignKind::OnePerStratum)
    throw std::invalid_argument("collapsed variance needs a one-per-stratum sample");
  if (group_of.size() != sample.values.size())
    throw std::invalid_argument("collapsed variance: group map/stratum count mismatch");

  std::vector<double> first(group_count, 0.0);
  std::vector<int> seen(group_count, 0);
  std::vector<double> s2(group_count, 0.0);
  for (std::size_t h = 0; h < sample.values.size(); ++h) {
    if (sample.values[h].size() != 1)
      throw std::invalid_argument("collapsed variance: stratum without exactly 1 unit");
    const std::size_t g = group_of[h];
    if (g >= group_count) throw std::invalid_argument("collapsed variance: group index out of range");
    if (seen[g] == 0) {
      first[g] = sample.values[h][0];
    } else if (seen[g] == 1) {
      const double d = first[g] - sample.values[h][0];
      s2[g] = d * d / 2.0;
    }
    ++seen[g];
  }
  for (std::size_t g = 0; g < group_count; ++g)
    if (seen[g] != 2)
      throw std::invalid_argument("collapsed variance: group without exactly 2 sampled values");
  return s2;
}

VarianceEstimate collapsed_variance(const SampleDraw& sample,
                                    std::span<const std::size_t> group_of,
                                    std::size_t group_count,
                                    std::span<const double> stratum_weights) {
  VarianceEstimate out;
  out.method = VarianceMethod::Collapsed;
  out.group_components = collapsed_group_s2(sample, group_of, group_count);

  if (stratum_weights.empty()) {
    const double h = static_cast<double>(group_count);
    double total = 0.0;
    for (double s2 : out.group_components) total += s2;
    out.value = total / (2.0 * h * h);
    return out;
  }

  if (stratum_weights.size() != sample.values.size())
    throw std::invalid_argument("collapsed variance: weight/stratum count mismatch");
  std::vector<double> gw(group_count, 0.0);
  for (std::size_t h = 0; h < stratum_weights.size(); ++h) gw[group_of[h]] += stratum_weights[h];
  double total = 0.0;
  for (std::size_t g = 0; g < group_count; ++g)
    total += gw[g] * gw[g] * out.group_components[g] / 2.0;
  out.value = total;
  return out;
}

VarianceEstimate two_per_stratum_variance(const SampleDraw& sample,
                                          std::span<const double> weights,
                                          std::span<const std::size_t> sizes,
                                          bool ignore_fpc) {
  if (sample.kind != DesignKind::TwoPerStratum)
    throw std::invalid_argument("two_per_stratum_variance needs a two-per-stratum sample");
  if (weights.size() != sample.values.size())
    throw std::invalid_argument("two_per_stratum_variance: weight/stratum count mismatch");
  if (!ignore_fpc && sizes.size() != sample.values.size())
    throw std::invalid_argument("two_per_stratum_variance: sizes/stratum count mismatch");

  VarianceEstimate out;
  out.method = VarianceMethod::TwoPerStratumUnbiased;
  out.group_components.reserve(sample.values.size());
  double total = 0.0;
  for (std::size_t g = 0; g < sample.values.size(); ++g) {
    const auto& vals = sample.values[g];
    if (vals.size() != 2)
      throw std::invalid_argument("two_per_stratum_variance: stratum without exactly 2 units");
    const double d = vals[0] - vals[1];
    const double s2 = d * d / 2.0;  // sample variance, denominator n-1 = 1
    out.group_components.push_back(s2);
    const double fpc = ignore_fpc ? 1.0 : 1.0 - 2.0 / static_cast<double>(sizes[g]);
    total += weights[g] * weights[g] * (s2 / 2.0) * fpc;
  }
  out.value = total;
  return out;
}

}  // namespace svar
