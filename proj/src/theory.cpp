#include "svar/theory.hpp"

#include <cmath>
#include <omp.h>
#include <stdexcept>

#include "svar/errors.hpp"
#include "svar/numerics.hpp"

namespace svar {

std::vector<StratumPair> group_summaries(const FinitePopulation& pop) {
  std::vector<StratumPair> out;
  out.reserve(pop.group_count());
  for (std::size_t g = 0; g < pop.group_count(); ++g) {
    const auto hs = pop.strata_of_group(g);
    out.push_back({summarize_stratum(pop.strata[hs[0]]), summarize_stratum(pop.strata[hs[1]])});
  }
  return out;
}

namespace {

// Single-draw central moment E(y - Ybar)^r of SRSWOR(1): (1 - 1/N) mu_r
// under the (N-1) denominator; the paper convention keeps mu_r as is.
double draw_moment(const StratumSummary& s, double mu_r, FpcConvention conv) {
  if (conv == FpcConvention::Paper) return mu_r;
  return (1.0 - 1.0 / static_cast<double>(s.count)) * mu_r;
}

void check_weights(std::span<const StratumPair> groups, std::span<const GroupWeights> weights) {
  if (!weights.empty() && weights.size() != groups.size())
    throw std::invalid_argument("theory: group/weight count mismatch");
}

}  // namespace

double collapsed_bias(std::span<const StratumPair> groups, FpcConvention conv,
                      std::span<const GroupWeights> weights) {
  check_weights(groups, weights);
  const double h = static_cast<double>(groups.size());
  NeumaierSum total;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& [a, b] = groups[g];
    const double gap = a.mean - b.mean;
    if (weights.empty()) {
      double term = gap * gap;
      if (conv == FpcConvention::Exact)
        term -= a.s2 / static_cast<double>(a.count) + b.s2 / static_cast<double>(b.count);
      total.add(term / (4.0 * h * h));
    } else {
      const double w = weights[g].w1 + weights[g].w2;
      const double m2a = draw_moment(a, a.s2, conv);
      const double m2b = draw_moment(b, b.s2, conv);
      total.add(w * w * (m2a + m2b + gap * gap) / 4.0 -
                weights[g].w1 * weights[g].w1 * a.s2 - weights[g].w2 * weights[g].w2 * b.s2);
    }
  }
  return total.value();
}

double expected_collapsed(std::span<const StratumPair> groups, FpcConvention conv,
                          std::span<const GroupWeights> weights) {
  check_weights(groups, weights);
  const double h = static_cast<double>(groups.size());
  NeumaierSum total;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& [a, b] = groups[g];
    const double gap = a.mean - b.mean;
    const double m2a = draw_moment(a, a.s2, conv);
    const double m2b = draw_moment(b, b.s2, conv);
    const double es2 = (m2a + m2b + gap * gap) / 2.0;  // E s2_g
    const double coeff = weights.empty()
                             ? 1.0 / (2.0 * h * h)
                             : (weights[g].w1 + weights[g].w2) * (weights[g].w1 + weights[g].w2) / 2.0;
    total.add(coeff * es2);
  }
  return total.value();
}

double collapsed_varvar(std::span<const StratumPair> groups, FpcConvention conv,
                        std::span<const GroupWeights> weights) {
  check_weights(groups, weights);
  const double h = static_cast<double>(groups.size());
  NeumaierSum total;
  double scale = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& [a, b] = groups[g];
    const double gap = a.mean - b.mean;
    const double m2a = draw_moment(a, a.s2, conv);
    const double m2b = draw_moment(b, b.s2, conv);
    const double m3a = draw_moment(a, a.mu3, conv);
    const double m3b = draw_moment(b, b.mu3, conv);
    const double m4a = draw_moment(a, a.mu4, conv);
    const double m4b = draw_moment(b, b.mu4, conv);
    // Var((y_g1 - y_g2)^2) expanded through independent single draws.
    const double var_d2 = m4a + m4b + 2.0 * m2a * m2b - (m2a - m2b) * (m2a - m2b) +
                          4.0 * gap * gap * (m2a + m2b) + 4.0 * gap * (m3a - m3b);
    double coeff;
    if (weights.empty()) {
      coeff = 1.0 / (16.0 * h * h * h * h);
    } else {
      const double w = weights[g].w1 + weights[g].w2;
      coeff = w * w * w * w / 16.0;
    }
    total.add(coeff * var_d2);
    scale += coeff * (m4a + m4b + 2.0 * m2a * m2b + 4.0 * gap * gap * (m2a + m2b));
  }
  const double value = total.value();
  if (value < -1e-9 * std::max(1.0, scale))
    throw std::domain_error("collapsed_varvar: negative variance; moment conventions disagree");
  return std::max(value, 0.0);
}

double collapsed_varvar_equal_moments(std::span<const StratumPair> groups) {
  const double h = static_cast<double>(groups.size());
  NeumaierSum total;
  for (const auto& [a, b] : groups) {
    const double gap = a.mean - b.mean;
    const double s2 = (a.s2 + b.s2) / 2.0;
    const double mu4 = (a.mu4 + b.mu4) / 2.0;
    total.add(mu4 + s2 * s2 + 4.0 * s2 * gap * gap);
  }
  return total.value() / (8.0 * h * h * h * h);
}

double collapsed_mse_printed(std::span<const StratumPair> groups) {
  const double h = static_cast<double>(groups.size());
  NeumaierSum quartic;
  for (const auto& [a, b] : groups) {
    const double gap = a.mean - b.mean;
    quartic.add(gap * gap * gap * gap);
  }
  return collapsed_varvar_equal_moments(groups) + quartic.value() / (16.0 * h * h * h * h);
}

double design_effect(const FinitePopulation& pop, bool ignore_fpc) {
  const double v1 = true_variance(pop, {DesignKind::OnePerStratum}, ignore_fpc);
  const double v2 = true_variance(pop, {DesignKind::TwoPerStratum}, ignore_fpc);
  if (v1 <= 0.0) throw ConfigError("design_effect: degenerate population (V1 = 0)");
  return v2 / v1;
}

double design_effect_idealized(const FinitePopulation& pop) {
  const double v1 = true_variance(pop, {DesignKind::OnePerStratum}, /*ignore_fpc=*/true);
  if (v1 <= 0.0) throw ConfigError("design_effect: degenerate population (V1 = 0)");
  NeumaierSum v2;
  for (std::size_t g = 0; g < pop.group_count(); ++g) {
    const auto hs = pop.strata_of_group(g);
    const auto a = summarize_stratum(pop.strata[hs[0]]);
    const auto b = summarize_stratum(pop.strata[hs[1]]);
    const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count);
    const double p1 = na / (na + nb), p2 = nb / (na + nb);
    const double gap = a.mean - b.mean;
    const double s2_limit = p1 * a.s2 + p2 * b.s2 + p1 * p2 * gap * gap;
    const double w = pop.weights[hs[0]] + pop.weights[hs[1]];
    v2.add(w * w * s2_limit / 2.0);
  }
  return v2.value() / v1;
}

TheoryReport theory_report(const FinitePopulation& pop, FpcConvention conv) {
  const auto groups = group_summaries(pop);
  TheoryReport r;
  r.convention = conv;
  if (conv == FpcConvention::Paper) {
    r.v1 = true_variance(pop, {DesignKind::OnePerStratum}, /*ignore_fpc=*/true);
    r.v2 = design_effect_idealized(pop) * r.v1;
  } else {
    r.v1 = true_variance(pop, {DesignKind::OnePerStratum}, /*ignore_fpc=*/false);
    r.v2 = true_variance(pop, {DesignKind::TwoPerStratum}, /*ignore_fpc=*/false);
  }
  r.deff = r.v2 / r.v1;
  r.ev_collapsed = expected_collapsed(groups, conv);
  r.bias = collapsed_bias(groups, conv);
  r.var_v = collapsed_varvar(groups, conv);
  r.mse = r.var_v + r.bias * r.bias;
  return r;
}

namespace {

double evaluate_statistic(const FinitePopulation& pop, const SampleDraw& draw,
                          OracleStatistic statistic, const std::vector<double>& weights,
                          const std::vector<std::size_t>& sizes) {
  switch (statistic) {
    case OracleStatistic::StratifiedMean:
      return stratified_mean(draw, weights).value;
    case OracleStatistic::CollapsedVariance:
      return collapsed_variance(draw, pop.group_of, pop.group_count(), pop.weights).value;
    case OracleStatistic::CollapsedVarianceSquared: {
      const double v = collapsed_variance(draw, pop.group_of, pop.group_count(), pop.weights).value;
      return v * v;
    }
    case OracleStatistic::TwoPerStratumVariance:
      return two_per_stratum_variance(draw, weights, sizes, /*ignore_fpc=*/false).value;
  }
  throw std::invalid_argument("oracle: unknown statistic");
}

constexpr std::uint64_t kOracleChunk = 8192;

// Chunked accumulation: chunk boundaries are fixed by the chunk size alone,
// so the reduction order (and every bit of the result) is independent of
// how many workers process the chunks.
double oracle_chunked(const FinitePopulation& pop, DesignSpec design,
                      OracleStatistic statistic, std::uint64_t cap, int workers,
                      bool parallel) {
  // Validate up front; nothing may throw inside the parallel region.
  if ((statistic == OracleStatistic::CollapsedVariance ||
       statistic == OracleStatistic::CollapsedVarianceSquared) &&
      design.kind != DesignKind::OnePerStratum)
    throw std::invalid_argument("oracle: collapsed variance needs the one-per-stratum design");
  if (statistic == OracleStatistic::TwoPerStratumVariance &&
      design.kind != DesignKind::TwoPerStratum)
    throw std::invalid_argument("oracle: two-per-stratum variance needs the matching design");

  const std::uint64_t total = sample_space_size(pop, design, cap);
  const std::uint64_t nchunks = (total + kOracleChunk - 1) / kOracleChunk;
  std::vector<double> chunk_sums(nchunks, 0.0);

  const auto weights = sampling_weights(pop, design);
  const auto sizes = sampling_sizes(pop, design);

  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (parallel)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
    SampleDraw draw;
    NeumaierSum local;
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * kOracleChunk;
    const std::uint64_t end = std::min(begin + kOracleChunk, total);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      decode_sample(pop, design, idx, draw);
      local.add(evaluate_statistic(pop, draw, statistic, weights, sizes));
    }
    chunk_sums[c] = local.value();
  }

  NeumaierSum grand;
  for (double s : chunk_sums) grand.add(s);
  return grand.value() / static_cast<double>(total);
}

}  // namespace

double oracle_expectation(const FinitePopulation& pop, DesignSpec design,
                          OracleStatistic statistic, std::uint64_t cap, int workers) {
  return oracle_chunked(pop, design, statistic, cap, workers, /*parallel=*/true);
}

double oracle_expectation_serial(const FinitePopulation& pop, DesignSpec design,
                                 OracleStatistic statistic, std::uint64_t cap) {
  return oracle_chunked(pop, design, statistic, cap, 1, /*parallel=*/false);
}

}  // namespace svar
