#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "svar/design.hpp"
#include "svar/estimators.hpp"
#include "svar/population.hpp"

namespace svar {

// The two collapsed strata of one group.
struct StratumPair {
  StratumSummary first;
  StratumSummary second;
};

std::vector<StratumPair> group_summaries(const FinitePopulation& pop);

// Paper: the single-draw moments E(y - Ybar)^r are taken as mu_r itself
// (FPC dropped). Exact: E(y - Ybar)^r = (1 - 1/N) mu_r under the (N-1)
// moment denominator, which is what exhaustive enumeration reproduces.
enum class FpcConvention { Paper, Exact };

// Per-group weight pair (W_g1, W_g2); empty spans mean the equal-weight
// layout W = 1/2H everywhere, matching the printed 1/4H^2 coefficients.
struct GroupWeights {
  double w1 = 0.0;
  double w2 = 0.0;
};

// Bias of the collapsed variance estimator against the FPC-free true
// variance. Paper form: (1/4H^2) sum_g (Ybar_g1 - Ybar_g2)^2. Exact form
// subtracts the dropped (1/4H^2) sum_g (S2_g1/N_g1 + S2_g2/N_g2) terms.
double collapsed_bias(std::span<const StratumPair> groups, FpcConvention conv,
                      std::span<const GroupWeights> weights = {});

// Design expectation of the collapsed variance estimator.
double expected_collapsed(std::span<const StratumPair> groups, FpcConvention conv,
                          std::span<const GroupWeights> weights = {});

// Variance of the collapsed variance estimator (the 1/16H^4 sum). Throws
// std::domain_error if the moment inputs produce a negative value, which
// legitimate finite-population moments cannot.
double collapsed_varvar(std::span<const StratumPair> groups, FpcConvention conv,
                        std::span<const GroupWeights> weights = {});

// Simplified form under equal within-group moments:
//   (1/8H^4) sum_g { mu4_g + (S2_g)^2 + 4 S2_g (Ybar_g1 - Ybar_g2)^2 },
// taking the within-group averages of the moment inputs.
double collapsed_varvar_equal_moments(std::span<const StratumPair> groups);

// The printed MSE: the equal-moments variance form plus
// (1/16H^4) sum_g (Ybar_g1 - Ybar_g2)^4. Note this differs from
// varvar + bias^2 whenever H > 1.
double collapsed_mse_printed(std::span<const StratumPair> groups);

// Design effect deff = V2/V1, the two randomization variances of the
// stratified mean (FPC included unless dropped).
double design_effect(const FinitePopulation& pop, bool ignore_fpc = false);

// Large-N design effect where the merged-stratum variance is replaced by
// its limit p1 S2_1 + p2 S2_2 + p1 p2 (Ybar_1 - Ybar_2)^2. Under equal
// splits this is exactly 1 whenever all within-group means agree,
// whatever the variances.
double design_effect_idealized(const FinitePopulation& pop);

// One row of closed-form theory for a population under both designs.
struct TheoryReport {
  FpcConvention convention = FpcConvention::Paper;
  double v1 = 0.0;            // true variance, Design 1
  double v2 = 0.0;            // true variance, Design 2
  double deff = 0.0;          // v2 / v1
  double ev_collapsed = 0.0;  // E[v] under Design 1
  double bias = 0.0;          // E[v] - V1(no FPC)
  double var_v = 0.0;         // Var[v]
  double mse = 0.0;           // var_v + bias^2
};

TheoryReport theory_report(const FinitePopulation& pop, FpcConvention conv);

enum class OracleStatistic {
  StratifiedMean,
  CollapsedVariance,
  CollapsedVarianceSquared,
  TwoPerStratumVariance,  // FPC kept, matching the unbiasedness statement
};

// Exhaustive-enumeration expectation of a statistic over all samples of
// the design: sum over samples of probability * statistic. Deterministic
// for any worker count (fixed-size chunks combined in order). Throws
// InfeasibleError when the sample space exceeds cap. workers = 0 uses the
// OpenMP default.
double oracle_expectation(const FinitePopulation& pop, DesignSpec design,
                          OracleStatistic statistic,
                          std::uint64_t cap = kDefaultEnumerationCap, int workers = 0);

// Serial reference for the parallel oracle; bit-identical by construction.
double oracle_expectation_serial(const FinitePopulation& pop, DesignSpec design,
                                 OracleStatistic statistic,
                                 std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace svar
