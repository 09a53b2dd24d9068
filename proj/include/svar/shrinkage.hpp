#pragma once

#include <optional>
#include <span>
#include <vector>

#include "svar/estimators.hpp"

namespace svar {

// Truncation rule for the method-of-moments prior fit: the working prior
// parameter is a* = max(1.5 + e, a_MM), keeping every downstream formula
// (which needs a > 1.5) well defined.
struct ShrinkageConfig {
  double truncation_margin = 0.5;  // e

  double floor() const { return 1.5 + truncation_margin; }
  void validate() const;  // throws ConfigError unless e > 0
};

// Fitted Inv-Gamma(a, a) prior and the per-group empirical Bayes (EB) and
// constrained empirical Bayes (CEB) estimates of the group variances.
//
// The model: s2_g / S2_g ~ chi-squared(1) with S2_g ~ Inv-Gamma(a, a),
// giving posterior Inv-Gamma(a + 1/2, a + s2_g/2), Bayes estimate
// (2a + s2_g) / (2a - 1), and method-of-moments fit a_MM = s2. / (s2. - 1).
struct ShrinkageFit {
  double s2_mean = 0.0;          // s2., the ensemble mean of the s2_g
  std::optional<double> a_mm;    // raw fit; disengaged only when s2. == 1
  double a_star = 0.0;           // truncated fit, always > 1.5
  std::vector<double> eb;        // delta^EB_g
  std::vector<double> ceb;       // delta^CEB_g after the fallback
  std::vector<double> ceb_raw;   // pre-fallback values; may be <= 0
  std::vector<char> fallback;    // 1 where EB replaced a nonpositive CEB
                                 // value or the degenerate branch fired

  std::size_t groups() const { return eb.size(); }
};

// Prior fit only: s2., a_MM and the truncated a*.
ShrinkageFit fit_prior(std::span<const double> s2, const ShrinkageConfig& cfg);

// delta^EB_g = (2a* + s2_g) / (2a* - 1), elementwise.
std::vector<double> eb_estimates(const ShrinkageFit& fit, std::span<const double> s2);

// Posterior variance of S2_g given s2_g under Inv-Gamma(a + 1/2, a + s2_g/2):
//   2 (2a + s2_g)^2 / ((2a - 1)^2 (2a - 3)).
// Throws std::domain_error unless a > 1.5.
double posterior_variance(double a, double s2_g);

// Fills ceb_raw/ceb/fallback from the fitted prior (requires fit.eb).
// Pre-fallback the CEB ensemble keeps the EB mean and re-expands the EB
// spread by the bracket factor; nonpositive entries fall back to EB per
// group, and a zero-spread ensemble falls back entirely.
void ceb_estimates(ShrinkageFit& fit, std::span<const double> s2);

// Full pipeline: prior fit, EB, CEB.
ShrinkageFit fit_shrinkage(std::span<const double> s2, const ShrinkageConfig& cfg);

// Design-variance estimators for the one-PSU-per-stratum design:
// (1/2H^2) sum_g delta_g with the EB or CEB ensemble.
VarianceEstimate eb_design_variance(const ShrinkageFit& fit);
VarianceEstimate ceb_design_variance(const ShrinkageFit& fit);

}  // namespace svar
