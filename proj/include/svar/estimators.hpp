#pragma once

#include <span>
#include <string>
#include <vector>

#include "svar/design.hpp"
#include "svar/population.hpp"

namespace svar {

enum class VarianceMethod { Collapsed, TwoPerStratumUnbiased, EB, CEB };

std::string method_name(VarianceMethod m);
VarianceMethod method_from_name(const std::string& name);

struct PointEstimate {
  double value = 0.0;
  std::vector<double> stratum_means;
  std::vector<double> weights;
};

struct VarianceEstimate {
  double value = 0.0;
  VarianceMethod method = VarianceMethod::Collapsed;
  std::vector<double> group_components;  // s2_g where applicable
};

// Horvitz-Thompson estimator of the population mean: sum_h W_h ybar_h over
// the design's sampling strata.
PointEstimate stratified_mean(const SampleDraw& sample, std::span<const double> weights);

// Randomization variance of the stratified mean:
//   sum_h W_h^2 (1/n_h)(1 - n_h/N_h) S_h^2,
// dropping the (1 - n_h/N_h) factor when ignore_fpc is set.
double true_variance(const FinitePopulation& pop, DesignSpec design, bool ignore_fpc);

// Within-pair collapsed variances s2_g = (y_g1 - y_g2)^2 / 2 for a
// one-per-stratum draw, in group order.
std::vector<double> collapsed_group_s2(const SampleDraw& sample,
                                       std::span<const std::size_t> group_of,
                                       std::size_t group_count);

// Collapsed-stratum variance estimator. With empty stratum_weights the
// equal-weight form (1/2H^2) sum_g s2_g applies; otherwise the general
// form sum_g (W_g1 + W_g2)^2 s2_g / 2, which reduces to the former when
// all strata carry weight 1/2H.
VarianceEstimate collapsed_variance(const SampleDraw& sample,
                                    std::span<const std::size_t> group_of,
                                    std::size_t group_count,
                                    std::span<const double> stratum_weights = {});

// Unbiased variance estimator for the two-per-stratum design:
//   sum_g W_g^2 (s2_g / 2)(1 - 2/N_g),
// with s2_g the within-stratum sample variance (denominator 1). sizes may
// be empty when ignore_fpc is set.
VarianceEstimate two_per_stratum_variance(const SampleDraw& sample,
                                          std::span<const double> weights,
                                          std::span<const std::size_t> sizes,
                                          bool ignore_fpc);

}  // namespace svar
