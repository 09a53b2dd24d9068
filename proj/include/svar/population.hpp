#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace svar {

enum class PopulationKind { BivariateGamma, NormalGroups };

// Table-2 style case studies: whether the two strata of a group share the
// same mean and/or the same variance.
enum class CaseStudy { EqMeanEqVar, NeqMeanEqVar, NeqMeanNeqVar, EqMeanNeqVar };

// Mean and variance multipliers applied to (base_mean, base_variance) for
// the first stratum of a group; the case study decides how the second
// stratum departs from it.
struct GroupMultiplier {
  double mean = 1.0;
  double variance = 1.0;
};

struct PopulationSpec {
  PopulationKind kind = PopulationKind::BivariateGamma;
  std::size_t total_units = 20000;
  std::size_t strata_count = 10;  // 2H; always even
  std::uint64_t seed = 0;

  // Bivariate-gamma superpopulation. x ~ Gamma(shape, scale); the scale
  // parameterization is fixed (shape/scale, not shape/rate) and the config
  // layer refuses anything else.
  double gamma_shape = 2.0;
  double gamma_scale = 5.0;

  // Normal group populations.
  CaseStudy case_study = CaseStudy::EqMeanEqVar;
  double base_mean = 0.0;
  double base_variance = 1.0;
  std::vector<GroupMultiplier> multipliers;  // one per group; empty = 1..H

  std::size_t group_count() const { return strata_count / 2; }
  void validate() const;  // throws ConfigError
};

// A fully enumerated finite population: y values organized stratum-major,
// strata paired into groups (two adjacent strata per group).
struct FinitePopulation {
  std::vector<std::vector<double>> strata;  // y values per stratum
  std::vector<std::vector<double>> x_aux;   // stratification variable, may be empty
  std::vector<std::size_t> group_of;        // stratum index -> group index
  std::vector<double> weights;              // W_h = N_h / N_T

  std::size_t strata_count() const { return strata.size(); }
  std::size_t group_count() const;
  std::size_t total_units() const;
  bool has_x() const { return !x_aux.empty(); }

  // The two strata forming group g (adjacent pairing: 2g, 2g+1).
  std::array<std::size_t, 2> strata_of_group(std::size_t g) const;
  double group_weight(std::size_t g) const;
  std::size_t group_size(std::size_t g) const;

  double mean() const;  // finite population mean of y

  void validate() const;  // throws ConfigError on broken invariants
};

// Finite-population moments of one stratum. All central moments use the
// (N-1) denominator, including mu3 and mu4.
struct StratumSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double s2 = 0.0;
  double mu3 = 0.0;
  double mu4 = 0.0;
};

FinitePopulation generate_bivariate_gamma(const PopulationSpec& spec);
FinitePopulation generate_normal_groups(const PopulationSpec& spec);
FinitePopulation generate_population(const PopulationSpec& spec);

StratumSummary summarize_stratum(std::span<const double> values);
std::vector<StratumSummary> summarize_population(const FinitePopulation& pop);

}  // namespace svar
