#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svar/design.hpp"
#include "svar/estimators.hpp"
#include "svar/population.hpp"
#include "svar/shrinkage.hpp"

namespace svar {

enum class StudyKind { Coverage, RmseSweep, Deff };

inline const std::vector<double> kDefaultEGrid = {0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0};

struct SimulationConfig {
  std::vector<DesignKind> designs = {DesignKind::OnePerStratum};
  std::vector<VarianceMethod> estimators = {VarianceMethod::Collapsed};
  std::size_t replications = 10000;
  double z = 1.96;                  // nominal 95% confidence multiplier
  ShrinkageConfig shrinkage;        // truncation margin for EB/CEB
  std::vector<double> e_grid = kDefaultEGrid;
  std::uint64_t master_seed = 20150815;
  bool fpc = true;                  // FPC in the true variance targeted by RMSE
  int workers = 0;                  // 0 = OpenMP default
  bool collect_raw = false;

  void validate(StudyKind study) const;  // throws ConfigError
};

// One aggregated metric (CP, AL, RMSE, V1, V2, deff) for one estimator.
struct MetricRow {
  std::string study;
  std::string estimator;               // empty for population metrics
  std::optional<double> e;             // truncation margin where relevant
  std::string metric;
  double value = 0.0;
  std::optional<double> mc_se;         // absent when undefined (R = 1)
};

// Per-replication record, kept only when collect_raw is set.
struct RawRecord {
  std::string study;
  std::uint64_t replication = 0;
  VarianceMethod method = VarianceMethod::Collapsed;
  std::optional<double> e;
  double estimate = 0.0;
  std::optional<bool> covered;         // coverage studies only
  std::optional<double> ci_len;
};

// Per-replication shrinkage diagnostics (coverage studies with EB/CEB).
struct ShrinkageRecord {
  std::string study;
  std::uint64_t replication = 0;
  std::size_t group = 0;
  double s2 = 0.0;
  double delta_eb = 0.0;
  double delta_ceb = 0.0;
  bool fallback = false;
};

struct SimulationReport {
  std::vector<MetricRow> rows;
  std::vector<RawRecord> raw;
  std::vector<ShrinkageRecord> shrinkage_raw;
};

// Coverage probability and average length of the nominal CI
// ybar_st +/- z sqrt(v) over cfg.replications replications, one row pair
// (CP, AL) per (design, compatible estimator). All estimators of a design
// consume the same draw within a replication.
SimulationReport run_coverage(const FinitePopulation& pop, const SimulationConfig& cfg,
                              const std::string& study_label);

// Empirical relative MSE mean_r |v* - V| / V of the collapsed, EB and CEB
// estimators under Design 1, for every truncation margin in e_grid; all
// estimators and grid points consume the same draw within a replication.
SimulationReport run_rmse_sweep(const FinitePopulation& pop, const SimulationConfig& cfg,
                                const std::string& study_label);

// Exact population quantities V1, V2 (from the frozen population) and deff;
// no sampling involved.
SimulationReport run_deff_study(const FinitePopulation& pop, const SimulationConfig& cfg,
                                const std::string& study_label);

// Serial reference implementations: the same per-replication kernels run in
// a plain loop with streaming aggregation. Reports are bit-identical to the
// parallel drivers for any worker count.
SimulationReport run_coverage_serial(const FinitePopulation& pop, const SimulationConfig& cfg,
                                     const std::string& study_label);
SimulationReport run_rmse_sweep_serial(const FinitePopulation& pop, const SimulationConfig& cfg,
                                       const std::string& study_label);

}  // namespace svar
