#include "svar/cli.hpp"

#include "svar/errors.hpp"
#include "svar/theory.hpp"

namespace svar::cli {

namespace {

std::string header_comment(const StudyConfig& cfg, const std::string& source_label) {
  std::string c = "seed=" + std::to_string(cfg.master_seed);
  if (cfg.population_seed) c += " population_seed=" + std::to_string(*cfg.population_seed);
  c += " source=" + source_label + " schema_version=" + std::to_string(cfg.schema_version);
  return c;
}

}  // namespace

GenerateResult run_generate(const StudyConfig& cfg, const std::string& source_label) {
  cfg.validate();
  const FinitePopulation pop = generate_population(cfg.population_spec(0));
  const std::string comment = header_comment(cfg, source_label);
  GenerateResult out;
  out.population_csv = population_csv(pop, cfg.include_x, comment);
  out.summary_csv = summary_csv(pop, comment);
  return out;
}

std::string run_theory(const FinitePopulation& pop, std::uint64_t oracle_cap,
                       const std::string& source_label, int workers) {
  const TheoryReport paper = theory_report(pop, FpcConvention::Paper);
  const TheoryReport exact = theory_report(pop, FpcConvention::Exact);
  std::optional<OracleColumns> oracle;
  try {
    OracleColumns cols;
    cols.mean_d1 = oracle_expectation(pop, {DesignKind::OnePerStratum},
                                      OracleStatistic::StratifiedMean, oracle_cap, workers);
    cols.ev_collapsed = oracle_expectation(pop, {DesignKind::OnePerStratum},
                                           OracleStatistic::CollapsedVariance, oracle_cap, workers);
    const double ev2 =
        oracle_expectation(pop, {DesignKind::OnePerStratum},
                           OracleStatistic::CollapsedVarianceSquared, oracle_cap, workers);
    cols.var_collapsed = ev2 - cols.ev_collapsed * cols.ev_collapsed;
    cols.ev_two_per_stratum =
        oracle_expectation(pop, {DesignKind::TwoPerStratum},
                           OracleStatistic::TwoPerStratumVariance, oracle_cap, workers);
    oracle = cols;
  } catch (const InfeasibleError&) {
    // Leave the oracle columns empty; the closed forms stand on their own.
  }
  return theory_csv(paper, exact, oracle, "source=" + source_label);
}

SimulateResult run_simulate(const StudyConfig& cfg, const std::string& source_label) {
  cfg.validate();
  const SimulationConfig sim = cfg.simulation_config();
  SimulationReport merged;
  for (std::size_t v = 0; v < cfg.variant_count(); ++v) {
    const FinitePopulation pop = generate_population(cfg.population_spec(v));
    const std::string label = cfg.variant_label(v);
    SimulationReport part;
    switch (cfg.study) {
      case StudyKind::Coverage:
        part = run_coverage(pop, sim, label);
        break;
      case StudyKind::RmseSweep:
        part = run_rmse_sweep(pop, sim, label);
        break;
      case StudyKind::Deff:
        part = run_deff_study(pop, sim, label);
        break;
    }
    merged.rows.insert(merged.rows.end(), part.rows.begin(), part.rows.end());
    merged.raw.insert(merged.raw.end(), part.raw.begin(), part.raw.end());
    merged.shrinkage_raw.insert(merged.shrinkage_raw.end(), part.shrinkage_raw.begin(),
                                part.shrinkage_raw.end());
  }

  const std::string comment = header_comment(cfg, source_label);
  SimulateResult out;
  out.report_csv = report_csv(merged, comment);
  if (!merged.raw.empty()) out.raw_csv = raw_dump_csv(merged, comment);
  if (!merged.shrinkage_raw.empty()) out.shrinkage_csv = shrinkage_dump_csv(merged, comment);
  return out;
}

}  // namespace svar::cli
