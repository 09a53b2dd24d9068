#pragma once

#include <optional>
#include <string>

#include "svar/montecarlo.hpp"
#include "svar/population.hpp"
#include "svar/theory.hpp"

namespace svar {

// Shortest round-trip decimal representation ('.' separator).
std::string format_double(double v);

// Columnar population file: `stratum,group,y[,x]`, stratum-major rows in
// generation order. header_comment (without the leading "# ") goes on the
// first line.
std::string population_csv(const FinitePopulation& pop, bool include_x,
                           const std::string& header_comment);

// Parses the columnar format back; weights are recomputed from the row
// counts. Throws IoError naming the offending row.
FinitePopulation parse_population_csv(const std::string& text);

// Per-stratum summary sidecar: `stratum,group,n,mean,s2,mu3,mu4`.
std::string summary_csv(const FinitePopulation& pop, const std::string& header_comment);

// Aggregated report: `study,estimator,e,metric,value,mc_se`.
std::string report_csv(const SimulationReport& report, const std::string& header_comment);

// Raw per-replication dump:
// `study,replication,estimator,e,estimate,covered,ci_len`.
std::string raw_dump_csv(const SimulationReport& report, const std::string& header_comment);

// Shrinkage diagnostics: `study,replication,g,s2,delta_eb,delta_ceb,fallback`.
std::string shrinkage_dump_csv(const SimulationReport& report, const std::string& header_comment);

// Enumeration-oracle columns appended to theory rows when feasible.
struct OracleColumns {
  double mean_d1 = 0.0;
  double ev_collapsed = 0.0;
  double var_collapsed = 0.0;
  double ev_two_per_stratum = 0.0;
};

// Two rows (paper and exact conventions):
// `convention,V1,V2,deff,Ev_collapsed,bias,var_v,mse[,oracle...]`.
std::string theory_csv(const TheoryReport& paper, const TheoryReport& exact,
                       const std::optional<OracleColumns>& oracle,
                       const std::string& header_comment);

void write_file(const std::string& path, const std::string& text);   // IoError
std::string read_file(const std::string& path);                      // IoError

}  // namespace svar
