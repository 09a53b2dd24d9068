#pragma once

#include <cstdint>
#include <string>

#include "svar/config.hpp"
#include "svar/csv.hpp"

namespace svar::cli {

struct GenerateResult {
  std::string population_csv;
  std::string summary_csv;
};

// Generates the first population variant of the config and renders the
// columnar file plus the per-stratum summary sidecar.
GenerateResult run_generate(const StudyConfig& cfg, const std::string& source_label);

// Closed-form theory for a parsed population (both FPC conventions), with
// enumeration-oracle columns whenever both designs enumerate under cap.
std::string run_theory(const FinitePopulation& pop, std::uint64_t oracle_cap,
                       const std::string& source_label, int workers = 0);

struct SimulateResult {
  std::string report_csv;
  std::string raw_csv;        // empty unless a raw dump was requested
  std::string shrinkage_csv;  // empty unless EB/CEB diagnostics exist
};

// Runs the configured study over every population variant. Output is
// byte-identical for any worker count.
SimulateResult run_simulate(const StudyConfig& cfg, const std::string& source_label);

}  // namespace svar::cli
