#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svar/montecarlo.hpp"
#include "svar/population.hpp"

namespace svar {

inline constexpr std::uint64_t kDefaultMasterSeed = 20150815;

// One study-configuration document. Sections: population, design,
// estimators, simulation, output. strata_count and case_study accept a
// scalar or a list; a list fans the study out over one population variant
// per entry (cases outer, strata counts inner).
struct StudyConfig {
  int schema_version = 1;

  // population
  PopulationKind kind = PopulationKind::BivariateGamma;
  std::size_t total_units = 20000;
  std::vector<std::size_t> strata_variants = {10};
  std::optional<std::uint64_t> population_seed;  // derived from master_seed when absent
  bool include_x = false;
  double gamma_shape = 2.0;
  double gamma_scale = 5.0;
  std::vector<CaseStudy> case_variants;  // normal_groups only
  double base_mean = 0.0;
  double base_variance = 1.0;
  std::vector<GroupMultiplier> multipliers;  // empty = 1..H per variant

  // design
  std::vector<DesignKind> designs = {DesignKind::OnePerStratum};

  // estimators
  std::vector<VarianceMethod> estimators;
  double truncation_margin = 0.5;

  // simulation
  StudyKind study = StudyKind::Coverage;
  std::size_t replications = 10000;
  double z = 1.96;
  std::vector<double> e_grid = kDefaultEGrid;
  std::uint64_t master_seed = kDefaultMasterSeed;
  bool fpc = true;
  int workers = 0;

  // output
  std::string out;
  std::string raw_dump;

  bool operator==(const StudyConfig&) const = default;

  std::size_t variant_count() const;
  PopulationSpec population_spec(std::size_t variant) const;
  std::string variant_label(std::size_t variant) const;
  SimulationConfig simulation_config() const;
  void validate() const;  // throws ConfigError
};

std::string case_study_name(CaseStudy c);
CaseStudy case_study_from_name(const std::string& name);
std::string design_name(DesignKind d);
DesignKind design_from_name(const std::string& name);
std::string study_name(StudyKind s);
StudyKind study_from_name(const std::string& name);

// Strict parser: unknown keys and malformed values raise ConfigError with
// the offending key. parse(serialize(parse(doc))) == parse(doc).
StudyConfig parse_config(const std::string& json_text);
std::string serialize_config(const StudyConfig& cfg);

StudyConfig load_config_file(const std::string& path);  // IoError on read failure

// Embedded table/figure reproduction presets: table1, table3, table4,
// figure1.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);
StudyConfig preset_config(const std::string& name);

}  // namespace svar
