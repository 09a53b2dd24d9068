#include "svar/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "svar/errors.hpp"
#include "svar/numerics.hpp"

namespace svar {

using Json = nlohmann::ordered_json;

std::string case_study_name(CaseStudy c) {
  switch (c) {
    case CaseStudy::EqMeanEqVar: return "eq_mean_eq_var";
    case CaseStudy::NeqMeanEqVar: return "neq_mean_eq_var";
    case CaseStudy::NeqMeanNeqVar: return "neq_mean_neq_var";
    case CaseStudy::EqMeanNeqVar: return "eq_mean_neq_var";
  }
  return "unknown";
}

CaseStudy case_study_from_name(const std::string& name) {
  if (name == "eq_mean_eq_var") return CaseStudy::EqMeanEqVar;
  if (name == "neq_mean_eq_var") return CaseStudy::NeqMeanEqVar;
  if (name == "neq_mean_neq_var") return CaseStudy::NeqMeanNeqVar;
  if (name == "eq_mean_neq_var") return CaseStudy::EqMeanNeqVar;
  throw ConfigError("unknown case_study: " + name);
}

std::string design_name(DesignKind d) {
  return d == DesignKind::OnePerStratum ? "one_per_stratum" : "two_per_stratum";
}

DesignKind design_from_name(const std::string& name) {
  if (name == "one_per_stratum") return DesignKind::OnePerStratum;
  if (name == "two_per_stratum") return DesignKind::TwoPerStratum;
  throw ConfigError("unknown design: " + name);
}

std::string study_name(StudyKind s) {
  switch (s) {
    case StudyKind::Coverage: return "coverage";
    case StudyKind::RmseSweep: return "rmse_sweep";
    case StudyKind::Deff: return "deff";
  }
  return "unknown";
}

StudyKind study_from_name(const std::string& name) {
  if (name == "coverage") return StudyKind::Coverage;
  if (name == "rmse_sweep") return StudyKind::RmseSweep;
  if (name == "deff") return StudyKind::Deff;
  throw ConfigError("unknown study: " + name);
}

std::size_t StudyConfig::variant_count() const {
  const std::size_t cases = kind == PopulationKind::NormalGroups ? case_variants.size() : 1;
  return cases * strata_variants.size();
}

PopulationSpec StudyConfig::population_spec(std::size_t variant) const {
  if (variant >= variant_count()) throw ConfigError("population variant out of range");
  const std::size_t n_strata = strata_variants.size();
  const std::size_t case_idx = variant / n_strata;
  const std::size_t strata_idx = variant % n_strata;

  PopulationSpec spec;
  spec.kind = kind;
  spec.total_units = total_units;
  spec.strata_count = strata_variants[strata_idx];
  spec.gamma_shape = gamma_shape;
  spec.gamma_scale = gamma_scale;
  if (kind == PopulationKind::NormalGroups) {
    spec.case_study = case_variants[case_idx];
    spec.base_mean = base_mean;
    spec.base_variance = base_variance;
    spec.multipliers = multipliers;
  }
  if (population_seed) {
    spec.seed = variant_count() == 1 ? *population_seed : mix_seed(*population_seed, variant);
  } else {
    spec.seed = mix_seed(master_seed, kPopulationStream + variant);
  }
  return spec;
}

std::string StudyConfig::variant_label(std::size_t variant) const {
  const std::size_t n_strata = strata_variants.size();
  const std::size_t case_idx = variant / n_strata;
  const std::size_t strata_idx = variant % n_strata;
  std::string label = kind == PopulationKind::BivariateGamma
                          ? "gamma"
                          : case_study_name(case_variants[case_idx]);
  if (strata_variants.size() > 1 || kind == PopulationKind::BivariateGamma)
    label += "_strata" + std::to_string(strata_variants[strata_idx]);
  return label;
}

SimulationConfig StudyConfig::simulation_config() const {
  SimulationConfig sim;
  sim.designs = designs;
  sim.estimators = estimators;
  sim.replications = replications;
  sim.z = z;
  sim.shrinkage.truncation_margin = truncation_margin;
  sim.e_grid = e_grid;
  sim.master_seed = master_seed;
  sim.fpc = fpc;
  sim.workers = workers;
  sim.collect_raw = !raw_dump.empty();
  return sim;
}

void StudyConfig::validate() const {
  if (schema_version != 1) throw ConfigError("config: unsupported schema_version");
  if (strata_variants.empty()) throw ConfigError("population: strata_count list is empty");
  if (kind == PopulationKind::NormalGroups && case_variants.empty())
    throw ConfigError("population: normal_groups needs at least one case_study");
  for (std::size_t v = 0; v < variant_count(); ++v) population_spec(v).validate();
  simulation_config().validate(study);
}

namespace {

[[noreturn]] void bad_key(const std::string& section, const std::string& key) {
  throw ConfigError("config: unknown key \"" + key + "\" in section \"" + section + "\"");
}

void check_keys(const Json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) bad_key(section, key);
  }
}

const Json& require(const Json& obj, const std::string& section, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ConfigError("config: missing key \"" + std::string(key) + "\" in section \"" +
                      section + "\"");
  return *it;
}

double as_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError("config: \"" + where + "\" must be a number");
  return v.get<double>();
}

std::uint64_t as_count(const Json& v, const std::string& where) {
  if (!v.is_number_unsigned())
    throw ConfigError("config: \"" + where + "\" must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string as_string(const Json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError("config: \"" + where + "\" must be a string");
  return v.get<std::string>();
}

bool as_bool(const Json& v, const std::string& where) {
  if (!v.is_boolean()) throw ConfigError("config: \"" + where + "\" must be a boolean");
  return v.get<bool>();
}

// Scalar-or-list helper: "strata_count": 10 and "strata_count": [10, 50]
// are both accepted.
std::vector<Json> scalar_or_list(const Json& v) {
  if (v.is_array()) return std::vector<Json>(v.begin(), v.end());
  return {v};
}

}  // namespace

StudyConfig parse_config(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& err) {
    throw ConfigError(std::string("config: invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
  check_keys(doc, "(root)", {"schema_version", "population", "design", "estimators",
                             "simulation", "output"});

  StudyConfig cfg;
  cfg.schema_version = static_cast<int>(as_count(require(doc, "(root)", "schema_version"),
                                                 "schema_version"));

  // population
  const Json& pop = require(doc, "(root)", "population");
  if (!pop.is_object()) throw ConfigError("config: \"population\" must be an object");
  const std::string kind_str = as_string(require(pop, "population", "kind"), "population.kind");
  if (kind_str == "bivariate_gamma") {
    cfg.kind = PopulationKind::BivariateGamma;
    check_keys(pop, "population",
               {"kind", "total_units", "strata_count", "seed", "include_x", "gamma"});
  } else if (kind_str == "normal_groups") {
    cfg.kind = PopulationKind::NormalGroups;
    check_keys(pop, "population",
               {"kind", "total_units", "strata_count", "seed", "include_x", "case_study",
                "base_mean", "base_variance", "multipliers"});
  } else {
    throw ConfigError("config: unknown population kind: " + kind_str);
  }
  cfg.total_units = as_count(require(pop, "population", "total_units"), "population.total_units");
  cfg.strata_variants.clear();
  for (const Json& v : scalar_or_list(require(pop, "population", "strata_count")))
    cfg.strata_variants.push_back(as_count(v, "population.strata_count"));
  if (pop.contains("seed")) cfg.population_seed = as_count(pop["seed"], "population.seed");
  if (pop.contains("include_x")) cfg.include_x = as_bool(pop["include_x"], "population.include_x");
  if (cfg.kind == PopulationKind::BivariateGamma) {
    if (pop.contains("gamma")) {
      const Json& g = pop["gamma"];
      check_keys(g, "population.gamma", {"shape", "scale", "parameterization"});
      if (g.contains("shape")) cfg.gamma_shape = as_number(g["shape"], "gamma.shape");
      if (g.contains("scale")) cfg.gamma_scale = as_number(g["scale"], "gamma.scale");
      // Only the shape/scale parameterization is supported; a config that
      // names anything else is refusing to say what it means.
      if (g.contains("parameterization") &&
          as_string(g["parameterization"], "gamma.parameterization") != "shape_scale")
        throw ConfigError("config: gamma.parameterization must be \"shape_scale\"");
    }
  } else {
    cfg.case_variants.clear();
    for (const Json& v : scalar_or_list(require(pop, "population", "case_study")))
      cfg.case_variants.push_back(case_study_from_name(as_string(v, "population.case_study")));
    cfg.base_mean = as_number(require(pop, "population", "base_mean"), "population.base_mean");
    cfg.base_variance =
        as_number(require(pop, "population", "base_variance"), "population.base_variance");
    if (pop.contains("multipliers")) {
      const Json& m = pop["multipliers"];
      if (!m.is_array()) throw ConfigError("config: population.multipliers must be an array");
      for (const Json& pair : m) {
        if (!pair.is_array() || pair.size() != 2)
          throw ConfigError("config: each multiplier must be a [mean, variance] pair");
        cfg.multipliers.push_back({as_number(pair[0], "multipliers.mean"),
                                   as_number(pair[1], "multipliers.variance")});
      }
    }
  }

  // design
  const Json& design = require(doc, "(root)", "design");
  check_keys(design, "design", {"kinds"});
  const Json& kinds = require(design, "design", "kinds");
  if (!kinds.is_array()) throw ConfigError("config: design.kinds must be an array");
  cfg.designs.clear();
  for (const Json& k : kinds) cfg.designs.push_back(design_from_name(as_string(k, "design.kinds")));

  // estimators
  const Json& est = require(doc, "(root)", "estimators");
  check_keys(est, "estimators", {"set", "truncation_margin"});
  const Json& set = require(est, "estimators", "set");
  if (!set.is_array()) throw ConfigError("config: estimators.set must be an array");
  cfg.estimators.clear();
  for (const Json& m : set) cfg.estimators.push_back(method_from_name(as_string(m, "estimators.set")));
  if (est.contains("truncation_margin"))
    cfg.truncation_margin = as_number(est["truncation_margin"], "estimators.truncation_margin");

  // simulation
  const Json& sim = require(doc, "(root)", "simulation");
  check_keys(sim, "simulation",
             {"study", "replications", "z", "e_grid", "master_seed", "fpc", "workers"});
  cfg.study = study_from_name(as_string(require(sim, "simulation", "study"), "simulation.study"));
  if (sim.contains("replications"))
    cfg.replications = as_count(sim["replications"], "simulation.replications");
  if (sim.contains("z")) cfg.z = as_number(sim["z"], "simulation.z");
  if (sim.contains("e_grid")) {
    const Json& grid = sim["e_grid"];
    if (!grid.is_array()) throw ConfigError("config: simulation.e_grid must be an array");
    cfg.e_grid.clear();
    for (const Json& e : grid) cfg.e_grid.push_back(as_number(e, "simulation.e_grid"));
  }
  if (sim.contains("master_seed"))
    cfg.master_seed = as_count(sim["master_seed"], "simulation.master_seed");
  if (sim.contains("fpc")) cfg.fpc = as_bool(sim["fpc"], "simulation.fpc");
  if (sim.contains("workers"))
    cfg.workers = static_cast<int>(as_count(sim["workers"], "simulation.workers"));

  // output
  if (doc.contains("output")) {
    const Json& out = doc["output"];
    check_keys(out, "output", {"out", "raw_dump"});
    if (out.contains("out")) cfg.out = as_string(out["out"], "output.out");
    if (out.contains("raw_dump")) cfg.raw_dump = as_string(out["raw_dump"], "output.raw_dump");
  }

  cfg.validate();
  return cfg;
}

std::string serialize_config(const StudyConfig& cfg) {
  Json doc;
  doc["schema_version"] = cfg.schema_version;

  Json pop;
  pop["kind"] = cfg.kind == PopulationKind::BivariateGamma ? "bivariate_gamma" : "normal_groups";
  pop["total_units"] = cfg.total_units;
  pop["strata_count"] = cfg.strata_variants;
  if (cfg.population_seed) pop["seed"] = *cfg.population_seed;
  pop["include_x"] = cfg.include_x;
  if (cfg.kind == PopulationKind::BivariateGamma) {
    pop["gamma"] = {{"shape", cfg.gamma_shape},
                    {"scale", cfg.gamma_scale},
                    {"parameterization", "shape_scale"}};
  } else {
    Json cases = Json::array();
    for (CaseStudy c : cfg.case_variants) cases.push_back(case_study_name(c));
    pop["case_study"] = cases;
    pop["base_mean"] = cfg.base_mean;
    pop["base_variance"] = cfg.base_variance;
    if (!cfg.multipliers.empty()) {
      Json mult = Json::array();
      for (const auto& m : cfg.multipliers) mult.push_back({m.mean, m.variance});
      pop["multipliers"] = mult;
    }
  }
  doc["population"] = pop;

  Json kinds = Json::array();
  for (DesignKind d : cfg.designs) kinds.push_back(design_name(d));
  doc["design"] = {{"kinds", kinds}};

  Json set = Json::array();
  for (VarianceMethod m : cfg.estimators) set.push_back(method_name(m));
  doc["estimators"] = {{"set", set}, {"truncation_margin", cfg.truncation_margin}};

  doc["simulation"] = {{"study", study_name(cfg.study)},
                       {"replications", cfg.replications},
                       {"z", cfg.z},
                       {"e_grid", cfg.e_grid},
                       {"master_seed", cfg.master_seed},
                       {"fpc", cfg.fpc},
                       {"workers", cfg.workers}};

  doc["output"] = {{"out", cfg.out}, {"raw_dump", cfg.raw_dump}};
  return doc.dump(2) + "\n";
}

StudyConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace svar
