// Command-line front end for the stratified variance estimation library.
//
// Subcommands: generate, theory, simulate, presets list. Exit codes:
// 0 success, 2 config/schema error, 3 I/O error, 4 infeasibility.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "svar/cli.hpp"
#include "svar/config.hpp"
#include "svar/csv.hpp"
#include "svar/errors.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = -1;
  std::string out;
  std::string raw_dump;
};

void add_config_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Path to a study config (JSON)");
  cmd->add_option("--preset", opts.preset, "Embedded preset name (see `presets list`)");
  cmd->add_option("--seed", opts.seed, "Master seed override")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--workers", opts.workers, "Worker threads (0 = all cores)");
  cmd->add_option("--out", opts.out, "Output file path");
  cmd->add_option("--raw-dump", opts.raw_dump, "Per-replication dump file path");
}

svar::StudyConfig resolve_config(const CommonOpts& opts) {
  if (opts.config_path.empty() == opts.preset.empty())
    throw svar::ConfigError("exactly one of --config or --preset is required");
  svar::StudyConfig cfg = opts.config_path.empty() ? svar::preset_config(opts.preset)
                                                   : svar::load_config_file(opts.config_path);
  if (opts.seed_set) {
    cfg.master_seed = opts.seed;
    cfg.population_seed.reset();  // rederive everything from the new master
  }
  if (opts.workers >= 0) cfg.workers = opts.workers;
  if (!opts.out.empty()) cfg.out = opts.out;
  if (!opts.raw_dump.empty()) cfg.raw_dump = opts.raw_dump;
  cfg.validate();
  return cfg;
}

std::string source_label(const CommonOpts& opts) {
  return opts.preset.empty() ? "config:" + opts.config_path : "preset:" + opts.preset;
}

std::string sidecar_path(const std::string& out, const char* tag) {
  std::filesystem::path p(out);
  const std::string stem = p.stem().string();
  p.replace_filename(stem + "." + tag + ".csv");
  return p.string();
}

int run(int argc, char** argv) {
  CLI::App app{"Variance estimators for one-PSU-per-stratum stratified designs"};
  app.require_subcommand(1);

  CommonOpts gen_opts;
  CLI::App* gen = app.add_subcommand("generate", "Generate a population file plus summary sidecar");
  add_config_options(gen, gen_opts);

  CommonOpts sim_opts;
  CLI::App* sim = app.add_subcommand("simulate", "Run the configured study and write report CSVs");
  add_config_options(sim, sim_opts);

  std::string theory_pop, theory_out;
  std::uint64_t theory_cap = svar::kDefaultEnumerationCap;
  int theory_workers = 0;
  CLI::App* theory = app.add_subcommand("theory", "Closed-form theory for a population file");
  theory->add_option("--population", theory_pop, "Population CSV to analyze")->required();
  theory->add_option("--out", theory_out, "Output file path");
  theory->add_option("--oracle-cap", theory_cap, "Enumeration cap for the oracle columns");
  theory->add_option("--workers", theory_workers, "Worker threads for the oracle");

  CLI::App* presets = app.add_subcommand("presets", "Preset utilities");
  CLI::App* presets_list = presets->add_subcommand("list", "List embedded presets");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    const svar::StudyConfig cfg = resolve_config(gen_opts);
    if (cfg.out.empty())
      throw svar::ConfigError("generate: an output path is required (--out or output.out)");
    const auto result = svar::cli::run_generate(cfg, source_label(gen_opts));
    svar::write_file(cfg.out, result.population_csv);
    const std::string summary_path = sidecar_path(cfg.out, "summary");
    svar::write_file(summary_path, result.summary_csv);
    std::cout << "wrote " << cfg.out << " and " << summary_path << "\n";
    return 0;
  }

  if (sim->parsed()) {
    const svar::StudyConfig cfg = resolve_config(sim_opts);
    if (cfg.out.empty())
      throw svar::ConfigError("simulate: an output path is required (--out or output.out)");
    const auto result = svar::cli::run_simulate(cfg, source_label(sim_opts));
    svar::write_file(cfg.out, result.report_csv);
    std::cout << "wrote " << cfg.out << "\n";
    if (!result.raw_csv.empty()) {
      svar::write_file(cfg.raw_dump, result.raw_csv);
      std::cout << "wrote " << cfg.raw_dump << "\n";
      if (!result.shrinkage_csv.empty()) {
        const std::string shrink_path = sidecar_path(cfg.raw_dump, "shrinkage");
        svar::write_file(shrink_path, result.shrinkage_csv);
        std::cout << "wrote " << shrink_path << "\n";
      }
    }
    return 0;
  }

  if (theory->parsed()) {
    const svar::FinitePopulation pop =
        svar::parse_population_csv(svar::read_file(theory_pop));
    const std::string csv = svar::cli::run_theory(pop, theory_cap, theory_pop, theory_workers);
    if (theory_out.empty()) {
      std::cout << csv;
    } else {
      svar::write_file(theory_out, csv);
      std::cout << "wrote " << theory_out << "\n";
    }
    return 0;
  }

  if (presets->parsed()) {
    if (!presets_list->parsed())
      throw svar::ConfigError("presets: expected `presets list`");
    for (const auto& name : svar::preset_names()) std::cout << name << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const svar::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const svar::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const svar::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
