// Compares the serial reference implementations of the Monte Carlo kernels
// against the OpenMP drivers at several worker counts, and checks that the
// reports stay byte-identical while doing it.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include <omp.h>

#include "svar/cli.hpp"
#include "svar/config.hpp"
#include "svar/csv.hpp"
#include "svar/montecarlo.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Timed {
  double seconds = 0.0;
  std::string csv;
};

template <typename F>
Timed timed_report(F&& f) {
  const auto t0 = Clock::now();
  svar::SimulationReport rep = f();
  Timed out;
  out.seconds = seconds_since(t0);
  out.csv = svar::report_csv(rep, "");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t replications = 20000;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--replications" && i + 1 < argc) {
      replications = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::cerr << "usage: svar_bench [--replications N]\n";
      return 2;
    }
  }

  svar::StudyConfig cfg = svar::preset_config("table4");
  cfg.replications = replications;
  cfg.case_variants = {svar::CaseStudy::NeqMeanEqVar};

  const svar::FinitePopulation pop = svar::generate_population(cfg.population_spec(0));
  svar::SimulationConfig sim = cfg.simulation_config();

  std::cout << "coverage study, " << replications << " replications, population of "
            << pop.total_units() << " units\n";

  const Timed serial = timed_report(
      [&] { return svar::run_coverage_serial(pop, sim, cfg.variant_label(0)); });
  std::cout << "serial reference      " << serial.seconds << " s\n";

  bool all_match = true;
  for (int workers : {1, 2, omp_get_max_threads()}) {
    sim.workers = workers;
    const Timed par = timed_report(
        [&] { return svar::run_coverage(pop, sim, cfg.variant_label(0)); });
    const bool match = par.csv == serial.csv;
    all_match = all_match && match;
    std::cout << "openmp workers=" << workers << "       " << par.seconds << " s  speedup "
              << serial.seconds / par.seconds << "x  " << (match ? "report identical" : "REPORT MISMATCH")
              << "\n";
  }

  if (!all_match) {
    std::cerr << "parallel reports diverged from the serial reference\n";
    return 1;
  }
  return 0;
}
