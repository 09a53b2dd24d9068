#include "svar/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>

#include "svar/errors.hpp"
#include "svar/numerics.hpp"

namespace svar {

namespace {

bool is_design1_method(VarianceMethod m) {
  return m == VarianceMethod::Collapsed || m == VarianceMethod::EB || m == VarianceMethod::CEB;
}

bool compatible(VarianceMethod m, DesignKind d) {
  return is_design1_method(m) ? d == DesignKind::OnePerStratum : d == DesignKind::TwoPerStratum;
}

bool needs_shrinkage(const std::vector<VarianceMethod>& methods) {
  return std::any_of(methods.begin(), methods.end(), [](VarianceMethod m) {
    return m == VarianceMethod::EB || m == VarianceMethod::CEB;
  });
}

}  // namespace

void SimulationConfig::validate(StudyKind study) const {
  if (replications < 1) throw ConfigError("simulation: replications must be >= 1");
  if (!(z > 0.0)) throw ConfigError("simulation: z must be positive");
  if (workers < 0) throw ConfigError("simulation: workers must be >= 0");
  if (designs.empty()) throw ConfigError("simulation: at least one design required");
  for (std::size_t i = 0; i < designs.size(); ++i)
    for (std::size_t j = i + 1; j < designs.size(); ++j)
      if (designs[i] == designs[j]) throw ConfigError("simulation: duplicate design");
  for (std::size_t i = 0; i < estimators.size(); ++i)
    for (std::size_t j = i + 1; j < estimators.size(); ++j)
      if (estimators[i] == estimators[j]) throw ConfigError("simulation: duplicate estimator");

  if (study == StudyKind::Deff) return;  // population quantities only

  if (estimators.empty()) throw ConfigError("simulation: estimator set is empty");
  if (needs_shrinkage(estimators)) shrinkage.validate();

  if (study == StudyKind::RmseSweep) {
    if (designs.size() != 1 || designs[0] != DesignKind::OnePerStratum)
      throw ConfigError("rmse_sweep: runs under the one-per-stratum design only");
    for (VarianceMethod m : estimators)
      if (!is_design1_method(m))
        throw ConfigError("rmse_sweep: estimator " + method_name(m) +
                          " does not apply to the one-per-stratum design");
    if (e_grid.empty()) throw ConfigError("rmse_sweep: e_grid is empty");
    for (double e : e_grid)
      if (!(e > 0.0)) throw ConfigError("rmse_sweep: e_grid entries must be > 0");
    return;
  }

  // Coverage: every estimator needs a requested design and vice versa.
  for (VarianceMethod m : estimators) {
    const bool ok = std::any_of(designs.begin(), designs.end(),
                                [m](DesignKind d) { return compatible(m, d); });
    if (!ok)
      throw ConfigError("coverage: estimator " + method_name(m) +
                        " has no compatible design in the config");
  }
  for (DesignKind d : designs) {
    const bool ok = std::any_of(estimators.begin(), estimators.end(),
                                [d](VarianceMethod m) { return compatible(m, d); });
    if (!ok)
      throw ConfigError("coverage: a configured design has no compatible estimator");
  }
}

namespace {

struct MeanSe {
  double mean = 0.0;
  std::optional<double> se;
};

// Streaming mean over a fixed order, then the usual sd/sqrt(R) error.
MeanSe mean_and_se(std::span<const double> xs) {
  MeanSe out;
  NeumaierSum total;
  for (double x : xs) total.add(x);
  const double n = static_cast<double>(xs.size());
  out.mean = total.value() / n;
  if (xs.size() >= 2) {
    NeumaierSum dev2;
    for (double x : xs) {
      const double d = x - out.mean;
      dev2.add(d * d);
    }
    out.se = std::sqrt(dev2.value() / (n - 1.0) / n);
  }
  return out;
}

template <typename Kernel>
void drive_replications(std::size_t replications, int workers, bool parallel, Kernel&& kernel) {
  // Structural errors (infeasible design, shape mismatches) surface here;
  // the parallel region below must not throw.
  kernel(0);
  if (parallel) {
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(replications); ++r)
      kernel(static_cast<std::uint64_t>(r));
  } else {
    for (std::uint64_t r = 0; r < replications; ++r) kernel(r);
  }
}

SimulationReport coverage_impl(const FinitePopulation& pop, const SimulationConfig& cfg,
                               const std::string& study_label, bool parallel) {
  cfg.validate(StudyKind::Coverage);
  pop.validate();
  const double ybar_pop = pop.mean();
  const std::size_t reps = cfg.replications;
  const std::size_t groups = pop.group_count();

  SimulationReport report;
  for (DesignKind dk : cfg.designs) {
    const DesignSpec design{dk};
    std::vector<VarianceMethod> methods;
    for (VarianceMethod m : cfg.estimators)
      if (compatible(m, dk)) methods.push_back(m);

    const auto weights = sampling_weights(pop, design);
    const auto sizes = sampling_sizes(pop, design);
    const std::size_t m_count = methods.size();
    const bool shrink = needs_shrinkage(methods);

    std::vector<double> est_slot(reps * m_count), len_slot(reps * m_count);
    std::vector<char> cov_slot(reps * m_count);
    std::vector<double> diag_s2, diag_eb, diag_ceb;
    std::vector<char> diag_fb;
    if (shrink && cfg.collect_raw) {
      diag_s2.resize(reps * groups);
      diag_eb.resize(reps * groups);
      diag_ceb.resize(reps * groups);
      diag_fb.resize(reps * groups);
    }

    auto kernel = [&](std::uint64_t r) {
      const SampleDraw draw = draw_sample(pop, design, mix_seed(cfg.master_seed, r));
      const double ybar = stratified_mean(draw, weights).value;
      std::vector<double> s2;
      ShrinkageFit fit;
      bool have_fit = false;
      for (std::size_t k = 0; k < m_count; ++k) {
        double v = 0.0;
        switch (methods[k]) {
          case VarianceMethod::Collapsed:
            v = collapsed_variance(draw, pop.group_of, groups, pop.weights).value;
            break;
          case VarianceMethod::TwoPerStratumUnbiased:
            v = two_per_stratum_variance(draw, weights, sizes, /*ignore_fpc=*/!cfg.fpc).value;
            break;
          case VarianceMethod::EB:
          case VarianceMethod::CEB:
            if (!have_fit) {
              s2 = collapsed_group_s2(draw, pop.group_of, groups);
              fit = fit_shrinkage(s2, cfg.shrinkage);
              have_fit = true;
            }
            v = (methods[k] == VarianceMethod::EB ? eb_design_variance(fit)
                                                  : ceb_design_variance(fit))
                    .value;
            break;
        }
        const double half = cfg.z * std::sqrt(v);
        est_slot[r * m_count + k] = v;
        len_slot[r * m_count + k] = 2.0 * half;
        cov_slot[r * m_count + k] = std::abs(ybar - ybar_pop) <= half ? 1 : 0;
      }
      if (have_fit && cfg.collect_raw) {
        for (std::size_t g = 0; g < groups; ++g) {
          diag_s2[r * groups + g] = s2[g];
          diag_eb[r * groups + g] = fit.eb[g];
          diag_ceb[r * groups + g] = fit.ceb[g];
          diag_fb[r * groups + g] = fit.fallback[g];
        }
      }
    };
    drive_replications(reps, cfg.workers, parallel, kernel);

    for (std::size_t k = 0; k < m_count; ++k) {
      std::vector<double> lens(reps), covs(reps);
      for (std::size_t r = 0; r < reps; ++r) {
        lens[r] = len_slot[r * m_count + k];
        covs[r] = cov_slot[r * m_count + k] ? 1.0 : 0.0;
      }
      const MeanSe al = mean_and_se(lens);
      NeumaierSum cov_total;
      for (double c : covs) cov_total.add(c);
      const double cp = cov_total.value() / static_cast<double>(reps);
      std::optional<double> cp_se;
      if (reps >= 2) cp_se = std::sqrt(cp * (1.0 - cp) / static_cast<double>(reps));

      const bool uses_e = methods[k] == VarianceMethod::EB || methods[k] == VarianceMethod::CEB;
      std::optional<double> e_val;
      if (uses_e) e_val = cfg.shrinkage.truncation_margin;
      const std::string label = method_name(methods[k]);
      report.rows.push_back({study_label, label, e_val, "CP", cp, cp_se});
      report.rows.push_back({study_label, label, e_val, "AL", al.mean, al.se});
    }

    if (cfg.collect_raw) {
      for (std::size_t r = 0; r < reps; ++r) {
        for (std::size_t k = 0; k < m_count; ++k) {
          RawRecord rec;
          rec.study = study_label;
          rec.replication = r;
          rec.method = methods[k];
          if (methods[k] == VarianceMethod::EB || methods[k] == VarianceMethod::CEB)
            rec.e = cfg.shrinkage.truncation_margin;
          rec.estimate = est_slot[r * m_count + k];
          rec.covered = cov_slot[r * m_count + k] != 0;
          rec.ci_len = len_slot[r * m_count + k];
          report.raw.push_back(rec);
        }
      }
      if (shrink) {
        for (std::size_t r = 0; r < reps; ++r)
          for (std::size_t g = 0; g < groups; ++g)
            report.shrinkage_raw.push_back({study_label, r, g, diag_s2[r * groups + g],
                                            diag_eb[r * groups + g], diag_ceb[r * groups + g],
                                            diag_fb[r * groups + g] != 0});
      }
    }
  }
  return report;
}

SimulationReport rmse_impl(const FinitePopulation& pop, const SimulationConfig& cfg,
                           const std::string& study_label, bool parallel) {
  cfg.validate(StudyKind::RmseSweep);
  pop.validate();
  const DesignSpec design{DesignKind::OnePerStratum};
  const double v_true = true_variance(pop, design, /*ignore_fpc=*/!cfg.fpc);
  if (v_true <= 0.0) throw ConfigError("rmse_sweep: true variance is zero");

  const std::size_t reps = cfg.replications;
  const std::size_t groups = pop.group_count();
  const std::size_t n_e = cfg.e_grid.size();
  const std::size_t m_count = cfg.estimators.size();
  const std::size_t stride = m_count * n_e;

  std::vector<double> rmse_slot(reps * stride), est_slot;
  if (cfg.collect_raw) est_slot.resize(reps * stride);

  auto kernel = [&](std::uint64_t r) {
    const SampleDraw draw = draw_sample(pop, design, mix_seed(cfg.master_seed, r));
    const std::vector<double> s2 = collapsed_group_s2(draw, pop.group_of, groups);
    const double v_collapsed =
        collapsed_variance(draw, pop.group_of, groups, pop.weights).value;
    for (std::size_t ei = 0; ei < n_e; ++ei) {
      ShrinkageFit fit;
      bool have_fit = false;
      for (std::size_t k = 0; k < m_count; ++k) {
        double v = v_collapsed;
        if (cfg.estimators[k] != VarianceMethod::Collapsed) {
          if (!have_fit) {
            fit = fit_shrinkage(s2, ShrinkageConfig{cfg.e_grid[ei]});
            have_fit = true;
          }
          v = (cfg.estimators[k] == VarianceMethod::EB ? eb_design_variance(fit)
                                                       : ceb_design_variance(fit))
                  .value;
        }
        const std::size_t slot = r * stride + k * n_e + ei;
        rmse_slot[slot] = std::abs(v - v_true) / v_true;
        if (cfg.collect_raw) est_slot[slot] = v;
      }
    }
  };
  drive_replications(reps, cfg.workers, parallel, kernel);

  SimulationReport report;
  for (std::size_t k = 0; k < m_count; ++k) {
    for (std::size_t ei = 0; ei < n_e; ++ei) {
      std::vector<double> col(reps);
      for (std::size_t r = 0; r < reps; ++r) col[r] = rmse_slot[r * stride + k * n_e + ei];
      const MeanSe ms = mean_and_se(col);
      report.rows.push_back({study_label, method_name(cfg.estimators[k]), cfg.e_grid[ei],
                             "RMSE", ms.mean, ms.se});
    }
  }
  if (cfg.collect_raw) {
    for (std::size_t r = 0; r < reps; ++r)
      for (std::size_t k = 0; k < m_count; ++k)
        for (std::size_t ei = 0; ei < n_e; ++ei) {
          RawRecord rec;
          rec.study = study_label;
          rec.replication = r;
          rec.method = cfg.estimators[k];
          rec.e = cfg.e_grid[ei];
          rec.estimate = est_slot[r * stride + k * n_e + ei];
          report.raw.push_back(rec);
        }
  }
  return report;
}

}  // namespace

SimulationReport run_coverage(const FinitePopulation& pop, const SimulationConfig& cfg,
                              const std::string& study_label) {
  return coverage_impl(pop, cfg, study_label, /*parallel=*/true);
}

SimulationReport run_coverage_serial(const FinitePopulation& pop, const SimulationConfig& cfg,
                                     const std::string& study_label) {
  return coverage_impl(pop, cfg, study_label, /*parallel=*/false);
}

SimulationReport run_rmse_sweep(const FinitePopulation& pop, const SimulationConfig& cfg,
                                const std::string& study_label) {
  return rmse_impl(pop, cfg, study_label, /*parallel=*/true);
}

SimulationReport run_rmse_sweep_serial(const FinitePopulation& pop, const SimulationConfig& cfg,
                                       const std::string& study_label) {
  return rmse_impl(pop, cfg, study_label, /*parallel=*/false);
}

SimulationReport run_deff_study(const FinitePopulation& pop, const SimulationConfig& cfg,
                                const std::string& study_label) {
  cfg.validate(StudyKind::Deff);
  pop.validate();
  const double v1 = true_variance(pop, {DesignKind::OnePerStratum}, /*ignore_fpc=*/!cfg.fpc);
  const double v2 = true_variance(pop, {DesignKind::TwoPerStratum}, /*ignore_fpc=*/!cfg.fpc);
  if (v1 <= 0.0) throw ConfigError("deff: degenerate population (V1 = 0)");
  SimulationReport report;
  report.rows.push_back({study_label, "", std::nullopt, "V1", v1, std::nullopt});
  report.rows.push_back({study_label, "", std::nullopt, "V2", v2, std::nullopt});
  report.rows.push_back({study_label, "", std::nullopt, "deff", v2 / v1, std::nullopt});
  return report;
}

}  // namespace svar
