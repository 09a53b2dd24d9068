#include "svar/shrinkage.hpp"

#include <cmath>
#include <stdexcept>

#include "svar/errors.hpp"
#include "svar/numerics.hpp"

namespace svar {

void ShrinkageConfig::validate() const {
  if (!(truncation_margin > 0.0))
    throw ConfigError("shrinkage: truncation_margin must be > 0");
}

ShrinkageFit fit_prior(std::span<const double> s2, const ShrinkageConfig& cfg) {
  cfg.validate();
  if (s2.empty()) throw std::invalid_argument("fit_prior: needs at least one group");

  ShrinkageFit fit;
  NeumaierSum total;
  for (double v : s2) total.add(v);
  fit.s2_mean = total.value() / static_cast<double>(s2.size());
  if (fit.s2_mean != 1.0) fit.a_mm = fit.s2_mean / (fit.s2_mean - 1.0);
  const double x = cfg.floor();
  fit.a_star = (fit.a_mm && *fit.a_mm > x) ? *fit.a_mm : x;
  return fit;
}

std::vector<double> eb_estimates(const ShrinkageFit& fit, std::span<const double> s2) {
  if (!(fit.a_star > 1.5)) throw std::domain_error("eb_estimates: prior fit must have a* > 1.5");
  std::vector<double> out;
  out.reserve(s2.size());
  const double denom = 2.0 * fit.a_star - 1.0;
  for (double v : s2) out.push_back((2.0 * fit.a_star + v) / denom);
  return out;
}

double posterior_variance(double a, double s2_g) {
  if (!(a > 1.5)) throw std::domain_error("posterior_variance: needs a > 1.5");
  const double num = 2.0 * a + s2_g;
  const double d1 = 2.0 * a - 1.0;
  return 2.0 * num * num / (d1 * d1 * (2.0 * a - 3.0));
}

void ceb_estimates(ShrinkageFit& fit, std::span<const double> s2) {
  if (fit.eb.size() != s2.size())
    throw std::invalid_argument("ceb_estimates: EB estimates missing");
  const std::size_t groups = s2.size();
  fit.ceb_raw.assign(groups, 0.0);
  fit.ceb.assign(groups, 0.0);
  fit.fallback.assign(groups, 0);

  NeumaierSum spread_sum, sq_sum;
  for (double v : s2) {
    const double d = v - fit.s2_mean;
    spread_sum.add(d * d);
    sq_sum.add(v * v);
  }
  const double spread = spread_sum.value();

  if (groups < 2 || spread == 0.0) {
    // Zero ensemble spread makes the expansion factor 0/0; the CEB ensemble
    // is defined as the EB one there.
    fit.ceb_raw = fit.eb;
    fit.ceb = fit.eb;
    fit.fallback.assign(groups, 1);
    return;
  }

  const double a = fit.a_star;
  const double h = static_cast<double>(groups);
  const double bracket =
      1.0 + 8.0 * (h - 1.0) * (a * a + fit.s2_mean * a + sq_sum.value() / (4.0 * h)) /
                ((2.0 * a - 3.0) * spread);
  const double root = std::sqrt(bracket);
  const double denom = 2.0 * a - 1.0;
  for (std::size_t g = 0; g < groups; ++g) {
    const double raw = (2.0 * a + fit.s2_mean + (s2[g] - fit.s2_mean) * root) / denom;
    fit.ceb_raw[g] = raw;
    if (raw > 0.0) {
      fit.ceb[g] = raw;
    } else {
      fit.ceb[g] = fit.eb[g];
      fit.fallback[g] = 1;
    }
  }
}

ShrinkageFit fit_shrinkage(std::span<const double> s2, const ShrinkageConfig& cfg) {
  ShrinkageFit fit = fit_prior(s2, cfg);
  fit.eb = eb_estimates(fit, s2);
  ceb_estimates(fit, s2);
  return fit;
}

namespace {

VarianceEstimate design_variance(const std::vector<double>& deltas, VarianceMethod method) {
  if (deltas.empty()) throw std::invalid_argument("design variance: fit is incomplete");
  VarianceEstimate out;
  out.method = method;
  out.group_components = deltas;
  const double h = static_cast<double>(deltas.size());
  double total = 0.0;
  for (double d : deltas) total += d;
  out.value = total / (2.0 * h * h);
  return out;
}

}  // namespace

VarianceEstimate eb_design_variance(const ShrinkageFit& fit) {
  return design_variance(fit.eb, VarianceMethod::EB);
}

VarianceEstimate ceb_design_variance(const ShrinkageFit& fit) {
  return design_variance(fit.ceb, VarianceMethod::CEB);
}

}  // namespace svar
