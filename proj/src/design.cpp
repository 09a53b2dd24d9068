#include "svar/design.hpp"

#include <random>
#include <string>
#include <unordered_map>

#include "svar/errors.hpp"
#include "svar/numerics.hpp"

namespace svar {

std::vector<double> sampling_weights(const FinitePopulation& pop, DesignSpec design) {
  if (design.kind == DesignKind::OnePerStratum) return pop.weights;
  std::vector<double> out(pop.group_count());
  for (std::size_t g = 0; g < out.size(); ++g) out[g] = pop.group_weight(g);
  return out;
}

std::vector<std::size_t> sampling_sizes(const FinitePopulation& pop, DesignSpec design) {
  std::vector<std::size_t> out;
  if (design.kind == DesignKind::OnePerStratum) {
    out.reserve(pop.strata_count());
    for (const auto& s : pop.strata) out.push_back(s.size());
  } else {
    out.reserve(pop.group_count());
    for (std::size_t g = 0; g < pop.group_count(); ++g) out.push_back(pop.group_size(g));
  }
  return out;
}

namespace {

// y value at position j of merged group g (first stratum's units, then the
// second's, in population order).
double merged_value(const FinitePopulation& pop, const std::array<std::size_t, 2>& hs,
                    std::size_t j) {
  const auto& first = pop.strata[hs[0]];
  return j < first.size() ? first[j] : pop.strata[hs[1]][j - first.size()];
}

// Partial Fisher-Yates over [0, n): returns the first k entries of a
// uniformly shuffled index array without materializing it.
template <typename Urbg>
void partial_fisher_yates(std::size_t n, std::size_t k, Urbg& rng, std::vector<std::size_t>& out) {
  out.clear();
  std::unordered_map<std::size_t, std::size_t> displaced;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    const std::size_t j = pick(rng);
    auto it_j = displaced.find(j);
    const std::size_t value_j = it_j == displaced.end() ? j : it_j->second;
    auto it_i = displaced.find(i);
    const std::size_t value_i = it_i == displaced.end() ? i : it_i->second;
    displaced[j] = value_i;
    out.push_back(value_j);
  }
}

}  // namespace

SampleDraw draw_sample(const FinitePopulation& pop, DesignSpec design, std::uint64_t rep_seed) {
  const std::size_t k = design.units_per_stratum();
  const auto sizes = sampling_sizes(pop, design);
  for (std::size_t s = 0; s < sizes.size(); ++s)
    if (sizes[s] < k)
      throw InfeasibleError("draw_sample: sampling stratum " + std::to_string(s) +
                            " has fewer than " + std::to_string(k) + " units");

  SampleDraw draw;
  draw.kind = design.kind;
  draw.values.resize(sizes.size());
  Rng rng(rep_seed);
  std::vector<std::size_t> picks;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    partial_fisher_yates(sizes[s], k, rng, picks);
    auto& vals = draw.values[s];
    vals.clear();
    if (design.kind == DesignKind::OnePerStratum) {
      for (std::size_t j : picks) vals.push_back(pop.strata[s][j]);
    } else {
      const auto hs = pop.strata_of_group(s);
      for (std::size_t j : picks) vals.push_back(merged_value(pop, hs, j));
    }
  }
  return draw;
}

namespace {

// Per sampling-stratum choice counts: N_h under Design 1, C(N_g, 2) under
// Design 2.
std::vector<std::uint64_t> choice_counts(const FinitePopulation& pop, DesignSpec design) {
  std::vector<std::uint64_t> out;
  if (design.kind == DesignKind::OnePerStratum) {
    for (const auto& s : pop.strata) out.push_back(s.size());
  } else {
    for (std::size_t g = 0; g < pop.group_count(); ++g) {
      const std::uint64_t n = pop.group_size(g);
      if (n < 2)
        throw InfeasibleError("enumerate: merged group " + std::to_string(g) +
                              " has fewer than 2 units");
      out.push_back(n * (n - 1) / 2);
    }
  }
  return out;
}

// Unranks a 2-combination: index p in [0, C(n,2)) -> ordered pair (i, j),
// i < j, lexicographic by i.
std::pair<std::size_t, std::size_t> unrank_pair(std::uint64_t p, std::uint64_t n) {
  std::uint64_t i = 0;
  std::uint64_t block = n - 1;  // pairs starting at i
  while (p >= block) {
    p -= block;
    ++i;
    --block;
  }
  return {static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1 + p)};
}

}  // namespace

std::uint64_t sample_space_size(const FinitePopulation& pop, DesignSpec design,
                                std::uint64_t cap) {
  const auto counts = choice_counts(pop, design);
  unsigned __int128 total = 1;
  for (std::uint64_t c : counts) {
    total *= c;
    if (total > static_cast<unsigned __int128>(cap)) {
      std::string shown = total > static_cast<unsigned __int128>(UINT64_MAX)
                              ? ">1.8e19"
                              : std::to_string(static_cast<std::uint64_t>(total));
      throw InfeasibleError("enumeration needs at least " + shown +
                            " samples, above the cap of " + std::to_string(cap));
    }
  }
  return static_cast<std::uint64_t>(total);
}

void decode_sample(const FinitePopulation& pop, DesignSpec design, std::uint64_t index,
                   SampleDraw& draw) {
  draw.kind = design.kind;
  if (design.kind == DesignKind::OnePerStratum) {
    const std::size_t strata = pop.strata_count();
    draw.values.resize(strata);
    // Last stratum varies fastest.
    for (std::size_t h = strata; h-- > 0;) {
      const std::uint64_t n = pop.strata[h].size();
      const std::uint64_t digit = index % n;
      index /= n;
      draw.values[h].assign(1, pop.strata[h][digit]);
    }
  } else {
    const std::size_t groups = pop.group_count();
    draw.values.resize(groups);
    for (std::size_t g = groups; g-- > 0;) {
      const std::uint64_t n = pop.group_size(g);
      const std::uint64_t pairs = n * (n - 1) / 2;
      const std::uint64_t digit = index % pairs;
      index /= pairs;
      const auto [i, j] = unrank_pair(digit, n);
      const auto hs = pop.strata_of_group(g);
      draw.values[g].assign({merged_value(pop, hs, i), merged_value(pop, hs, j)});
    }
  }
}

void for_each_sample(const FinitePopulation& pop, DesignSpec design, std::uint64_t cap,
                     const std::function<void(const SampleDraw&, double)>& visit) {
  const std::uint64_t total = sample_space_size(pop, design, cap);
  const double prob = 1.0 / static_cast<double>(total);
  SampleDraw draw;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    decode_sample(pop, design, idx, draw);
    visit(draw, prob);
  }
}

}  // namespace svar
