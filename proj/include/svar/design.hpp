#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "svar/population.hpp"

namespace svar {

// Design 1 samples one unit from each of the 2H original strata; Design 2
// samples two units without replacement from each of the H merged groups.
// Both select the same number of units overall.
enum class DesignKind { OnePerStratum, TwoPerStratum };

struct DesignSpec {
  DesignKind kind = DesignKind::OnePerStratum;

  std::size_t units_per_stratum() const {
    return kind == DesignKind::OnePerStratum ? 1 : 2;
  }
};

// The realized sample of one replication: selected y values per sampling
// stratum (original strata under Design 1, merged groups under Design 2).
struct SampleDraw {
  DesignKind kind = DesignKind::OnePerStratum;
  std::uint64_t replication = 0;
  std::vector<std::vector<double>> values;
};

// Sampling-stratum weights for a design: W_h per original stratum under
// Design 1, W_g1 + W_g2 per merged group under Design 2.
std::vector<double> sampling_weights(const FinitePopulation& pop, DesignSpec design);

// Per sampling-stratum population sizes (needed for FPC factors).
std::vector<std::size_t> sampling_sizes(const FinitePopulation& pop, DesignSpec design);

// SRSWOR within each sampling stratum via partial Fisher-Yates.
// Deterministic given rep_seed.
SampleDraw draw_sample(const FinitePopulation& pop, DesignSpec design, std::uint64_t rep_seed);

// Number of distinct samples under the design; throws InfeasibleError
// naming the count when it exceeds cap.
std::uint64_t sample_space_size(const FinitePopulation& pop, DesignSpec design, std::uint64_t cap);

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// Visits every possible sample exactly once together with its design
// probability (uniform: 1 / sample_space_size). The visited draw is a
// reused buffer; copy it if it must outlive the callback.
void for_each_sample(const FinitePopulation& pop, DesignSpec design, std::uint64_t cap,
                     const std::function<void(const SampleDraw&, double)>& visit);

// Decodes one enumeration index into a sample draw; `draw` must be shaped
// for the design (used by the parallel oracle to jump into the stream).
void decode_sample(const FinitePopulation& pop, DesignSpec design, std::uint64_t index,
                   SampleDraw& draw);

}  // namespace svar
