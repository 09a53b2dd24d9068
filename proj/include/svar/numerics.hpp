#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace svar {

// Compensated (Neumaier) accumulator. The summation order defines the
// result bit for bit, so parallel reductions must feed partial results
// into it in a fixed order.
class NeumaierSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double neumaier_total(std::span<const double> xs) {
  NeumaierSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

// splitmix64 finalizer over a golden-ratio stride. Derives independent
// child seeds from one master seed so replication results do not depend
// on worker scheduling.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream tags keeping population seeds disjoint from replication seeds.
inline constexpr std::uint64_t kPopulationStream = 1ull << 32;

using Rng = std::mt19937_64;

}  // namespace svar
