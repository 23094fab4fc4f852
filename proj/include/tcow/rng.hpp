#pragma once

#include <cstdint>

namespace tcow {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) {
  return mix64(mix64(seed) ^ mix64(a + 0x632BE59BD9B4E019ull));
}

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, Rest... rest) {
  return derive_seed(derive_seed(seed, a), static_cast<std::uint64_t>(rest)...);
}

/// Counter-based stream: value i is a pure function of (key, i), so any
/// element can be drawn independently of the others and in any order.
/// Unlike the <random> distributions the output is identical across
/// standard library implementations.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0xD1B54A32D192ED03ull)) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const {
    return mix64(key_ ^ mix64(counter));
  }

  /// Uniform in [0, 1) with 53 bits of resolution.
  constexpr double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

/// Sequential view over a CounterRng, for generators that draw a
/// variable number of values.
class SeedStream {
 public:
  explicit constexpr SeedStream(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t next_bits() { return rng_.bits(counter_++); }
  double uniform() { return rng_.uniform(counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_bits() % span);
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace tcow
