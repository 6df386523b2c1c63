#pragma once

#include <array>
#include <cstdint>

namespace pap {

/// SplitMix64 finalizer. Used for seeding and for deriving sub-seeds.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateful SplitMix64 step: advance by the golden gamma, then mix.
constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  return splitmix64_mix(state);
}

/// Order-sensitive combination of a seed with a stream index.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix64_next(s);
  return splitmix64_mix(a ^ (index * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL));
}

/// xoshiro256** 1.0 seeded through SplitMix64. This is generator version 1
/// of the synthetic data format; golden files depend on the exact stream, so
/// neither the algorithm nor the derived distributions may change.
///
/// All derived draws are integer or exactly-rounded double operations, so a
/// given seed yields the same values on every IEEE-754 platform. The standard
/// <random> distributions are implementation-defined and are not used.
class Rng {
 public:
  static constexpr int kVersion = 1;

  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer on [0, bound); bound must be > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform integer on [lo, hi] inclusive.
  int between(int lo, int hi);
  bool bernoulli(double p);

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace pap
