#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace sglbo {

/// splitmix64 mix of a seed with a salt; used to derive independent child seeds
/// (per run, per gradient component, ...) from one master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// Seeded random source. Wraps std::mt19937_64 (whose output sequence the
/// standard fixes exactly) and maps raw words to doubles with explicit,
/// platform-independent arithmetic, so every sampled sequence is reproducible
/// bit-for-bit across compilers and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller. No spare value is cached, so the draw
  /// count per call is fixed (two uniforms) and streams stay reproducible.
  double normal();

  bool bernoulli(double p);

  /// Index draw from a cumulative weight table (non-decreasing, last entry =
  /// total mass). Returns i such that the draw falls in (cum[i-1], cum[i]].
  std::size_t categorical(std::span<const double> cumulative);

  /// Deterministically derived child stream.
  Rng split() { return Rng(mix_seed(next_u64(), 0x9e3779b97f4a7c15ull)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sglbo
