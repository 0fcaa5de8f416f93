#include "sglbo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sglbo/errors.hpp"

namespace sglbo {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer applied to seed advanced by salt increments.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  // Top 53 bits -> [0,1) on the 2^-53 grid.
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  if (!(lo <= hi)) throw ArgumentError("uniform: lo must be <= hi");
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  // Box-Muller; u is nudged away from 0 so the log stays finite.
  double u = uniform();
  double v = uniform();
  if (u <= 0.0) u = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

bool Rng::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("bernoulli: p outside [0,1]");
  return uniform() < p;
}

std::size_t Rng::categorical(std::span<const double> cumulative) {
  if (cumulative.empty()) throw ArgumentError("categorical: empty weight table");
  const double total = cumulative.back();
  if (!(total > 0.0)) throw ArgumentError("categorical: total mass must be positive");
  const double u = uniform() * total;
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;  // u == total after rounding
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace sglbo
