#pragma once

#include <cmath>
#include <cstdint>

namespace sglbo {

/// Tally of every measurement outcome actually drawn from a simulator.
/// Optimizers report how many shots they *spent*; attaching a counter to a
/// cost function lets the harness audit that the two ledgers agree exactly.
struct ShotCounter {
  std::int64_t sampled = 0;
  void add(std::int64_t k) { sampled += k; }
};

/// ceil with a small backoff for formulas whose operands are intended to be
/// exact reals (shot-count forecasts, suffix-window sizes): 20*0.1 rounds to
/// just above 2.0 in binary, and a plain ceil would return 3.
inline std::int64_t ceil_tol(double x) {
  return static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

/// Exact ceil(num/den) for non-negative integers.
inline std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
  return (num + den - 1) / den;
}

}  // namespace sglbo
