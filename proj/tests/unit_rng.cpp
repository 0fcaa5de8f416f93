#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sglbo/errors.hpp"
#include "sglbo/rng.hpp"

using namespace sglbo;

namespace {

/// Reference splitmix64 finalizer, written out independently of the library.
std::uint64_t reference_splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

TEST_CASE("mix_seed matches the splitmix64 stream") {
  const std::uint64_t gamma = 0x9e3779b97f4a7c15ull;
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 0xdeadbeefull}) {
    for (std::uint64_t salt : {0ull, 1ull, 7ull, 1000ull}) {
      CHECK(mix_seed(seed, salt) == reference_splitmix64(seed + gamma * (salt + 1)));
    }
  }
}

TEST_CASE("mix_seed separates salts and seeds") {
  std::vector<std::uint64_t> seen;
  for (std::uint64_t salt = 0; salt < 64; ++salt) seen.push_back(mix_seed(123, salt));
  for (std::uint64_t seed = 0; seed < 64; ++seed) seen.push_back(mix_seed(seed, 5));
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("uniform draws live in [0,1) with the right mean") {
  Rng rng(7);
  const int draws = 100000;
  double sum = 0.0, lo = 1.0, hi = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double u = rng.uniform();
    sum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / draws == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("uniform(lo,hi) stays inside its interval") {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-2.5, 0.5);
    CHECK(u >= -2.5);
    CHECK(u < 0.5);
  }
}

TEST_CASE("normal draws have unit variance") {
  Rng rng(21);
  const int draws = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / draws;
  CHECK(std::abs(mean) < 0.02);
  CHECK(sum2 / draws - mean * mean == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("bernoulli frequency tracks p and validates its argument") {
  Rng rng(33);
  int hits = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
  CHECK(static_cast<double>(hits) / draws == doctest::Approx(0.3).epsilon(0.03));
  CHECK_THROWS_AS((void)rng.bernoulli(-0.1), ArgumentError);
  CHECK_THROWS_AS((void)rng.bernoulli(1.5), ArgumentError);
}

TEST_CASE("categorical respects cumulative masses") {
  Rng rng(55);
  const std::array<double, 3> cumulative{0.2, 0.5, 1.0};
  std::array<int, 3> counts{};
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const std::size_t k = rng.categorical(cumulative);
    REQUIRE(k < 3);
    ++counts[k];
  }
  CHECK(static_cast<double>(counts[0]) / draws == doctest::Approx(0.2).epsilon(0.05));
  CHECK(static_cast<double>(counts[1]) / draws == doctest::Approx(0.3).epsilon(0.05));
  CHECK(static_cast<double>(counts[2]) / draws == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("equal seeds replay identical streams; split diverges") {
  Rng a(99), b(99);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng parent(99);
  Rng child = parent.split();
  bool any_diff = false;
  Rng again(99);
  for (int i = 0; i < 16; ++i) any_diff |= child.next_u64() != again.next_u64();
  CHECK(any_diff);
}
