#include <cmath>

#include "doctest.h"
#include "genea/rng.hpp"

using namespace genea;

TEST_CASE("uniform_open01 stays strictly inside the unit interval") {
  RandomStream rng(7);
  double sum = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform_open01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const double mean = sum / kDraws;
  CHECK(std::abs(mean - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / kDraws));
}

TEST_CASE("exponential has unit mean and variance") {
  RandomStream rng(11);
  double sum = 0.0, sum2 = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const double x = rng.exponential();
    REQUIRE(x > 0.0);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / kDraws;
  const double var = sum2 / kDraws - mean * mean;
  CHECK(std::abs(mean - 1.0) < 3.0 / std::sqrt(kDraws));
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("bernoulli endpoints are deterministic") {
  RandomStream rng(3);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(sample_bernoulli(rng, 0.0));
    CHECK(sample_bernoulli(rng, 1.0));
  }
  CHECK_THROWS_AS(sample_bernoulli(rng, 1.5), ParameterError);
}

TEST_CASE("poisson count matches its mean and variance") {
  RandomStream rng(13);
  constexpr double kMean = 4.0;
  constexpr int kDraws = 50000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double k = static_cast<double>(sample_poisson(rng, kMean));
    sum += k;
    sum2 += k * k;
  }
  const double mean = sum / kDraws;
  const double var = sum2 / kDraws - mean * mean;
  CHECK(std::abs(mean - kMean) < 3.0 * std::sqrt(kMean / kDraws));
  CHECK(std::abs(var - kMean) < 0.2);
  CHECK(sample_poisson(rng, 0.0) == 0);
  CHECK_THROWS_AS(sample_poisson(rng, -1.0), ParameterError);
}

TEST_CASE("substreams are reproducible and distinct") {
  const RandomStream root(42);
  RandomStream a = root.substream(5);
  RandomStream b = root.substream(5);
  RandomStream c = root.substream(6);
  bool all_equal_c = true;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    CHECK(va == b.next_u64());
    all_equal_c = all_equal_c && va == c.next_u64();
  }
  CHECK_FALSE(all_equal_c);
}
