#pragma once

// Seedable random streams. Every sampler in this library draws from an
// explicit stream; replicate-level parallelism uses substream(k), which is
// deterministic in (seed, k) and independent of thread scheduling.

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>

#include "genea/errors.hpp"

namespace genea {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// xoshiro256++ with splitmix64 seeding.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = detail::splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1); 0 and 1 are excluded exactly.
  double uniform_open01() {
    double u;
    do {
      u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    } while (u == 0.0);
    return u;
  }

  // Exponential(rate 1) by inversion.
  double exponential() { return -std::log(uniform_open01()); }

  // Stream for replicate k, deterministic in (seed, k) only.
  RandomStream substream(std::uint64_t k) const {
    std::uint64_t x = seed_ ^ (0xD1B54A32D192ED03ULL * (k + 1));
    return RandomStream(detail::splitmix64(x));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

// Anything the samplers draw from. Tests substitute scripted sources.
template <class S>
concept RandomSource = requires(S& s) {
  { s.exponential() } -> std::convertible_to<double>;
  { s.uniform_open01() } -> std::convertible_to<double>;
};

template <RandomSource S>
bool sample_bernoulli(S& rng, double p) {
  if (p < 0.0 || p > 1.0) throw ParameterError("bernoulli probability outside [0,1]");
  return rng.uniform_open01() < p;
}

template <RandomSource S>
double sample_uniform(S& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform_open01();
}

// Poisson count as the number of unit-exponential arrivals in [0, mean].
// Cost is linear in mean, which is fine for the rates used here.
template <RandomSource S>
std::uint64_t sample_poisson(S& rng, double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) throw ParameterError("poisson mean must be finite and >= 0");
  std::uint64_t k = 0;
  double s = rng.exponential();
  while (s <= mean) {
    ++k;
    s += rng.exponential();
  }
  return k;
}

}  // namespace genea
