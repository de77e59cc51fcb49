// Copyright 2026 The repgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REPGRAPH_RNG_HPP_
#define REPGRAPH_RNG_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace repgraph {

__extension__ typedef unsigned __int128 Uint128;

// SplitMix64 (Steele, Lea, Flood 2014). Every draw below is defined on top
// of the raw 64-bit stream so sequences are identical on every platform;
// the standard <random> distributions are implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  // Uniform in [0, n); n must be positive. Lemire's multiply-shift with
  // rejection, so the result is unbiased.
  std::uint64_t below(std::uint64_t n) noexcept {
    std::uint64_t x = next();
    Uint128 m = static_cast<Uint128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t t = (0 - n) % n;
      while (low < t) {
        x = next();
        m = static_cast<Uint128>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Knuth's multiplication method for small means, a rounded normal
  // approximation above 30.
  std::uint64_t poisson(double mean) noexcept {
    if (!(mean > 0.0)) return 0;
    if (mean > 30.0) {
      const double x = mean + std::sqrt(mean) * normal();
      return x <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(x));
    }
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = uniform();
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    return k;
  }

  // Standard normal via Box-Muller (one of the pair is discarded).
  double normal() noexcept {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * 3.14159265358979323846 * v);
  }

  // 1 + geometric number of failures with success probability 1/mean, so
  // the mean of the result is `mean` (>= 1).
  std::uint64_t geometric_at_least_one(double mean) noexcept {
    if (!(mean > 1.0)) return 1;
    const double p = 1.0 / mean;
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

// 64-bit FNV-1a of the bytes, finalized with the SplitMix64 mixer and
// salted with `seed`.
inline std::uint64_t stable_hash(std::string_view bytes,
                                 std::uint64_t seed = 0) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  SplitMix64 mix(h ^ (seed * 0x9E3779B97F4A7C15ULL));
  return mix.next();
}

}  // namespace repgraph

#endif  // REPGRAPH_RNG_HPP_
