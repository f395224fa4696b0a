// Copyright 2026 The Authors.
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

// Counter-based random numbers.
//
// Every random draw in the library is a pure function of a key
// (seed, domain, stream, run, draw). Nothing carries generator state between
// draws, so simulations can be evaluated in any order or on any number of
// threads and still produce bit-identical results.

#pragma once

#include <cstdint>

namespace imax {

// Separates the random streams of unrelated consumers sharing one seed.
enum class RngDomain : std::uint64_t {
  kSpread = 1,
  kMcsmg = 2,
  kSnapshot = 3,
  kRRSet = 4,
  kEvaluation = 5,
};

namespace rng_detail {

// SplitMix64 finalizer; a bijection on 64-bit words with full avalanche.
constexpr std::uint64_t Mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace rng_detail

// A keyed stream: fixes (seed, domain, stream, run); the draw index selects
// the individual number.
class KeyedStream {
 public:
  constexpr KeyedStream(std::uint64_t seed, RngDomain domain,
                        std::uint64_t stream, std::uint64_t run)
      : key_(rng_detail::Mix(
            rng_detail::Mix(rng_detail::Mix(
                                seed ^ rng_detail::Mix(
                                           static_cast<std::uint64_t>(domain))) ^
                            stream) ^
            run)) {}

  constexpr std::uint64_t Bits(std::uint64_t draw) const {
    return rng_detail::Mix(key_ ^ rng_detail::Mix(draw + 0x632be59bd9b4e019ULL));
  }

  // Uniform in [0, 1) with 53 bits of precision.
  constexpr double Uniform(std::uint64_t draw) const {
    return static_cast<double>(Bits(draw) >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound); bound > 0.
  constexpr std::uint64_t Below(std::uint64_t draw, std::uint64_t bound) const {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(Bits(draw)) * bound) >> 64);
  }

 private:
  std::uint64_t key_;
};

// Derives a seed for a disjoint purpose (e.g. evaluation vs. selection).
constexpr std::uint64_t DeriveSeed(std::uint64_t seed, RngDomain domain) {
  return rng_detail::Mix(seed ^ rng_detail::Mix(
                                    0xa0761d6478bd642fULL +
                                    static_cast<std::uint64_t>(domain)));
}

}  // namespace imax
