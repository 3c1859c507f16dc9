// Copyright 2026 The ambc-mvs Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace ambc {

// SplitMix64 stream. Cheap to construct, so every (view, phase, iteration,
// pixel) tuple gets its own stream and results do not depend on how work is
// split across threads.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double Uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }
  // [0, n)
  int UniformInt(int n) {
    return static_cast<int>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t MixKey(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
  std::uint64_t h = seed ^ 0x6a09e667f3bcc909ULL;
  for (std::uint64_t k : key) {
    RandomStream mix(h ^ (k * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL));
    h = mix();
  }
  return h;
}

enum class Phase : std::uint64_t {
  kInit = 1,
  kEmployed,
  kOnlookerRed,
  kOnlookerBlack,
  kScout,
};

// Identifies one optimizer pass over one view.
struct StreamKey {
  std::uint64_t seed = 0;
  int view = 0;
  int cycle = 0;
  int iteration = 0;
  Phase phase = Phase::kInit;

  RandomStream ForPixel(int x, int y) const {
    return RandomStream(MixKey(seed, {static_cast<std::uint64_t>(view),
                                      static_cast<std::uint64_t>(cycle),
                                      static_cast<std::uint64_t>(iteration),
                                      static_cast<std::uint64_t>(phase),
                                      static_cast<std::uint64_t>(x),
                                      static_cast<std::uint64_t>(y)}));
  }
};

}  // namespace ambc
