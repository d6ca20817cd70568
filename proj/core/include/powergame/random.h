// Copyright 2026 The powergame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POWERGAME_RANDOM_H_
#define POWERGAME_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>

namespace powergame {

// Mixes a master seed and a stream index into an independent substream seed
// (SplitMix64 finalizer over both words).
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream);

// 64-bit Mersenne Twister with a platform-independent double conversion, so
// traces are bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // Index drawn from a cumulative distribution whose last entry is ~1.
  std::size_t Discrete(std::span<const double> cdf);

 private:
  std::mt19937_64 engine_;
};

}  // namespace powergame

#endif  // POWERGAME_RANDOM_H_
