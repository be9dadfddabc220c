// Copyright (c) 2026 The asvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASVKIT_RNG_H_
#define ASVKIT_RNG_H_

#include <cstdint>
#include <utility>
#include <vector>

namespace asvkit {

// Portable random stream. Every derived quantity is defined here, not by
// <random>, so that the same seed yields the same stream on every platform
// and in other-language ports.
//
//   state init : four successive SplitMix64 outputs from the seed
//   NextU64    : xoshiro256** (Blackman & Vigna)
//   Uniform    : (NextU64() >> 11) * 2^-53, in [0, 1)
//   Below(n)   : rejection sampling on NextU64() with limit (2^64 - n) % n
//   Normal     : Box-Muller, sqrt(-2 ln(1 - u1)) * cos(2 pi u2); the sine
//                branch is discarded, one normal per two uniforms
//   Shuffle    : Fisher-Yates, i = n-1 down to 1, swap(i, Below(i + 1))
//   Stream(s,k): seed for sub-stream k is SplitMix64 applied to
//                s ^ (k * 0x9E3779B97F4A7C15)
class Rng {
 public:
  explicit Rng(uint64_t seed);

  static uint64_t SplitMix64(uint64_t* state);
  static uint64_t StreamSeed(uint64_t seed, uint64_t stream);

  uint64_t NextU64();
  double Uniform();
  uint64_t Below(uint64_t n);
  double Normal();

  template <typename T>
  void Shuffle(std::vector<T>* items) {
    if (items->size() < 2) return;
    for (size_t i = items->size() - 1; i > 0; --i) {
      const size_t j = static_cast<size_t>(Below(i + 1));
      std::swap((*items)[i], (*items)[j]);
    }
  }

 private:
  uint64_t s_[4];
};

}  // namespace asvkit

#endif  // ASVKIT_RNG_H_
