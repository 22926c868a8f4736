// Copyright 2026 The mtnoise Authors
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

#ifndef MTNOISE_RNG_H_
#define MTNOISE_RNG_H_

#include <cstdint>

namespace mtnoise {

// SplitMix64 finalizer: a bijective 64-bit mixer.
constexpr uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Combines a parent seed with a label into a child seed. Used to give every
// ladder level, noise type and shard its own independent seed.
constexpr uint64_t DeriveSeed(uint64_t seed, uint64_t label) {
  return Mix64(Mix64(seed + 0x9E3779B97F4A7C15ULL) ^ Mix64(label ^ 0xD1B54A32D192ED03ULL));
}

// Counter-based random stream. Draw k is Mix64(key + k * golden), so a
// stream is a pure function of its key and the number of draws taken.
// Distributions are implemented here rather than with <random> because the
// standard distributions are not specified bit-exactly across library
// implementations.
class RandomStream {
 public:
  explicit constexpr RandomStream(uint64_t key) : key_(key) {}

  uint64_t Next() {
    ++counter_;
    return Mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double UniformDouble() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  bool Bernoulli(double p) { return UniformDouble() < p; }

  // Unbiased uniform integer in [0, n); n must be positive.
  uint64_t UniformBelow(uint64_t n) {
    // Lemire's multiply-shift with rejection.
    unsigned __int128 m = static_cast<unsigned __int128>(Next()) * n;
    auto low = static_cast<uint64_t>(m);
    if (low < n) {
      const uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(Next()) * n;
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  uint64_t key() const { return key_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

// The stream used for one token of one segment. Independent of processing
// order and thread count.
constexpr RandomStream DeriveTokenStream(uint64_t seed, uint64_t segment_index,
                                         uint64_t token_index) {
  uint64_t key = Mix64(seed ^ 0x6A09E667F3BCC909ULL);
  key = Mix64(key + Mix64(segment_index + 0xBB67AE8584CAA73BULL));
  key = Mix64(key ^ Mix64(token_index + 0x3C6EF372FE94F82BULL));
  return RandomStream(key);
}

}  // namespace mtnoise

#endif  // MTNOISE_RNG_H_
