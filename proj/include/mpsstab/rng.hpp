// Copyright 2026 The mpsstab Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace mpsstab {

// splitmix64 finalizer. Used to derive independent seed streams.
constexpr uint64_t mix_seed(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed for sub-stream `index` of `seed`: mix_seed(seed XOR mix_seed(index + 1)).
constexpr uint64_t derive_seed(uint64_t seed, uint64_t index) {
    return mix_seed(seed ^ mix_seed(index + 1));
}

// mt19937_64 with platform-independent bounded draws. The standard
// distributions are implementation-defined, which would break byte-identical
// output across standard libraries.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(mix_seed(seed)) {}

    uint64_t next() { return engine_(); }

    // Uniform integer in [0, n). Rejection sampling, no modulo bias.
    uint64_t uniform_index(uint64_t n) {
        if (n <= 1) {
            return 0;
        }
        const uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace mpsstab
