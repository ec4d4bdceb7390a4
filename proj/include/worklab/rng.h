// Copyright 2026 The worklab Authors
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

#include <complex>
#include <cstdint>
#include <random>

namespace worklab {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-row seed used by experiments: base_seed XOR hash(N, sample_index).
inline uint64_t derive_seed(uint64_t base_seed, uint64_t num_sites, uint64_t sample_index) {
    return base_seed ^ mix64((num_sites << 32) ^ sample_index);
}

/// Standard complex Gaussian, E|z|^2 = 1.
inline std::complex<double> complex_gaussian(Rng &rng) {
    std::normal_distribution<double> normal(0.0, 0.7071067811865476);
    double re = normal(rng);
    double im = normal(rng);
    return {re, im};
}

}  // namespace worklab
