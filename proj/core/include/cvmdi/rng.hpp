// SPDX-License-Identifier: Apache-2.0
//
// cvmdi - key-rate engine for continuous-variable MDI QKD over fading satellite links
// Copyright (C) 2026 cvmdi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>

namespace cvmdi {

/// xoshiro256++ with splitmix64 state seeding. Substreams derived from
/// (seed, stream) are statistically independent, which keeps chunked or
/// parallel sampling bit-reproducible regardless of worker count.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) : Xoshiro256(seed, 0) {}
    Xoshiro256(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double();

    /// Standard normal via Box-Muller (deterministic two-at-a-time pairing).
    double next_gaussian();

    static constexpr const char* algorithm_name() { return "xoshiro256++ (splitmix64-seeded)"; }

  private:
    std::uint64_t state_[4];
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

}  // namespace cvmdi
