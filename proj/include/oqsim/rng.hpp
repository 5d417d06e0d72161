// Copyright 2026 The oqsim Authors
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
#include <random>

namespace oqsim {

// std::mt19937_64 is fully specified by the standard; the distributions are
// not, so doubles are drawn from the top 53 bits by hand. Recorded in run
// metadata under this name.
inline constexpr const char* kPrngName = "mt19937_64+splitmix64-stream/u53-v1";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1).
inline double uniform01(std::mt19937_64& eng) noexcept {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Independent engine for stream `index` of a run seeded with `seed`.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

}  // namespace oqsim
