/**
 * Copyright 2026 The ZO2 Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ZO2_NUMERICS_RNG_H_
#define ZO2_NUMERICS_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "zo2/numerics/tensor_buf.h"

namespace zo2::numerics {

// Capturable generator state. The generator is Philox4x32-10 keyed by `seed`;
// `stream` and `counter` together form the 128-bit counter block, so the whole
// state is 24 bytes and restoring it is a plain copy.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t counter = 0;

  friend bool operator==(const RngState&, const RngState&) = default;
};

// Stream ids used across the project. Keeping them disjoint means batch
// sampling never shifts perturbation draws.
namespace streams {
inline constexpr std::uint64_t kPerturb = 0;
inline constexpr std::uint64_t kBatch = 1;
inline constexpr std::uint64_t kInit = 2;
inline constexpr std::uint64_t kData = 3;
}  // namespace streams

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// Raw 128-bit block for one counter value.
PhiloxCounter random_block(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

// One standard normal per counter value: Box-Muller on two 53-bit uniforms
// taken from the block, cosine branch only. Consuming exactly one counter per
// sample makes the advance law `counter += n` independent of how a draw
// sequence is split.
double gaussian_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

// Uniform in [0, 1) with 53 bits, one counter per sample.
double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

// Uniform integer in [0, bound), one counter per sample.
std::uint64_t uniform_index_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                               std::uint64_t bound);

inline double next_gaussian(RngState& st) { return gaussian_at(st.seed, st.stream, st.counter++); }
inline double next_uniform(RngState& st) { return uniform_at(st.seed, st.stream, st.counter++); }
inline std::uint64_t next_index(RngState& st, std::uint64_t bound) {
  return uniform_index_at(st.seed, st.stream, st.counter++, bound);
}

// Fills `out` with standard normals and returns the advanced state.
RngState gaussian_fill_into(RngState state, std::span<double> out);

// n >= 1, otherwise std::invalid_argument.
std::pair<TensorBuf, RngState> gaussian_fill(RngState state, std::size_t n);

// SplitMix64 finalizer over (base, index): per-iteration seed schedule.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace zo2::numerics

#endif  // ZO2_NUMERICS_RNG_H_
