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

#include "zo2/numerics/rng.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zo2::numerics {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline PhiloxCounter philox_round(PhiloxCounter c, PhiloxKey k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, c[0], hi0, lo0);
  mulhilo(kPhiloxM1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    ctr = philox_round(ctr, key);
  }
  return ctr;
}

PhiloxCounter random_block(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return philox4x32_10(ctr, key);
}

double gaussian_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const PhiloxCounter b = random_block(seed, stream, counter);
  const std::uint64_t a = ((static_cast<std::uint64_t>(b[0]) << 32) | b[1]) >> 11;
  const std::uint64_t c = ((static_cast<std::uint64_t>(b[2]) << 32) | b[3]) >> 11;
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = static_cast<double>(a + 1) * kTwoPow53Inv;
  const double u2 = static_cast<double>(c) * kTwoPow53Inv;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const PhiloxCounter b = random_block(seed, stream, counter);
  const std::uint64_t a = ((static_cast<std::uint64_t>(b[0]) << 32) | b[1]) >> 11;
  return static_cast<double>(a) * kTwoPow53Inv;
}

std::uint64_t uniform_index_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                               std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index_at: bound must be positive");
  const PhiloxCounter b = random_block(seed, stream, counter);
  const std::uint64_t x = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * bound) >> 64);
}

RngState gaussian_fill_into(RngState state, std::span<double> out) {
  for (double& v : out) v = next_gaussian(state);
  return state;
}

std::pair<TensorBuf, RngState> gaussian_fill(RngState state, std::size_t n) {
  if (n == 0) throw std::invalid_argument("gaussian_fill: n must be >= 1");
  TensorBuf buf({n}, ElemFormat::kF64);
  RngState next = gaussian_fill_into(state, buf.as<double>());
  return {std::move(buf), next};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base ^ (index * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace zo2::numerics
