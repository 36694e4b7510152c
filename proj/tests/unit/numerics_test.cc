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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <vector>

#include "zo2/numerics/codec.h"
#include "zo2/numerics/elem_format.h"
#include "zo2/numerics/rng.h"
#include "zo2/numerics/tensor_buf.h"

namespace zo2::numerics {
namespace {

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StateMapsToCounterBlock) {
  const std::uint64_t seed = 0x0123456789abcdefULL, stream = 0x1111222233334444ULL, ctr = 0x5555666677778888ULL;
  EXPECT_EQ(random_block(seed, stream, ctr),
            philox4x32_10({0x77778888, 0x55556666, 0x33334444, 0x11112222}, {0x89abcdef, 0x01234567}));
}

TEST(Rng, GaussianIsBoxMullerOfBlock) {
  for (std::uint64_t c = 0; c < 64; ++c) {
    const auto b = random_block(9, 0, c);
    const double u1 = static_cast<double>(((std::uint64_t{b[0]} << 32 | b[1]) >> 11) + 1) / 9007199254740992.0;
    const double u2 = static_cast<double>((std::uint64_t{b[2]} << 32 | b[3]) >> 11) / 9007199254740992.0;
    EXPECT_EQ(gaussian_at(9, 0, c), std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2));
  }
}

TEST(Rng, SplitAdvanceLaw) {
  const RngState s{42, 0, 17};
  auto [whole, end] = gaussian_fill(s, 100);
  EXPECT_EQ(end.counter, s.counter + 100);
  auto [first, mid] = gaussian_fill(s, 37);
  auto [second, end2] = gaussian_fill(mid, 63);
  EXPECT_EQ(end, end2);
  auto w = whole.as<double>();
  auto a = first.as<double>();
  auto b = second.as<double>();
  for (std::size_t i = 0; i < 37; ++i) EXPECT_EQ(w[i], a[i]);
  for (std::size_t i = 0; i < 63; ++i) EXPECT_EQ(w[37 + i], b[i]);
  RngState st = s;
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(next_gaussian(st), w[i]);
  EXPECT_EQ(st, end);
}

TEST(Rng, RestoreReplaysSequence) {
  RngState st{5, 0, 0};
  const RngState saved = st;
  std::vector<double> a, b;
  for (int i = 0; i < 10; ++i) a.push_back(next_gaussian(st));
  st = saved;
  for (int i = 0; i < 10; ++i) b.push_back(next_gaussian(st));
  EXPECT_EQ(a, b);
}

TEST(Rng, GaussianMoments) {
  const std::size_t n = 200000;
  auto [buf, _] = gaussian_fill({1234, 0, 0}, n);
  double m = 0.0, v = 0.0, k4 = 0.0;
  for (double x : buf.as<double>()) m += x;
  m /= n;
  for (double x : buf.as<double>()) {
    v += (x - m) * (x - m);
    k4 += std::pow(x - m, 4);
  }
  v /= n;
  k4 /= n;
  // 5 sigma bands for the sample mean, variance and fourth moment.
  EXPECT_LT(std::abs(m), 5.0 / std::sqrt(n));
  EXPECT_LT(std::abs(v - 1.0), 5.0 * std::sqrt(2.0 / n));
  EXPECT_LT(std::abs(k4 - 3.0), 5.0 * std::sqrt(96.0 / n));
}

TEST(Rng, StreamsAreUncorrelated) {
  const std::size_t n = 100000;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) sxy += gaussian_at(7, 0, i) * gaussian_at(7, 1, i);
  EXPECT_LT(std::abs(sxy / n), 5.0 / std::sqrt(n));
  double sseed = 0.0;
  for (std::size_t i = 0; i < n; ++i) sseed += gaussian_at(7, 0, i) * gaussian_at(8, 0, i);
  EXPECT_LT(std::abs(sseed / n), 5.0 / std::sqrt(n));
}

TEST(Rng, UniformIndexInRange) {
  RngState st{3, 1, 0};
  std::vector<int> counts(10, 0);
  for (int i = 0; i < 100000; ++i) {
    const auto k = next_index(st, 10);
    ASSERT_LT(k, 10u);
    ++counts[k];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_THROW(uniform_index_at(0, 0, 0, 0), std::invalid_argument);
}

TEST(Rng, EmptyFillRejected) { EXPECT_THROW(gaussian_fill({0, 0, 0}, 0), std::invalid_argument); }

TEST(Rng, DeriveSeedSpreads) {
  EXPECT_NE(derive_seed(0, 0), derive_seed(0, 1));
  EXPECT_NE(derive_seed(0, 1), derive_seed(1, 0));
  EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
}

TEST(TensorBuf, ZeroFilledAndChecked) {
  TensorBuf t({2, 3}, ElemFormat::kF32);
  EXPECT_EQ(t.numel(), 6u);
  EXPECT_EQ(t.size_bytes(), 24u);
  for (float x : t.as<float>()) EXPECT_EQ(x, 0.0f);
  EXPECT_THROW(t.as<double>(), std::invalid_argument);
  EXPECT_THROW(TensorBuf({2, 0}, ElemFormat::kF32), std::invalid_argument);
  EXPECT_THROW(TensorBuf({}, ElemFormat::kF32), std::invalid_argument);
  EXPECT_THROW(t.reshaped({4}), std::invalid_argument);
  EXPECT_EQ(t.reshaped({6}).shape(), (std::vector<std::size_t>{6}));
}

TEST(ElemFormat, Sizes) {
  EXPECT_EQ(bytes_per_elem(ElemFormat::kF64), 8u);
  EXPECT_EQ(bytes_per_elem(ElemFormat::kF32), 4u);
  EXPECT_EQ(bytes_per_elem(ElemFormat::kF16), 2u);
  EXPECT_EQ(bytes_per_elem(ElemFormat::kBF16), 2u);
  EXPECT_EQ(bytes_per_elem(ElemFormat::kF8E4M3), 1u);
  EXPECT_EQ(parse_elem_format("bf16"), ElemFormat::kBF16);
  EXPECT_EQ(parse_elem_format("f8"), ElemFormat::kF8E4M3);
  EXPECT_FALSE(parse_elem_format("int4").has_value());
}

// Encodings computed with numpy (F16) and ml_dtypes (BF16, E4M3FN), except
// where those libraries overflow to inf/NaN: this codec saturates instead.
struct CodecVector {
  double x;
  std::uint16_t f16, bf16, e4m3;
};

const std::vector<CodecVector>& codec_vectors() {
  static const std::vector<CodecVector> v = {
      {0.0, 0x0, 0x0, 0x0},
      {1.0, 0x3c00, 0x3f80, 0x38},
      {-1.0, 0xbc00, 0xbf80, 0xb8},
      {0.1, 0x2e66, 0x3dcd, 0x1d},
      {-0.3333333333333333, 0xb555, 0xbeab, 0xab},
      {65504.0, 0x7bff, 0x4780, 0x7e},
      {65519.0, 0x7bff, 0x4780, 0x7e},
      {65520.0, 0x7bff, 0x4780, 0x7e},
      {1e5, 0x7bff, 0x47c3, 0x7e},
      {6.103515625e-05, 0x400, 0x3880, 0x0},
      {5.960464477539063e-08, 0x1, 0x3380, 0x0},
      {2.9802322387695312e-08, 0x0, 0x3300, 0x0},
      {4.470348358154297e-08, 0x1, 0x3340, 0x0},
      {1.00146484375, 0x3c02, 0x3f80, 0x38},
      {1.00048828125, 0x3c00, 0x3f80, 0x38},
      {3.14159, 0x4248, 0x4049, 0x45},
      {448.0, 0x5f00, 0x43e0, 0x7e},
      {464.0, 0x5f40, 0x43e8, 0x7e},
      {500.0, 0x5fd0, 0x43fa, 0x7e},
      {0.001953125, 0x1800, 0x3b00, 0x1},
      {0.0009765625, 0x1400, 0x3a80, 0x0},
      {0.00146484375, 0x1600, 0x3ac0, 0x1},
      {240.0, 0x5b80, 0x4370, 0x77},
      {0.017, 0x245a, 0x3c8b, 0x9},
      {-17.25, 0xcc50, 0xc18a, 0xd9},
  };
  return v;
}

TEST(Codec, MatchesReferenceEncodings) {
  for (const auto& c : codec_vectors()) {
    EXPECT_EQ(encode_scalar(c.x, ElemFormat::kF16), c.f16) << c.x;
    EXPECT_EQ(encode_scalar(c.x, ElemFormat::kBF16), c.bf16) << c.x;
    EXPECT_EQ(encode_scalar(c.x, ElemFormat::kF8E4M3), c.e4m3) << c.x;
  }
}

// Independent BF16 oracle: round-to-nearest-even on the F32 bit pattern.
std::uint16_t bf16_from_f32_bits(float f) {
  const std::uint32_t u = std::bit_cast<std::uint32_t>(f);
  return static_cast<std::uint16_t>((u + 0x7fffu + ((u >> 16) & 1u)) >> 16);
}

TEST(Codec, Bf16AgreesWithBitOracle) {
  RngState st{77, 3, 0};
  for (int i = 0; i < 20000; ++i) {
    const float f = static_cast<float>(next_gaussian(st) * std::exp2(std::floor(next_uniform(st) * 60.0 - 30.0)));
    ASSERT_EQ(encode_scalar(f, ElemFormat::kBF16), bf16_from_f32_bits(f)) << f;
  }
}

TEST(Codec, RoundTripRelativeError) {
  RngState st{11, 3, 0};
  double worst_bf16 = 0.0, worst_f8 = 0.0, worst_f16 = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = next_gaussian(st) * std::exp2(std::floor(next_uniform(st) * 12.0 - 6.0));
    if (x == 0.0) continue;
    auto rt = [&](ElemFormat f) { return std::abs(decode_scalar(encode_scalar(x, f), f) - x) / std::abs(x); };
    worst_bf16 = std::max(worst_bf16, rt(ElemFormat::kBF16));
    if (std::abs(x) >= std::ldexp(1.0, -14)) worst_f16 = std::max(worst_f16, rt(ElemFormat::kF16));
    if (std::abs(x) >= std::ldexp(1.0, -6) && std::abs(x) <= 448.0) worst_f8 = std::max(worst_f8, rt(ElemFormat::kF8E4M3));
  }
  EXPECT_LE(worst_bf16, std::ldexp(1.0, -8));
  EXPECT_LE(worst_f16, std::ldexp(1.0, -11));
  EXPECT_LE(worst_f8, std::ldexp(1.0, -2));
  EXPECT_LE(worst_f8, std::ldexp(1.0, -4));
}

TEST(Codec, SaturationAndNan) {
  ConversionSummary s;
  EXPECT_EQ(decode_scalar(encode_scalar(448.0, ElemFormat::kF8E4M3, &s), ElemFormat::kF8E4M3), 448.0);
  EXPECT_EQ(s.saturated_count, 0u);
  EXPECT_EQ(decode_scalar(encode_scalar(500.0, ElemFormat::kF8E4M3, &s), ElemFormat::kF8E4M3), 448.0);
  EXPECT_EQ(s.saturated_count, 1u);
  EXPECT_EQ(decode_scalar(encode_scalar(-1e9, ElemFormat::kF16, &s), ElemFormat::kF16), -65504.0);
  EXPECT_EQ(decode_scalar(encode_scalar(std::numeric_limits<double>::infinity(), ElemFormat::kBF16, &s),
                          ElemFormat::kBF16),
            max_finite(ElemFormat::kBF16));
  EXPECT_EQ(s.saturated_count, 3u);
  for (auto f : {ElemFormat::kF16, ElemFormat::kBF16, ElemFormat::kF8E4M3}) {
    EXPECT_TRUE(std::isnan(decode_scalar(encode_scalar(std::nan(""), f, &s), f)));
  }
  EXPECT_EQ(s.nan_count, 3u);
  EXPECT_EQ(s.total, 7u);
  EXPECT_EQ(max_finite(ElemFormat::kF8E4M3), 448.0);
  EXPECT_EQ(max_finite(ElemFormat::kF16), 65504.0);
  EXPECT_EQ(max_finite(ElemFormat::kBF16), std::ldexp(255.0, 120));
}

TEST(Codec, ExactForRepresentableValuesAndIdempotent) {
  for (auto f : {ElemFormat::kF16, ElemFormat::kBF16, ElemFormat::kF8E4M3}) {
    for (std::uint32_t bits = 0; bits < (f == ElemFormat::kF8E4M3 ? 0x100u : 0x10000u); ++bits) {
      const double x = decode_scalar(static_cast<std::uint16_t>(bits), f);
      if (!std::isfinite(x)) continue;
      const auto again = encode_scalar(x, f);
      ASSERT_EQ(decode_scalar(again, f), x) << bits;
      ASSERT_EQ(encode_scalar(decode_scalar(again, f), f), again);
    }
  }
}

TEST(Codec, BufferRoundTripAndSizes) {
  auto [src, _] = gaussian_fill({1, 0, 0}, 1000);
  TensorBuf f32({1000}, ElemFormat::kF32);
  convert_to(src, f32);
  EXPECT_EQ(f32.size_bytes(), 4000u);
  EXPECT_EQ(encode(f32, ElemFormat::kBF16).size_bytes(), 2000u);
  EXPECT_EQ(encode(f32, ElemFormat::kF16).size_bytes(), 2000u);
  EXPECT_EQ(encode(f32, ElemFormat::kF8E4M3).size_bytes(), 1000u);
  const TensorBuf enc = encode(f32, ElemFormat::kBF16);
  const TensorBuf dec = decode(enc, ElemFormat::kF32);
  EXPECT_TRUE(encode(dec, ElemFormat::kBF16) == enc);
  TensorBuf back({1000}, ElemFormat::kF32);
  convert_to(f32, back);
  EXPECT_TRUE(back == f32);
}

}  // namespace
}  // namespace zo2::numerics
