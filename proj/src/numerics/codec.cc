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

#include "zo2/numerics/codec.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace zo2::numerics {

namespace {

struct Layout {
  int exp_bits;
  int man_bits;
  int bias;
  double max_finite;
  std::uint16_t nan_bits;
  bool has_inf;
};

Layout layout_of(ElemFormat fmt) {
  switch (fmt) {
    case ElemFormat::kF16:
      return {5, 10, 15, 65504.0, 0x7E00, true};
    case ElemFormat::kBF16:
      return {8, 7, 127, std::ldexp(255.0, 120), 0x7FC0, true};
    case ElemFormat::kF8E4M3:
      return {4, 3, 7, 448.0, 0x7F, false};
    default:
      throw std::invalid_argument("codec: not a low-bit format");
  }
}

template <typename T>
void encode_span(std::span<const T> src, std::span<std::byte> dst, ElemFormat fmt,
                 ConversionSummary* summary) {
  if (bytes_per_elem(fmt) == 1) {
    auto* out = reinterpret_cast<std::uint8_t*>(dst.data());
    for (std::size_t i = 0; i < src.size(); ++i) {
      out[i] = static_cast<std::uint8_t>(encode_scalar(static_cast<double>(src[i]), fmt, summary));
    }
  } else {
    auto* out = reinterpret_cast<std::uint16_t*>(dst.data());
    for (std::size_t i = 0; i < src.size(); ++i) {
      out[i] = encode_scalar(static_cast<double>(src[i]), fmt, summary);
    }
  }
}

template <typename T>
void decode_span(std::span<const std::byte> src, std::span<T> dst, ElemFormat fmt) {
  if (bytes_per_elem(fmt) == 1) {
    const auto* in = reinterpret_cast<const std::uint8_t*>(src.data());
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<T>(decode_scalar(in[i], fmt));
  } else {
    const auto* in = reinterpret_cast<const std::uint16_t*>(src.data());
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<T>(decode_scalar(in[i], fmt));
  }
}

}  // namespace

double max_finite(ElemFormat fmt) {
  switch (fmt) {
    case ElemFormat::kF64:
      return std::numeric_limits<double>::max();
    case ElemFormat::kF32:
      return std::numeric_limits<float>::max();
    default:
      return layout_of(fmt).max_finite;
  }
}

std::uint16_t encode_scalar(double x, ElemFormat fmt, ConversionSummary* summary) {
  const Layout l = layout_of(fmt);
  const int total_bits = 1 + l.exp_bits + l.man_bits;
  const std::uint16_t sign = std::signbit(x) ? static_cast<std::uint16_t>(1u << (total_bits - 1)) : 0;
  if (summary) ++summary->total;
  if (std::isnan(x)) {
    if (summary) ++summary->nan_count;
    return static_cast<std::uint16_t>(l.nan_bits | sign);
  }
  double a = std::fabs(x);
  if (a == 0.0) return sign;

  const int min_normal_exp = 1 - l.bias;
  bool saturated = false;
  if (a > l.max_finite) {
    a = l.max_finite;
    saturated = true;
  } else {
    int e2 = 0;
    std::frexp(a, &e2);
    int unbiased = e2 - 1;
    if (unbiased < min_normal_exp) unbiased = min_normal_exp;
    const int quantum_exp = unbiased - l.man_bits;
    // Scaling by a power of two is exact, so this is a single rounding.
    const double q = std::nearbyint(std::ldexp(a, -quantum_exp));
    a = std::ldexp(q, quantum_exp);
    if (a > l.max_finite) {
      a = l.max_finite;
      saturated = true;
    }
  }
  if (saturated && summary) ++summary->saturated_count;
  if (a == 0.0) return sign;

  std::uint32_t exp_field = 0;
  std::uint32_t man_field = 0;
  if (a < std::ldexp(1.0, min_normal_exp)) {
    man_field = static_cast<std::uint32_t>(std::ldexp(a, l.man_bits - min_normal_exp));
  } else {
    int e2 = 0;
    const double frac = std::frexp(a, &e2);  // a = frac * 2^e2, frac in [0.5, 1)
    exp_field = static_cast<std::uint32_t>(e2 - 1 + l.bias);
    man_field = static_cast<std::uint32_t>(std::ldexp(frac * 2.0 - 1.0, l.man_bits));
  }
  return static_cast<std::uint16_t>(sign | (exp_field << l.man_bits) | man_field);
}

double decode_scalar(std::uint16_t bits, ElemFormat fmt) {
  const Layout l = layout_of(fmt);
  const int total_bits = 1 + l.exp_bits + l.man_bits;
  const bool neg = (bits >> (total_bits - 1)) & 1u;
  const std::uint32_t exp_mask = (1u << l.exp_bits) - 1u;
  const std::uint32_t man_mask = (1u << l.man_bits) - 1u;
  const std::uint32_t exp_field = (bits >> l.man_bits) & exp_mask;
  const std::uint32_t man_field = bits & man_mask;

  double v;
  if (l.has_inf && exp_field == exp_mask) {
    v = man_field == 0 ? std::numeric_limits<double>::infinity()
                       : std::numeric_limits<double>::quiet_NaN();
  } else if (!l.has_inf && exp_field == exp_mask && man_field == man_mask) {
    v = std::numeric_limits<double>::quiet_NaN();
  } else if (exp_field == 0) {
    v = std::ldexp(static_cast<double>(man_field), 1 - l.bias - l.man_bits);
  } else {
    v = std::ldexp(static_cast<double>(man_field | (1u << l.man_bits)),
                   static_cast<int>(exp_field) - l.bias - l.man_bits);
  }
  return neg ? -v : v;
}

void encode_to(const TensorBuf& src, TensorBuf& dst, ConversionSummary* summary) {
  if (!is_low_bit_format(dst.fmt())) throw std::invalid_argument("encode: target must be F16, BF16 or F8E4M3");
  if (src.numel() != dst.numel()) throw std::invalid_argument("encode: element count mismatch");
  if (src.fmt() == ElemFormat::kF64) {
    encode_span(src.as<double>(), dst.bytes(), dst.fmt(), summary);
  } else if (src.fmt() == ElemFormat::kF32) {
    encode_span(src.as<float>(), dst.bytes(), dst.fmt(), summary);
  } else {
    throw std::invalid_argument("encode: source must be F32 or F64");
  }
}

void decode_to(const TensorBuf& src, TensorBuf& dst) {
  if (!is_low_bit_format(src.fmt())) throw std::invalid_argument("decode: source must be F16, BF16 or F8E4M3");
  if (src.numel() != dst.numel()) throw std::invalid_argument("decode: element count mismatch");
  if (dst.fmt() == ElemFormat::kF64) {
    decode_span(src.bytes(), dst.as<double>(), src.fmt());
  } else if (dst.fmt() == ElemFormat::kF32) {
    decode_span(src.bytes(), dst.as<float>(), src.fmt());
  } else {
    throw std::invalid_argument("decode: target must be F32 or F64");
  }
}

TensorBuf encode(const TensorBuf& src, ElemFormat target, ConversionSummary* summary) {
  if (!is_low_bit_format(target)) throw std::invalid_argument("encode: target must be F16, BF16 or F8E4M3");
  TensorBuf out(src.shape(), target);
  encode_to(src, out, summary);
  return out;
}

TensorBuf decode(const TensorBuf& src, ElemFormat target) {
  if (!is_compute_format(target)) throw std::invalid_argument("decode: target must be F32 or F64");
  TensorBuf out(src.shape(), target);
  decode_to(src, out);
  return out;
}

void convert_to(const TensorBuf& src, TensorBuf& dst, ConversionSummary* summary) {
  if (src.numel() != dst.numel()) throw std::invalid_argument("convert: element count mismatch");
  if (src.fmt() == dst.fmt()) {
    std::memcpy(dst.bytes().data(), src.bytes().data(), src.size_bytes());
  } else if (is_low_bit_format(dst.fmt())) {
    encode_to(src, dst, summary);
  } else if (is_low_bit_format(src.fmt())) {
    decode_to(src, dst);
  } else if (dst.fmt() == ElemFormat::kF32) {
    auto in = src.as<double>();
    auto out = dst.as<float>();
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = static_cast<float>(in[i]);
  } else {
    auto in = src.as<float>();
    auto out = dst.as<double>();
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i];
  }
}

}  // namespace zo2::numerics
