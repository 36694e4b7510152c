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

#ifndef ZO2_NUMERICS_CODEC_H_
#define ZO2_NUMERICS_CODEC_H_

#include <cstddef>
#include <cstdint>

#include "zo2/numerics/tensor_buf.h"

namespace zo2::numerics {

// Non-fatal conversion diagnostics collected by encode().
struct ConversionSummary {
  std::size_t total = 0;
  std::size_t nan_count = 0;
  std::size_t saturated_count = 0;

  ConversionSummary& operator+=(const ConversionSummary& o) {
    total += o.total;
    nan_count += o.nan_count;
    saturated_count += o.saturated_count;
    return *this;
  }
};

// Largest finite magnitude of a format. E4M3 has no infinities: 448.
double max_finite(ElemFormat fmt);

// Round-to-nearest-even into the low-bit format `fmt`. Magnitudes beyond the
// largest finite value (including infinities) saturate; NaN maps to the
// format's canonical NaN.
std::uint16_t encode_scalar(double x, ElemFormat fmt, ConversionSummary* summary = nullptr);
double decode_scalar(std::uint16_t bits, ElemFormat fmt);

// F32/F64 -> F16/BF16/F8E4M3.
TensorBuf encode(const TensorBuf& src, ElemFormat target, ConversionSummary* summary = nullptr);
// F16/BF16/F8E4M3 -> F32/F64. Exact.
TensorBuf decode(const TensorBuf& src, ElemFormat target);

// In-place variants; `dst` must already have the target format and the same
// element count as `src`. No allocation.
void encode_to(const TensorBuf& src, TensorBuf& dst, ConversionSummary* summary = nullptr);
void decode_to(const TensorBuf& src, TensorBuf& dst);

// Format conversion between arithmetic formats or via the codecs, whichever
// applies. Same-format conversion is a byte copy.
void convert_to(const TensorBuf& src, TensorBuf& dst, ConversionSummary* summary = nullptr);

}  // namespace zo2::numerics

#endif  // ZO2_NUMERICS_CODEC_H_
