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

#ifndef ZO2_NUMERICS_ELEM_FORMAT_H_
#define ZO2_NUMERICS_ELEM_FORMAT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace zo2::numerics {

// Element encodings. F64 and F32 are arithmetic formats; the remaining ones
// are storage/transfer encodings that must be decoded before use.
enum class ElemFormat : std::uint8_t { kF64, kF32, kF16, kBF16, kF8E4M3 };

constexpr std::size_t bytes_per_elem(ElemFormat fmt) {
  switch (fmt) {
    case ElemFormat::kF64:
      return 8;
    case ElemFormat::kF32:
      return 4;
    case ElemFormat::kF16:
    case ElemFormat::kBF16:
      return 2;
    case ElemFormat::kF8E4M3:
      return 1;
  }
  return 0;
}

constexpr bool is_compute_format(ElemFormat fmt) {
  return fmt == ElemFormat::kF64 || fmt == ElemFormat::kF32;
}

constexpr bool is_low_bit_format(ElemFormat fmt) { return !is_compute_format(fmt); }

std::string_view to_string(ElemFormat fmt);

// Accepts "f64", "f32", "f16", "bf16", "f8" / "f8e4m3" (case-insensitive).
std::optional<ElemFormat> parse_elem_format(std::string_view name);

template <typename T>
struct FormatOf;
template <>
struct FormatOf<double> {
  static constexpr ElemFormat value = ElemFormat::kF64;
};
template <>
struct FormatOf<float> {
  static constexpr ElemFormat value = ElemFormat::kF32;
};

}  // namespace zo2::numerics

#endif  // ZO2_NUMERICS_ELEM_FORMAT_H_
