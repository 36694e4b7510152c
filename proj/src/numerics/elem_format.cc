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

#include "zo2/numerics/elem_format.h"

#include <algorithm>
#include <cctype>
#include <string>

namespace zo2::numerics {

std::string_view to_string(ElemFormat fmt) {
  switch (fmt) {
    case ElemFormat::kF64:
      return "f64";
    case ElemFormat::kF32:
      return "f32";
    case ElemFormat::kF16:
      return "f16";
    case ElemFormat::kBF16:
      return "bf16";
    case ElemFormat::kF8E4M3:
      return "f8e4m3";
  }
  return "unknown";
}

std::optional<ElemFormat> parse_elem_format(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "f64" || lower == "fp64") return ElemFormat::kF64;
  if (lower == "f32" || lower == "fp32") return ElemFormat::kF32;
  if (lower == "f16" || lower == "fp16") return ElemFormat::kF16;
  if (lower == "bf16") return ElemFormat::kBF16;
  if (lower == "f8" || lower == "fp8" || lower == "f8e4m3") return ElemFormat::kF8E4M3;
  return std::nullopt;
}

}  // namespace zo2::numerics
