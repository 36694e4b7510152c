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

#include "zo2/numerics/tensor_buf.h"

#include <cstring>

namespace zo2::numerics {

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d == 0) throw std::invalid_argument("TensorBuf: shape dimensions must be positive");
    n *= d;
  }
  return n;
}

TensorBuf::TensorBuf(std::vector<std::size_t> shape, ElemFormat fmt)
    : shape_(std::move(shape)), fmt_(fmt), numel_(shape_numel(shape_)) {
  if (shape_.empty()) throw std::invalid_argument("TensorBuf: empty shape");
  data_.assign(numel_ * bytes_per_elem(fmt_), std::byte{0});
}

TensorBuf TensorBuf::from_values(std::span<const double> values, std::vector<std::size_t> shape,
                                 ElemFormat fmt) {
  TensorBuf out(std::move(shape), fmt);
  if (out.numel() != values.size()) {
    throw std::invalid_argument("TensorBuf::from_values: value count does not match shape");
  }
  if (fmt == ElemFormat::kF64) {
    std::memcpy(out.data_.data(), values.data(), values.size_bytes());
  } else if (fmt == ElemFormat::kF32) {
    auto dst = out.as<float>();
    for (std::size_t i = 0; i < values.size(); ++i) dst[i] = static_cast<float>(values[i]);
  } else {
    throw std::invalid_argument("TensorBuf::from_values: use encode() for low-bit formats");
  }
  return out;
}

TensorBuf TensorBuf::reshaped(std::vector<std::size_t> shape) const {
  if (shape_numel(shape) != numel_) {
    throw std::invalid_argument("TensorBuf::reshaped: element count mismatch");
  }
  TensorBuf out = *this;
  out.shape_ = std::move(shape);
  return out;
}

std::vector<double> TensorBuf::to_f64() const {
  if (fmt_ == ElemFormat::kF64) {
    auto v = as<double>();
    return {v.begin(), v.end()};
  }
  if (fmt_ == ElemFormat::kF32) {
    auto v = as<float>();
    return {v.begin(), v.end()};
  }
  throw std::invalid_argument("TensorBuf::to_f64: decode low-bit buffers first");
}

}  // namespace zo2::numerics
