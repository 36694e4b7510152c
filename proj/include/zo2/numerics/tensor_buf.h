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

#ifndef ZO2_NUMERICS_TENSOR_BUF_H_
#define ZO2_NUMERICS_TENSOR_BUF_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "zo2/numerics/elem_format.h"

namespace zo2::numerics {

/**
 * Flat byte buffer with an immutable shape and element format.
 *
 * The byte length is always numel() * bytes_per_elem(fmt()). Typed access is
 * only available for the arithmetic formats and is checked against fmt().
 */
class TensorBuf {
 public:
  TensorBuf() = default;
  // Zero-filled buffer. Every dimension must be positive.
  TensorBuf(std::vector<std::size_t> shape, ElemFormat fmt);

  // Copies `values` into a new F64 or F32 buffer (narrowing for F32).
  static TensorBuf from_values(std::span<const double> values,
                               std::vector<std::size_t> shape,
                               ElemFormat fmt = ElemFormat::kF64);

  const std::vector<std::size_t>& shape() const { return shape_; }
  ElemFormat fmt() const { return fmt_; }
  std::size_t numel() const { return numel_; }
  std::size_t size_bytes() const { return data_.size(); }
  bool empty() const { return numel_ == 0; }

  std::span<std::byte> bytes() { return data_; }
  std::span<const std::byte> bytes() const { return data_; }

  template <typename T>
  std::span<T> as() {
    check_typed(FormatOf<T>::value);
    return {reinterpret_cast<T*>(data_.data()), numel_};
  }
  template <typename T>
  std::span<const T> as() const {
    check_typed(FormatOf<T>::value);
    return {reinterpret_cast<const T*>(data_.data()), numel_};
  }

  // Explicit reinterpretation with the same element count.
  TensorBuf reshaped(std::vector<std::size_t> shape) const;

  // Widened copy of an F64/F32 buffer.
  std::vector<double> to_f64() const;

  friend bool operator==(const TensorBuf& a, const TensorBuf& b) {
    return a.fmt_ == b.fmt_ && a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  void check_typed(ElemFormat want) const {
    if (fmt_ != want) throw std::invalid_argument("TensorBuf: typed access with mismatched format");
  }

  std::vector<std::size_t> shape_;
  ElemFormat fmt_ = ElemFormat::kF64;
  std::size_t numel_ = 0;
  std::vector<std::byte> data_;
};

std::size_t shape_numel(const std::vector<std::size_t>& shape);

}  // namespace zo2::numerics

#endif  // ZO2_NUMERICS_TENSOR_BUF_H_
