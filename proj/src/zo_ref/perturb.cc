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

#include "zo2/zo_ref/perturb.h"

namespace zo2::zo {

namespace {

template <typename T>
RngState axpy_typed(T* x, std::size_t n, double scale, RngState st) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += static_cast<T>(scale * numerics::next_gaussian(st));
  }
  return st;
}

}  // namespace

void OpTrace::record(const OpRecord& r) {
  std::lock_guard lock(mu_);
  records_.push_back(r);
}

std::vector<OpRecord> OpTrace::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::vector<OpRecord> OpTrace::for_segment(std::size_t module, std::size_t segment) const {
  std::lock_guard lock(mu_);
  std::vector<OpRecord> out;
  for (const auto& r : records_) {
    if (r.module == module && r.segment == segment) out.push_back(r);
  }
  return out;
}

RngState axpy_gaussian(const SegmentView& seg, double scale, RngState state) {
  switch (seg.fmt) {
    case numerics::ElemFormat::kF64:
      return axpy_typed(reinterpret_cast<double*>(seg.data), seg.numel, scale, state);
    case numerics::ElemFormat::kF32:
      return axpy_typed(reinterpret_cast<float*>(seg.data), seg.numel, scale, state);
    default:
      throw std::invalid_argument("axpy_gaussian: parameters must be F32 or F64");
  }
}

RngState axpy_gaussian(std::span<const SegmentView> segments, double scale, RngState state, OpKind kind,
                       OpTrace* trace, std::size_t module) {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (trace) trace->record({module, i, kind, scale, state});
    state = axpy_gaussian(segments[i], scale, state);
  }
  return state;
}

double projected_gradient(double loss_plus, double loss_minus, double eps) {
  return (loss_plus - loss_minus) / (2.0 * eps);
}

}  // namespace zo2::zo
