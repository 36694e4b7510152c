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

#ifndef ZO2_ZO_REF_PERTURB_H_
#define ZO2_ZO_REF_PERTURB_H_

#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

#include "zo2/model/bucket.h"
#include "zo2/numerics/rng.h"

namespace zo2::zo {

using model::SegmentView;
using numerics::RngState;

enum class OpKind { kPerturb, kUpdate };

// One kernel application to one segment, as seen by an instrumented run.
struct OpRecord {
  std::size_t module;
  std::size_t segment;
  OpKind kind;
  double scale;
  RngState state;

  friend bool operator==(const OpRecord&, const OpRecord&) = default;
};

// Append-only record of kernel applications. Safe for concurrent writers.
class OpTrace {
 public:
  void record(const OpRecord& r);
  std::vector<OpRecord> records() const;
  // Records touching one segment, in application order.
  std::vector<OpRecord> for_segment(std::size_t module, std::size_t segment) const;

 private:
  mutable std::mutex mu_;
  std::vector<OpRecord> records_;
};

// theta += scale * z for every element of every segment, z drawn in order
// from `state`; returns the advanced state (counter += total elements).
// Used for perturbation (scale = +eps, -2 eps) and for the update
// (scale = -lr * g). Streams z one element at a time: no parameter-shaped
// temporaries are allocated.
RngState axpy_gaussian(std::span<const SegmentView> segments, double scale, RngState state,
                       OpKind kind = OpKind::kPerturb, OpTrace* trace = nullptr, std::size_t module = 0);

// Same, single segment.
RngState axpy_gaussian(const SegmentView& segment, double scale, RngState state);

// (l_plus - l_minus) / (2 eps)
double projected_gradient(double loss_plus, double loss_minus, double eps);

}  // namespace zo2::zo

#endif  // ZO2_ZO_REF_PERTURB_H_
