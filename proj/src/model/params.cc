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

#include "zo2/model/params.h"

#include <new>
#include <stdexcept>

#include "zo2/common/errors.h"

namespace zo2::model {

namespace {

constexpr double kWeightStd = 0.02;

template <typename T>
void init_bucket(BlockBucket& bucket, numerics::RngState& state) {
  for (const Segment& seg : bucket.segments()) {
    auto v = bucket.values<T>(seg);
    switch (seg.kind) {
      case SegmentKind::kWeight:
        for (T& x : v) x = static_cast<T>(kWeightStd * numerics::next_gaussian(state));
        break;
      case SegmentKind::kGain:
        for (T& x : v) x = T(1);
        break;
      case SegmentKind::kBias:
        for (T& x : v) x = T(0);
        break;
    }
  }
}

void init_any(BlockBucket& bucket, numerics::RngState& state) {
  if (bucket.fmt() == ElemFormat::kF64) {
    init_bucket<double>(bucket, state);
  } else {
    init_bucket<float>(bucket, state);
  }
}

}  // namespace

BlockBucket& ModelParams::module(ModuleId id) {
  if (id == 0) return embedding;
  if (id <= blocks.size()) return blocks[id - 1];
  if (id == head_id()) return head;
  throw std::out_of_range("ModelParams::module: bad module id");
}

const BlockBucket& ModelParams::module(ModuleId id) const {
  return const_cast<ModelParams*>(this)->module(id);
}

std::size_t ModelParams::param_count() const {
  std::size_t n = embedding.numel() + head.numel();
  for (const auto& b : blocks) n += b.numel();
  return n;
}

std::string module_name(ModuleId id, std::size_t n_blocks) {
  if (id == 0) return "embedding";
  if (id == n_blocks + 1) return "head";
  return "block" + std::to_string(id);
}

ModelParams init_params(const ModelSpec& spec, numerics::RngState state, ElemFormat fmt) {
  spec.validate();
  if (!numerics::is_compute_format(fmt)) {
    throw std::invalid_argument("init_params: parameters must be F32 or F64");
  }
  try {
    ModelParams p;
    p.spec = spec;
    p.embedding = BlockBucket(embedding_layout(spec), fmt);
    p.blocks.reserve(spec.n_blocks);
    for (std::size_t i = 0; i < spec.n_blocks; ++i) p.blocks.emplace_back(block_layout(spec), fmt);
    p.head = BlockBucket(head_layout(spec), fmt);
    for (ModuleId m = 0; m < p.module_count(); ++m) init_any(p.module(m), state);
    return p;
  } catch (const std::bad_alloc&) {
    throw ResourceExhausted("init_params: cannot allocate parameters");
  }
}

std::vector<std::byte> canonical_bytes(const ModelParams& params) {
  std::vector<std::byte> out;
  for (ModuleId m = 0; m < params.module_count(); ++m) {
    auto b = params.module(m).buf().bytes();
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

}  // namespace zo2::model
