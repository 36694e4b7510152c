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

#ifndef ZO2_MODEL_BUCKET_H_
#define ZO2_MODEL_BUCKET_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zo2/model/model_spec.h"
#include "zo2/numerics/tensor_buf.h"

namespace zo2::model {

using numerics::ElemFormat;
using numerics::TensorBuf;

enum class SegmentKind { kWeight, kBias, kGain };

struct SegmentDef {
  std::string name;
  std::vector<std::size_t> shape;
  SegmentKind kind;
};

// One named slice of a bucket. Offsets and sizes are in elements.
struct Segment {
  std::string name;
  std::vector<std::size_t> shape;
  SegmentKind kind;
  std::size_t offset;
  std::size_t numel;
};

// Untyped mutable view of a segment; what the perturbation kernels consume.
struct SegmentView {
  std::byte* data;
  std::size_t numel;
  ElemFormat fmt;
};

/**
 * A module's parameters packed into one contiguous buffer.
 *
 * Segments are laid out back to back in definition order, so they never
 * overlap and tile the buffer exactly. The order is the canonical order in
 * which both optimizers draw random numbers for the module.
 */
class BlockBucket {
 public:
  BlockBucket() = default;
  BlockBucket(const std::vector<SegmentDef>& layout, ElemFormat fmt);

  ElemFormat fmt() const { return buf_.fmt(); }
  std::size_t numel() const { return buf_.numel(); }
  std::size_t size_bytes() const { return buf_.size_bytes(); }
  bool empty() const { return segments_.empty(); }

  TensorBuf& buf() { return buf_; }
  const TensorBuf& buf() const { return buf_; }
  const std::vector<Segment>& segments() const { return segments_; }

  const Segment& segment(std::string_view name) const;
  bool has_segment(std::string_view name) const;

  template <typename T>
  std::span<T> values(const Segment& seg) {
    return buf_.as<T>().subspan(seg.offset, seg.numel);
  }
  template <typename T>
  std::span<const T> values(const Segment& seg) const {
    return buf_.as<T>().subspan(seg.offset, seg.numel);
  }
  template <typename T>
  std::span<const T> values(std::string_view name) const {
    return values<T>(segment(name));
  }

  SegmentView view(std::size_t segment_index);
  std::vector<SegmentView> views();

  // Same layout re-encoded in another format.
  BlockBucket converted(ElemFormat fmt) const;

  // Segments sorted, disjoint and covering the buffer.
  bool tiles_exactly() const;

  friend bool operator==(const BlockBucket& a, const BlockBucket& b) { return a.buf_ == b.buf_; }

 private:
  std::vector<Segment> segments_;
  TensorBuf buf_;
};

// Canonical layouts. Block order: ln1, qkv, attn_out, ln2, mlp_in, mlp_out,
// each bias/beta directly after its weight/gain. Weights are [in, out].
std::vector<SegmentDef> block_layout(const ModelSpec& spec);
// tok_embed [vocab, dim] then pos_embed [seq_len, dim].
std::vector<SegmentDef> embedding_layout(const ModelSpec& spec);
// ln_f then lm_head [vocab, dim]; lm_head is omitted when embeddings are tied.
std::vector<SegmentDef> head_layout(const ModelSpec& spec);

}  // namespace zo2::model

#endif  // ZO2_MODEL_BUCKET_H_
