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

#include "zo2/model/bucket.h"

#include <stdexcept>

#include "zo2/numerics/codec.h"

namespace zo2::model {

BlockBucket::BlockBucket(const std::vector<SegmentDef>& layout, ElemFormat fmt) {
  if (layout.empty()) throw std::invalid_argument("BlockBucket: empty layout");
  std::size_t offset = 0;
  segments_.reserve(layout.size());
  for (const auto& def : layout) {
    const std::size_t n = numerics::shape_numel(def.shape);
    segments_.push_back({def.name, def.shape, def.kind, offset, n});
    offset += n;
  }
  buf_ = TensorBuf({offset}, fmt);
}

const Segment& BlockBucket::segment(std::string_view name) const {
  for (const auto& s : segments_) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("BlockBucket: no segment named " + std::string(name));
}

bool BlockBucket::has_segment(std::string_view name) const {
  for (const auto& s : segments_) {
    if (s.name == name) return true;
  }
  return false;
}

SegmentView BlockBucket::view(std::size_t segment_index) {
  const Segment& s = segments_.at(segment_index);
  const std::size_t width = numerics::bytes_per_elem(fmt());
  return {buf_.bytes().data() + s.offset * width, s.numel, fmt()};
}

std::vector<SegmentView> BlockBucket::views() {
  std::vector<SegmentView> out;
  out.reserve(segments_.size());
  for (std::size_t i = 0; i < segments_.size(); ++i) out.push_back(view(i));
  return out;
}

BlockBucket BlockBucket::converted(ElemFormat fmt) const {
  BlockBucket out = *this;
  if (fmt == this->fmt()) return out;
  out.buf_ = TensorBuf(buf_.shape(), fmt);
  numerics::convert_to(buf_, out.buf_);
  return out;
}

bool BlockBucket::tiles_exactly() const {
  std::size_t cursor = 0;
  for (const auto& s : segments_) {
    if (s.offset != cursor) return false;
    if (s.numel != numerics::shape_numel(s.shape)) return false;
    cursor += s.numel;
  }
  return cursor == buf_.numel() &&
         buf_.size_bytes() == cursor * numerics::bytes_per_elem(buf_.fmt());
}

std::vector<SegmentDef> block_layout(const ModelSpec& spec) {
  const std::size_t d = spec.dim;
  const std::size_t m = spec.mlp_dim();
  return {
      {"ln1.gain", {d}, SegmentKind::kGain},
      {"ln1.bias", {d}, SegmentKind::kBias},
      {"qkv.weight", {d, 3 * d}, SegmentKind::kWeight},
      {"qkv.bias", {3 * d}, SegmentKind::kBias},
      {"attn_out.weight", {d, d}, SegmentKind::kWeight},
      {"attn_out.bias", {d}, SegmentKind::kBias},
      {"ln2.gain", {d}, SegmentKind::kGain},
      {"ln2.bias", {d}, SegmentKind::kBias},
      {"mlp_in.weight", {d, m}, SegmentKind::kWeight},
      {"mlp_in.bias", {m}, SegmentKind::kBias},
      {"mlp_out.weight", {m, d}, SegmentKind::kWeight},
      {"mlp_out.bias", {d}, SegmentKind::kBias},
  };
}

std::vector<SegmentDef> embedding_layout(const ModelSpec& spec) {
  return {
      {"tok_embed", {spec.vocab, spec.dim}, SegmentKind::kWeight},
      {"pos_embed", {spec.seq_len, spec.dim}, SegmentKind::kWeight},
  };
}

std::vector<SegmentDef> head_layout(const ModelSpec& spec) {
  std::vector<SegmentDef> out = {
      {"ln_f.gain", {spec.dim}, SegmentKind::kGain},
      {"ln_f.bias", {spec.dim}, SegmentKind::kBias},
  };
  if (!spec.tie_embeddings) out.push_back({"lm_head.weight", {spec.vocab, spec.dim}, SegmentKind::kWeight});
  return out;
}

}  // namespace zo2::model
