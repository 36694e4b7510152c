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

#include "zo2/scheduler/cost_model.h"

#include <stdexcept>

namespace zo2::scheduler {

void CostModel::validate() const {
  auto nonneg = [](double v, const char* what) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string("CostModel: negative ") + what);
  };
  nonneg(embed_forward, "embed_forward");
  nonneg(head_forward, "head_forward");
  nonneg(latency, "latency");
  nonneg(update_time, "update_time");
  nonneg(alloc_latency, "alloc_latency");
  nonneg(codec_time_per_byte, "codec_time_per_byte");
  for (double v : block_forward) nonneg(v, "block_forward");
  for (double v : block_bytes) nonneg(v, "block_bytes");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("CostModel: bandwidth must be positive");
  if (!(amp_speedup > 0.0)) throw std::invalid_argument("CostModel: amp_speedup must be positive");
  if (block_bytes.size() != block_forward.size()) {
    throw std::invalid_argument("CostModel: block_bytes and block_forward sizes differ");
  }
}

CostModel CostModel::uniform(std::size_t n_blocks, double block_forward, double comm, double embed_forward,
                             double head_forward) {
  CostModel c;
  c.embed_forward = embed_forward;
  c.head_forward = head_forward;
  c.block_forward.assign(n_blocks, block_forward);
  c.block_bytes.assign(n_blocks, comm);
  c.bandwidth = 1.0;
  return c;
}

CostModel cost_from_hardware(const model::ModelSpec& spec, std::size_t batch, const HardwareProfile& hw) {
  const double tokens = static_cast<double>(batch * spec.seq_len);
  const double d = static_cast<double>(spec.dim);
  const double s = static_cast<double>(spec.seq_len);
  // Dense matmuls (qkv, out, two MLP) plus attention scores and context.
  const double block_flops = 2.0 * tokens * 12.0 * d * d + 4.0 * static_cast<double>(batch) * s * s * d;
  const double head_flops = 2.0 * tokens * d * static_cast<double>(spec.vocab);
  const double embed_flops = tokens * d;

  CostModel c;
  c.embed_forward = embed_flops / hw.flops;
  c.head_forward = head_flops / hw.flops;
  c.block_forward.assign(spec.n_blocks, block_flops / hw.flops);
  c.block_bytes.assign(spec.n_blocks, static_cast<double>(model::block_param_count(spec)) * 4.0);
  c.bandwidth = hw.link_bandwidth;
  c.latency = hw.link_latency;
  // Reading and writing every parameter once for g*z.
  c.update_time = 3.0 * static_cast<double>(model::block_param_count(spec)) / hw.flops;
  c.alloc_latency = hw.alloc_latency;
  c.codec_time_per_byte = 1.0 / hw.codec_bandwidth;
  c.amp_speedup = hw.amp_speedup;
  return c;
}

}  // namespace zo2::scheduler
