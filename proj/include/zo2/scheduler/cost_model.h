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

#ifndef ZO2_SCHEDULER_COST_MODEL_H_
#define ZO2_SCHEDULER_COST_MODEL_H_

#include <cstddef>
#include <vector>

#include "zo2/model/model_spec.h"

namespace zo2::scheduler {

/**
 * Task durations for one iteration, in abstract time units.
 *
 * Compute is stored as single-forward time; a module's dual forward costs
 * exactly twice that, while a block's transfer time depends only on its
 * wire bytes.
 */
struct CostModel {
  double embed_forward = 0.0;
  double head_forward = 0.0;
  std::vector<double> block_forward;  // per block
  std::vector<double> block_bytes;    // per block, uncompressed F32 bytes
  double bandwidth = 1.0;             // bytes per time unit
  double latency = 0.0;               // fixed cost per transfer
  double update_time = 0.0;           // applying g*z to one block
  double alloc_latency = 0.0;         // fresh device allocation (arena reuse off)
  double codec_time_per_byte = 0.0;   // encode + decode work on the compute lane
  double amp_speedup = 1.0;           // compute speedup in AMP mode

  std::size_t n_blocks() const { return block_forward.size(); }
  double dual_forward_embed() const { return 2.0 * embed_forward; }
  double dual_forward_head() const { return 2.0 * head_forward; }
  double dual_forward_block(std::size_t i) const { return 2.0 * block_forward.at(i); }
  double transfer_time(double bytes) const { return latency + bytes / bandwidth; }

  // Throws std::invalid_argument on negative times or non-positive bandwidth.
  void validate() const;

  // Every block identical. Transfers take `comm` units (bandwidth 1, bytes = comm).
  static CostModel uniform(std::size_t n_blocks, double block_forward, double comm,
                           double embed_forward = 0.0, double head_forward = 0.0);
};

// Device and link characteristics used to turn a model shape into costs.
// Times in seconds.
struct HardwareProfile {
  double flops = 10e12;             // sustained F32 throughput
  double link_bandwidth = 12e9;     // host<->device bytes/s
  double link_latency = 20e-6;
  double alloc_latency = 5e-3;
  double codec_bandwidth = 200e9;   // bytes/s of F32 data through encode+decode
  double amp_speedup = 4.0;
};

// Flop-count costs for `spec` at `batch` x spec.seq_len tokens per step.
CostModel cost_from_hardware(const model::ModelSpec& spec, std::size_t batch, const HardwareProfile& hw);

}  // namespace zo2::scheduler

#endif  // ZO2_SCHEDULER_COST_MODEL_H_
