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

#ifndef ZO2_RUNTIME_OFFLOAD_RUNTIME_H_
#define ZO2_RUNTIME_OFFLOAD_RUNTIME_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zo2/model/params.h"
#include "zo2/numerics/codec.h"
#include "zo2/runtime/device_pool.h"
#include "zo2/runtime/transfer_log.h"

namespace zo2::runtime {

using model::BlockBucket;
using model::ModelParams;
using numerics::ElemFormat;

struct RuntimeOptions {
  std::size_t slots = 3;
  // Off: every upload allocates a fresh block buffer and every offload frees it.
  bool arena_reuse = true;
  // Low-bit host storage and wire format.
  std::optional<ElemFormat> codec;
  std::size_t device_capacity = std::numeric_limits<std::size_t>::max();
  // Channel throttle; 0 bytes/s means unthrottled.
  double bytes_per_sec = 0.0;
  double latency_s = 0.0;
  // Sizes the activation working set reserved on device.
  std::size_t batch_size = 1;
  bool reserve_tied_snapshot = true;
};

enum class SlotState { kFree, kResident };

struct MemoryReport {
  std::size_t device_peak = 0;
  std::size_t device_used = 0;
  std::size_t device_capacity = 0;
  std::size_t host_bytes = 0;
  std::size_t persistent_bytes = 0;
  std::size_t slot_bytes = 0;
  std::size_t slot_peak = 0;
  std::size_t activation_bytes = 0;
  std::size_t tied_snapshot_bytes = 0;
  std::size_t gradient_bytes = 0;  // the scalar g
  std::size_t device_allocations = 0;

  std::string to_json() const;
};

/**
 * Two-tier parameter store.
 *
 * Embedding and head stay on device for the whole run; transformer blocks
 * live in the host pool and visit a ring of K device slots. With a codec the
 * host copy is low-bit and decoded on upload, re-encoded on offload.
 *
 * upload/offload may be called from transfer lanes while the compute lane
 * works on another slot. Per-slot exclusivity is checked, not locked: a
 * violation means the scheduler is broken and raises SchedulingError.
 */
class OffloadRuntime {
 public:
  OffloadRuntime(ModelParams params, RuntimeOptions opts);
  OffloadRuntime(const OffloadRuntime&) = delete;
  OffloadRuntime& operator=(const OffloadRuntime&) = delete;

  const model::ModelSpec& spec() const { return spec_; }
  ElemFormat compute_fmt() const { return compute_fmt_; }
  ElemFormat wire_fmt() const { return opts_.codec.value_or(compute_fmt_); }
  std::size_t n_blocks() const { return host_.size(); }
  std::size_t slot_count() const { return slots_.size(); }
  const RuntimeOptions& options() const { return opts_; }

  BlockBucket& embedding() { return embedding_; }
  BlockBucket& head() { return head_; }
  const BlockBucket& embedding() const { return embedding_; }
  const BlockBucket& head() const { return head_; }

  // Blocks are numbered 1..N, matching module ids.
  TransferRecord upload(std::size_t block, std::size_t slot, std::size_t iteration = 0, int pass = 0);
  TransferRecord offload(std::size_t block, std::size_t slot, std::size_t iteration = 0, int pass = 0);

  // Compute-format bucket currently resident in `slot`.
  BlockBucket& slot_bucket(std::size_t slot);
  SlotState slot_state(std::size_t slot) const;
  std::optional<std::size_t> slot_block(std::size_t slot) const;

  // Applies `fn` to the host copy of a block in compute format. Used by the
  // drain step after training, when no block is resident.
  void update_host_block(std::size_t block, const std::function<void(BlockBucket&)>& fn);
  // Reserves device bytes for the duration of the returned handle.
  DevicePool::Allocation reserve(MemCategory cat, std::size_t bytes) { return pool_.allocate(cat, bytes); }

  // Decoded copy of the full parameter set.
  ModelParams gather() const;
  const BlockBucket& host_block(std::size_t block) const { return host_.at(block - 1); }

  MemoryReport memory_report() const;
  const DevicePool& pool() const { return pool_; }
  TransferLog& log() { return log_; }
  const TransferLog& log() const { return log_; }
  numerics::ConversionSummary codec_summary() const;

  // Modelled channel time for a transfer of `wire_bytes`.
  double transfer_seconds(std::size_t wire_bytes) const;

 private:
  struct Slot {
    BlockBucket bucket;
    DevicePool::Allocation alloc;
    std::atomic<SlotState> state{SlotState::kFree};
    std::atomic<std::size_t> block{0};  // 0: never held a block
  };

  Slot& checked_slot(std::size_t slot);
  void check_block(std::size_t block) const;
  double now() const;
  void throttle(std::chrono::steady_clock::time_point start, std::size_t wire_bytes) const;

  model::ModelSpec spec_;
  RuntimeOptions opts_;
  ElemFormat compute_fmt_;
  DevicePool pool_;
  BlockBucket embedding_;
  BlockBucket head_;
  std::vector<BlockBucket> host_;
  std::vector<std::unique_ptr<Slot>> slots_;
  std::size_t block_bytes_ = 0;
  DevicePool::Allocation persistent_;
  DevicePool::Allocation activations_;
  DevicePool::Allocation tied_snapshot_;
  TransferLog log_;
  mutable std::mutex summary_mu_;
  numerics::ConversionSummary summary_;
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace zo2::runtime

#endif  // ZO2_RUNTIME_OFFLOAD_RUNTIME_H_
