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

#ifndef ZO2_ENGINE_ZO2_ENGINE_H_
#define ZO2_ENGINE_ZO2_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "zo2/engine/rng_state_manager.h"
#include "zo2/model/dataset.h"
#include "zo2/runtime/offload_runtime.h"
#include "zo2/scheduler/cost_model.h"
#include "zo2/scheduler/executor.h"
#include "zo2/scheduler/task_graph.h"
#include "zo2/scheduler/timeline.h"
#include "zo2/zo_ref/mezo.h"

namespace zo2::engine {

struct EngineOptions {
  zo::ZOConfig zo;
  scheduler::UpdateMode update_mode = scheduler::UpdateMode::kDeferred;
  bool overlap = true;
  std::size_t slots = 3;
  bool arena_reuse = true;
  std::optional<numerics::ElemFormat> codec;
  scheduler::Backend backend = scheduler::Backend::kThreaded;
  // Transfer channel throttle; 0 bytes/s is unthrottled.
  double bytes_per_sec = 0.0;
  double latency_s = 0.0;
  std::size_t device_capacity = std::numeric_limits<std::size_t>::max();
  // Task durations for the simulated backend's timeline.
  scheduler::HardwareProfile hardware;
  zo::OpTrace* trace = nullptr;
};

/**
 * Block-wise ZO training.
 *
 * Embedding and head stay on device; blocks are streamed through the offload
 * runtime on three lanes. Each module's update for iteration j is applied
 * inside its dual forward of iteration j + 1, so a block crosses the link
 * once each way per iteration. finalize() drains the last update.
 *
 * In F64 without a codec, T steps plus finalize() produce the same bytes as
 * T reference MeZO steps.
 */
class Zo2Engine {
 public:
  Zo2Engine(model::ModelParams params, EngineOptions opts);

  zo::StepResult step(const model::TokenBatch& batch, std::uint64_t step_index);
  // Applies the pending update, if any, to every module. Idempotent.
  void finalize();

  // Current parameters, decoded to the compute format.
  model::ModelParams params() const { return runtime_.gather(); }
  const runtime::OffloadRuntime& runtime() const { return runtime_; }
  const RngStateManager& rng() const { return mgr_; }
  const PendingGradient& pending() const { return pending_; }
  const EngineOptions& options() const { return opts_; }
  const std::vector<scheduler::Timeline>& timelines() const { return timelines_; }
  const scheduler::TaskGraph& last_graph() const { return graph_; }

 private:
  scheduler::CostModel plan_cost(std::size_t batch) const;

  EngineOptions opts_;
  runtime::OffloadRuntime runtime_;
  RngStateManager mgr_;
  PendingGradient pending_;
  std::optional<numerics::TensorBuf> tied_snapshot_;
  std::size_t visits_ = 0;
  std::vector<scheduler::Timeline> timelines_;
  scheduler::TaskGraph graph_;
};

struct Zo2TrainResult {
  model::ModelParams params;
  std::vector<zo::StepResult> steps;
  std::vector<scheduler::Timeline> timelines;
  runtime::MemoryReport memory;
  std::vector<runtime::TransferRecord> transfers;
};

// cfg.steps engine steps over the same batch sequence as train_ref, then
// finalize().
Zo2TrainResult train_zo2(model::ModelParams params, const model::Dataset& data, const EngineOptions& opts);

}  // namespace zo2::engine

#endif  // ZO2_ENGINE_ZO2_ENGINE_H_
