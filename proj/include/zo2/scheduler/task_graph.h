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

#ifndef ZO2_SCHEDULER_TASK_GRAPH_H_
#define ZO2_SCHEDULER_TASK_GRAPH_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zo2/numerics/elem_format.h"
#include "zo2/scheduler/cost_model.h"

namespace zo2::scheduler {

enum class Lane { kCompute = 0, kUpload = 1, kOffload = 2 };
inline constexpr std::size_t kLaneCount = 3;

std::string_view to_string(Lane lane);

enum class TaskKind { kDualForward, kUpdate, kUpload, kOffload };

enum class UpdateMode { kDeferred, kNaive };

// Identifies one task. module follows ModuleId numbering (0 embedding,
// 1..N blocks, N+1 head). pass 0 is the dual-forward cycle; pass 1 is the
// separate update cycle of the naive update mode.
struct TaskKey {
  Lane lane;
  TaskKind kind;
  std::size_t module;
  std::size_t iteration = 0;
  int pass = 0;

  friend bool operator==(const TaskKey&, const TaskKey&) = default;
};

struct Task {
  TaskKey key;
  double duration = 0.0;
  std::vector<std::size_t> deps;  // predecessor task indices, all smaller than this task's
  std::function<void()> body;     // optional real work
  std::string label;
};

struct Edge {
  std::size_t pred;
  std::size_t succ;
};

/**
 * Dependency DAG over lane tasks.
 *
 * Tasks are stored in insertion order, which must be a topological order;
 * add() rejects forward references. A lane executes its tasks in insertion
 * order, one at a time.
 */
class TaskGraph {
 public:
  std::size_t add(const TaskKey& key, double duration, std::vector<std::size_t> deps = {},
                  std::string label = {});
  void add_dep(std::size_t task, std::size_t pred);
  void set_body(std::size_t task, std::function<void()> body);

  std::size_t size() const { return tasks_.size(); }
  const std::vector<Task>& tasks() const { return tasks_; }
  const Task& task(std::size_t i) const { return tasks_.at(i); }
  Task& task(std::size_t i) { return tasks_.at(i); }

  std::vector<std::size_t> lane_order(Lane lane) const;
  std::vector<Edge> edges() const;
  bool has_edge(std::size_t pred, std::size_t succ) const;
  std::optional<std::size_t> find(const TaskKey& key) const;

  // Copy with an extra edge between every pair of consecutive tasks, forcing
  // fully sequential execution in insertion order.
  TaskGraph serialized() const;

 private:
  std::vector<Task> tasks_;
};

std::string task_label(const TaskKey& key, std::size_t n_blocks);

struct PlanOptions {
  std::size_t iterations = 1;
  bool overlap = true;
  std::size_t slots = 3;
  UpdateMode update_mode = UpdateMode::kDeferred;
  bool arena_reuse = true;
  std::optional<numerics::ElemFormat> codec;  // wire format; nullopt = uncompressed F32
  bool amp = false;                           // divide compute by cost.amp_speedup
};

/**
 * Builds the per-iteration task DAG.
 *
 * Rules, for blocks W_1..W_N:
 *  - C(W_i) after U(W_i) and after the previous compute task;
 *  - O(W_i) after C(W_i) and after O(W_{i-1});
 *  - U(W_{i+1}) after U(W_i);
 *  - U of the v-th block visit after O of visit v - slots, since it reuses
 *    that visit's device slot;
 *  - U of a block after that block's previous O.
 * The embedding has no upload, so C(Embedding) runs alongside U(W_1), and
 * C(LM head) runs alongside O(W_N). Compute tasks chain across iterations.
 * With overlap off the same tasks are fully serialized in insertion order
 * (embedding, then U/C/O per block, then head).
 *
 * Naive update mode appends a second U/C/O cycle per block after the head
 * in which C applies the update; deferred mode fuses the update into the
 * dual-forward task instead.
 */
TaskGraph build_plan(const CostModel& cost, const PlanOptions& options);

}  // namespace zo2::scheduler

#endif  // ZO2_SCHEDULER_TASK_GRAPH_H_
