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

#include "zo2/scheduler/task_graph.h"

#include <algorithm>
#include <stdexcept>

namespace zo2::scheduler {

std::string_view to_string(Lane lane) {
  switch (lane) {
    case Lane::kCompute:
      return "compute";
    case Lane::kUpload:
      return "upload";
    case Lane::kOffload:
      return "offload";
  }
  return "unknown";
}

std::size_t TaskGraph::add(const TaskKey& key, double duration, std::vector<std::size_t> deps,
                           std::string label) {
  const std::size_t id = tasks_.size();
  for (std::size_t d : deps) {
    if (d >= id) throw std::invalid_argument("TaskGraph::add: dependency must precede the task");
  }
  if (!(duration >= 0.0)) throw std::invalid_argument("TaskGraph::add: negative duration");
  std::sort(deps.begin(), deps.end());
  deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
  tasks_.push_back({key, duration, std::move(deps), {}, std::move(label)});
  return id;
}

void TaskGraph::add_dep(std::size_t task, std::size_t pred) {
  if (pred >= task || task >= tasks_.size()) {
    throw std::invalid_argument("TaskGraph::add_dep: dependency must precede the task");
  }
  auto& deps = tasks_[task].deps;
  if (std::find(deps.begin(), deps.end(), pred) == deps.end()) {
    deps.push_back(pred);
    std::sort(deps.begin(), deps.end());
  }
}

void TaskGraph::set_body(std::size_t task, std::function<void()> body) { tasks_.at(task).body = std::move(body); }

std::vector<std::size_t> TaskGraph::lane_order(Lane lane) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].key.lane == lane) out.push_back(i);
  }
  return out;
}

std::vector<Edge> TaskGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    for (std::size_t d : tasks_[i].deps) out.push_back({d, i});
  }
  return out;
}

bool TaskGraph::has_edge(std::size_t pred, std::size_t succ) const {
  const auto& deps = tasks_.at(succ).deps;
  return std::binary_search(deps.begin(), deps.end(), pred);
}

std::optional<std::size_t> TaskGraph::find(const TaskKey& key) const {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].key == key) return i;
  }
  return std::nullopt;
}

TaskGraph TaskGraph::serialized() const {
  TaskGraph out = *this;
  for (std::size_t i = 1; i < out.tasks_.size(); ++i) out.add_dep(i, i - 1);
  return out;
}

std::string task_label(const TaskKey& key, std::size_t n_blocks) {
  std::string op;
  switch (key.kind) {
    case TaskKind::kDualForward:
      op = "C";
      break;
    case TaskKind::kUpdate:
      op = "Upd";
      break;
    case TaskKind::kUpload:
      op = "U";
      break;
    case TaskKind::kOffload:
      op = "O";
      break;
  }
  std::string target;
  if (key.module == 0) {
    target = "Embedding";
  } else if (key.module == n_blocks + 1) {
    target = "LM head";
  } else {
    target = "W" + std::to_string(key.module);
  }
  std::string label = op + "(" + target + ")";
  if (key.pass == 1 && key.kind != TaskKind::kUpdate) label += "'";
  if (key.iteration > 0) label += "@" + std::to_string(key.iteration);
  return label;
}

TaskGraph build_plan(const CostModel& cost, const PlanOptions& opt) {
  cost.validate();
  if (opt.slots < 1) throw std::invalid_argument("build_plan: need at least one slot");
  if (opt.overlap && opt.slots < 2) {
    throw std::invalid_argument("build_plan: a single slot requires overlap to be disabled");
  }
  const std::size_t n = cost.n_blocks();
  const double compute_scale = opt.amp ? 1.0 / cost.amp_speedup : 1.0;
  const double wire_ratio =
      opt.codec ? static_cast<double>(numerics::bytes_per_elem(*opt.codec)) / 4.0 : 1.0;

  TaskGraph g;
  std::optional<std::size_t> prev_compute, prev_upload, prev_offload;
  std::vector<std::size_t> visit_offloads;  // O task of every block visit so far
  std::vector<std::optional<std::size_t>> last_offload(n + 1);

  auto add_task = [&](TaskKey key, double duration, std::vector<std::size_t> deps) {
    return g.add(key, duration, std::move(deps), task_label(key, n));
  };
  auto with = [](std::optional<std::size_t> a, std::vector<std::size_t> rest = {}) {
    if (a) rest.push_back(*a);
    return rest;
  };

  // One U/C/O cycle for block i (1-based).
  auto block_cycle = [&](std::size_t iter, int pass, std::size_t i, TaskKind compute_kind, double compute_time) {
    const double codec_cost = opt.codec ? cost.codec_time_per_byte * cost.block_bytes[i - 1] : 0.0;
    const double wire = cost.block_bytes[i - 1] * wire_ratio;
    const double alloc = opt.arena_reuse ? 0.0 : cost.alloc_latency;

    std::vector<std::size_t> up_deps = with(prev_upload);
    const std::size_t visit = visit_offloads.size();
    if (visit >= opt.slots) up_deps.push_back(visit_offloads[visit - opt.slots]);
    // Host copy must be written back before it is read again (matters when N < K).
    if (last_offload[i]) up_deps.push_back(*last_offload[i]);
    const std::size_t u =
        add_task({Lane::kUpload, TaskKind::kUpload, i, iter, pass}, cost.transfer_time(wire) + alloc, up_deps);
    prev_upload = u;

    const std::size_t c = add_task({Lane::kCompute, compute_kind, i, iter, pass},
                                   compute_time * compute_scale + codec_cost, with(prev_compute, {u}));
    prev_compute = c;

    const std::size_t o =
        add_task({Lane::kOffload, TaskKind::kOffload, i, iter, pass}, cost.transfer_time(wire), with(prev_offload, {c}));
    prev_offload = o;
    visit_offloads.push_back(o);
    last_offload[i] = o;
  };

  const bool deferred = opt.update_mode == UpdateMode::kDeferred;
  for (std::size_t iter = 0; iter < opt.iterations; ++iter) {
    prev_compute = add_task({Lane::kCompute, TaskKind::kDualForward, 0, iter, 0},
                            cost.dual_forward_embed() * compute_scale, with(prev_compute));
    for (std::size_t i = 1; i <= n; ++i) {
      const double t = cost.dual_forward_block(i - 1) + (deferred ? cost.update_time : 0.0);
      block_cycle(iter, 0, i, TaskKind::kDualForward, t);
    }
    prev_compute = add_task({Lane::kCompute, TaskKind::kDualForward, n + 1, iter, 0},
                            cost.dual_forward_head() * compute_scale, with(prev_compute));
    if (!deferred) {
      for (std::size_t i = 1; i <= n; ++i) block_cycle(iter, 1, i, TaskKind::kUpdate, cost.update_time);
    }
  }
  return opt.overlap ? g : g.serialized();
}

}  // namespace zo2::scheduler
