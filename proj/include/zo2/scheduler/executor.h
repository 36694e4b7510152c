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

#ifndef ZO2_SCHEDULER_EXECUTOR_H_
#define ZO2_SCHEDULER_EXECUTOR_H_

#include "zo2/scheduler/task_graph.h"
#include "zo2/scheduler/timeline.h"

namespace zo2::scheduler {

enum class Backend { kThreaded, kSimulated };

struct ExecOptions {
  // Threaded backend only: wall seconds per duration unit. Each task takes at
  // least duration * time_scale (the body's own time counts toward it);
  // 0 runs bodies as fast as they go.
  double time_scale = 0.0;
  // When false, the validator runs after execution and any violation throws
  // SchedulingError.
  bool skip_validation = false;
};

/**
 * Executes (or simulates) a task graph.
 *
 * Simulated: list scheduling in abstract time. A task starts at the later of
 * its predecessors' end and its lane's previous task's end; this is the
 * longest path through the graph plus lane-order edges. Bodies, if any, run on
 * the calling thread in (start, index) order, which respects every edge.
 *
 * Threaded: one worker per lane runs that lane's tasks in insertion order,
 * blocking on one-shot completion events of the predecessors. Times are from
 * a monotonic clock in seconds since launch. The first exception thrown by a
 * body is rethrown after all lanes drain; dependants of a failed task are
 * skipped.
 */
Timeline run_schedule(TaskGraph& graph, Backend backend, const ExecOptions& options = {});

// run_schedule on the fully serialized graph.
Timeline run_sequential(TaskGraph& graph, Backend backend, const ExecOptions& options = {});

// Simulated start/end times without running bodies.
Timeline simulate(const TaskGraph& graph);

}  // namespace zo2::scheduler

#endif  // ZO2_SCHEDULER_EXECUTOR_H_
