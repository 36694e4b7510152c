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

#ifndef ZO2_SCHEDULER_TIMELINE_H_
#define ZO2_SCHEDULER_TIMELINE_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "zo2/scheduler/task_graph.h"

namespace zo2::scheduler {

struct StreamEvent {
  std::size_t task;
  Lane lane;
  TaskKind kind;
  std::size_t module;
  std::size_t iteration;
  int pass;
  std::string label;
  double t_start;
  double t_end;
};

// One event per task, indexed like the graph's tasks.
struct Timeline {
  std::vector<StreamEvent> events;
  double makespan = 0.0;
  std::string time_unit = "unit";  // "unit" (simulated) or "s" (threaded)
};

struct Violation {
  enum class Kind { kDependency, kLaneOverlap, kLaneOrder, kNegativeDuration };
  Kind kind;
  std::size_t pred;  // task that should have finished first
  std::size_t succ;
  std::string message;
};

// Empty iff every dependency edge and lane FIFO constraint holds: each task
// starts no earlier than each predecessor ends, and tasks on one lane run in
// insertion order without overlapping. Lane pairs already joined by an
// explicit edge are reported once, as a dependency violation.
std::vector<Violation> validate_timeline(const Timeline& tl, const TaskGraph& graph);

// One JSON object per line: lane, block, t_start, t_end plus Chrome-trace
// fields (name, cat, ph, ts, dur, pid, tid) in microseconds.
void write_timeline_jsonl(const Timeline& tl, std::ostream& os);

}  // namespace zo2::scheduler

#endif  // ZO2_SCHEDULER_TIMELINE_H_
