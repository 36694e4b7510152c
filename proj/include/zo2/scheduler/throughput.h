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

#ifndef ZO2_SCHEDULER_THROUGHPUT_H_
#define ZO2_SCHEDULER_THROUGHPUT_H_

#include <cstddef>
#include <string_view>

#include "zo2/scheduler/task_graph.h"

namespace zo2::scheduler {

enum class EngineMode { kMezo, kZo2, kZo2Amp };

std::string_view to_string(EngineMode mode);

// Steady-state time per iteration, in the cost model's time unit.
//  - kMezo: everything resident, compute only (dual forwards + updates).
//  - kZo2: the pipelined plan from `options`, measured as the per-iteration
//    increment of the simulated makespan once the pipeline is warm.
//  - kZo2Amp: as kZo2 with options.amp forced on (compute / amp_speedup);
//    options.codec sets the wire format.
double iteration_time(const CostModel& cost, EngineMode mode, const PlanOptions& options = {});

// tokens_per_iteration / iteration_time.
double predict_throughput(std::size_t tokens_per_iteration, const CostModel& cost, EngineMode mode,
                          const PlanOptions& options = {});

}  // namespace zo2::scheduler

#endif  // ZO2_SCHEDULER_THROUGHPUT_H_
