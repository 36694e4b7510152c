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

#include "zo2/scheduler/throughput.h"

#include "zo2/scheduler/executor.h"

namespace zo2::scheduler {

namespace {

constexpr std::size_t kWarmIterations = 4;
constexpr std::size_t kMeasuredIterations = 4;

double plan_makespan(const CostModel& cost, PlanOptions opt, std::size_t iterations) {
  opt.iterations = iterations;
  return simulate(build_plan(cost, opt)).makespan;
}

}  // namespace

std::string_view to_string(EngineMode mode) {
  switch (mode) {
    case EngineMode::kMezo:
      return "mezo";
    case EngineMode::kZo2:
      return "zo2";
    case EngineMode::kZo2Amp:
      return "zo2-amp";
  }
  return "unknown";
}

double iteration_time(const CostModel& cost, EngineMode mode, const PlanOptions& options) {
  cost.validate();
  if (mode == EngineMode::kMezo) {
    double t = cost.dual_forward_embed() + cost.dual_forward_head();
    for (std::size_t i = 0; i < cost.n_blocks(); ++i) t += cost.dual_forward_block(i) + cost.update_time;
    return t;
  }
  PlanOptions opt = options;
  if (mode == EngineMode::kZo2Amp) opt.amp = true;
  const double warm = plan_makespan(cost, opt, kWarmIterations);
  const double full = plan_makespan(cost, opt, kWarmIterations + kMeasuredIterations);
  return (full - warm) / static_cast<double>(kMeasuredIterations);
}

double predict_throughput(std::size_t tokens_per_iteration, const CostModel& cost, EngineMode mode,
                          const PlanOptions& options) {
  return static_cast<double>(tokens_per_iteration) / iteration_time(cost, mode, options);
}

}  // namespace zo2::scheduler
