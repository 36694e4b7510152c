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

#ifndef ZO2_HARNESS_RUNNER_H_
#define ZO2_HARNESS_RUNNER_H_

#include <cstddef>
#include <string>
#include <vector>

#include "zo2/harness/config.h"
#include "zo2/runtime/transfer_log.h"
#include "zo2/scheduler/timeline.h"

namespace zo2::harness {

struct MetricsReport {
  std::string engine;
  bool trained = true;  // false for a preset-only throughput prediction
  std::vector<zo::StepResult> steps;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::string digest;
  std::size_t param_count = 0;
  std::size_t device_peak = 0;
  std::size_t host_bytes = 0;
  std::size_t uploads = 0;
  std::size_t offloads = 0;
  std::size_t wire_bytes = 0;
  // Transfers of one block in one iteration, each direction; 0 for mezo.
  double transfers_per_block_iter = 0.0;
  // Steady-state prediction from the cost model, same-host ratio to mezo.
  std::size_t tokens_per_step = 0;
  double sim_iteration_time = 0.0;
  double sim_tokens_per_sec = 0.0;
  double sim_mezo_tokens_per_sec = 0.0;
  // Wall clock; excluded from reproducibility comparisons.
  double wall_seconds = 0.0;
  double tokens_per_sec_with_warmup = 0.0;
  double tokens_per_sec_after_warmup = 0.0;
  double timeline_makespan = 0.0;

  // Deterministic fields at the top level, wall-clock ones under "wall".
  std::string to_json() const;
};

struct RunArtifacts {
  std::vector<scheduler::Timeline> timelines;
  std::vector<runtime::TransferRecord> transfers;
};

// Runs the configured experiment in memory.
MetricsReport run_experiment(const RunConfig& cfg, RunArtifacts* artifacts = nullptr);

// ZO2_OUTPUT_DIR, when set, wins over cfg.output_dir.
std::string resolve_output_dir(const RunConfig& cfg);

// run_experiment plus metrics.json, timeline.jsonl, transfers.jsonl and a
// row appended to summary.csv in the output directory.
MetricsReport cli_run(const RunConfig& cfg);

// summary.csv columns, in file order.
const std::vector<std::string>& summary_columns();
std::string summary_row(const RunConfig& cfg, const MetricsReport& r);

// Timelines of consecutive steps laid end to end.
scheduler::Timeline concat_timelines(const std::vector<scheduler::Timeline>& parts);

}  // namespace zo2::harness

#endif  // ZO2_HARNESS_RUNNER_H_
