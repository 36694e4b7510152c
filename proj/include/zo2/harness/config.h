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

#ifndef ZO2_HARNESS_CONFIG_H_
#define ZO2_HARNESS_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zo2/model/model_spec.h"
#include "zo2/numerics/elem_format.h"
#include "zo2/scheduler/executor.h"
#include "zo2/scheduler/task_graph.h"
#include "zo2/zo_ref/mezo.h"

namespace zo2::harness {

enum class EngineKind { kMezo, kZo2 };

std::string_view to_string(EngineKind e);

struct RunConfig {
  model::ModelSpec model;
  numerics::ElemFormat dtype = numerics::ElemFormat::kF64;
  zo::ZOConfig zo;
  EngineKind engine = EngineKind::kZo2;
  bool overlap = true;
  std::size_t arena_slots = 3;
  bool arena_reuse = true;
  std::optional<numerics::ElemFormat> codec;
  scheduler::UpdateMode update_mode = scheduler::UpdateMode::kDeferred;
  scheduler::Backend backend = scheduler::Backend::kThreaded;
  double throttle = 0.0;  // bytes/s, 0 = unthrottled
  double latency = 0.0;   // seconds per transfer
  std::string output_dir = "zo2_out";
  // OPT preset name. With the simulated backend, `run` predicts throughput
  // for the preset's shape instead of training.
  std::string preset;
  std::size_t data_samples = 64;
  std::uint64_t data_seed = 0;
  std::size_t data_mult = 1;  // next = (mult * prev + add) mod vocab
  std::size_t data_add = 1;
  std::uint64_t init_seed = 0;
};

// Every accepted key with a one-line description, in canonical order.
const std::vector<std::pair<std::string, std::string>>& config_keys();

// Sets one key. Flag spellings (dashes, short aliases like "seed" or
// "steps") are normalized first. Throws ConfigError naming the key for an
// unknown key or an unparsable value.
void set_key(RunConfig& cfg, std::string_view key, std::string_view value);

// key = value lines; "[section]" headers prefix later keys with "section.";
// '#' starts a comment.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// "--key=value" or "--key value" pairs.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& args);

// Consistency checks across keys; throws ConfigError.
void validate(const RunConfig& cfg);

// Canonical key = value dump; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& cfg);

}  // namespace zo2::harness

#endif  // ZO2_HARNESS_CONFIG_H_
