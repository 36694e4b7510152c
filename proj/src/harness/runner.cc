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

#include "zo2/harness/runner.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "zo2/common/errors.h"
#include "zo2/engine/zo2_engine.h"
#include "zo2/harness/digest.h"
#include "zo2/harness/synthetic.h"
#include "zo2/model/forward.h"
#include "zo2/scheduler/throughput.h"

namespace zo2::harness {

namespace {

using Clock = std::chrono::steady_clock;

scheduler::PlanOptions plan_options(const RunConfig& cfg) {
  scheduler::PlanOptions po;
  po.overlap = cfg.overlap;
  po.slots = cfg.arena_slots;
  po.update_mode = cfg.update_mode;
  po.arena_reuse = cfg.arena_reuse;
  po.codec = cfg.codec;
  return po;
}

scheduler::HardwareProfile hardware(const RunConfig& cfg) {
  scheduler::HardwareProfile hw;
  if (cfg.throttle > 0.0) hw.link_bandwidth = cfg.throttle;
  if (cfg.latency > 0.0) hw.link_latency = cfg.latency;
  return hw;
}

void predict(const RunConfig& cfg, const model::ModelSpec& spec, MetricsReport& r) {
  const auto cost = scheduler::cost_from_hardware(spec, cfg.zo.batch_size, hardware(cfg));
  r.tokens_per_step = cfg.zo.batch_size * spec.seq_len;
  const auto mode = cfg.engine == EngineKind::kMezo
                        ? scheduler::EngineMode::kMezo
                        : (cfg.codec ? scheduler::EngineMode::kZo2Amp : scheduler::EngineMode::kZo2);
  r.sim_iteration_time = scheduler::iteration_time(cost, mode, plan_options(cfg));
  r.sim_tokens_per_sec = static_cast<double>(r.tokens_per_step) / r.sim_iteration_time;
  r.sim_mezo_tokens_per_sec = scheduler::predict_throughput(r.tokens_per_step, cost, scheduler::EngineMode::kMezo);
}

void wall_rates(const std::vector<double>& step_seconds, std::size_t tokens, MetricsReport& r) {
  double total = 0.0;
  for (double s : step_seconds) total += s;
  if (total > 0.0) r.tokens_per_sec_with_warmup = static_cast<double>(tokens * step_seconds.size()) / total;
  if (step_seconds.size() > 1) {
    double rest = total - step_seconds.front();
    if (rest > 0.0) r.tokens_per_sec_after_warmup = static_cast<double>(tokens * (step_seconds.size() - 1)) / rest;
  }
}

}  // namespace

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  j["engine"] = engine;
  j["trained"] = trained;
  nlohmann::json steps_j = nlohmann::json::array();
  for (const auto& s : steps) steps_j.push_back({{"loss_plus", s.loss_plus}, {"loss_minus", s.loss_minus}, {"g", s.g}});
  j["steps"] = steps_j;
  j["initial_loss"] = initial_loss;
  j["final_loss"] = final_loss;
  j["digest"] = digest;
  j["param_count"] = param_count;
  j["device_peak_bytes"] = device_peak;
  j["host_bytes"] = host_bytes;
  j["uploads"] = uploads;
  j["offloads"] = offloads;
  j["wire_bytes"] = wire_bytes;
  j["transfers_per_block_iteration"] = transfers_per_block_iter;
  j["tokens_per_step"] = tokens_per_step;
  j["sim_iteration_time_s"] = sim_iteration_time;
  j["sim_tokens_per_sec"] = sim_tokens_per_sec;
  j["sim_mezo_tokens_per_sec"] = sim_mezo_tokens_per_sec;
  j["sim_ratio_to_mezo"] = sim_mezo_tokens_per_sec > 0.0 ? sim_tokens_per_sec / sim_mezo_tokens_per_sec : 0.0;
  j["wall"] = {{"seconds", wall_seconds},
               {"tokens_per_sec_including_first_step", tokens_per_sec_with_warmup},
               {"tokens_per_sec_excluding_first_step", tokens_per_sec_after_warmup},
               {"timeline_makespan", timeline_makespan}};
  return j.dump(2);
}

MetricsReport run_experiment(const RunConfig& cfg, RunArtifacts* artifacts) {
  MetricsReport r;
  r.engine = std::string(to_string(cfg.engine));

  if (!cfg.preset.empty()) {
    const auto spec = model::find_preset(cfg.preset);
    if (!spec) throw ConfigError("preset", "unknown preset '" + cfg.preset + "'");
    if (cfg.backend != scheduler::Backend::kSimulated) {
      throw ConfigError("preset", "presets are only simulated: set backend = simulated");
    }
    r.trained = false;
    r.param_count = model::analytic_param_count(*spec);
    predict(cfg, *spec, r);
    // Analytic F32 footprint; nothing is allocated.
    const std::size_t bytes = numerics::bytes_per_elem(numerics::ElemFormat::kF32);
    const std::size_t block = model::block_param_count(*spec) * bytes;
    const std::size_t wire = cfg.codec ? numerics::bytes_per_elem(*cfg.codec) : bytes;
    r.host_bytes = spec->n_blocks * model::block_param_count(*spec) * wire;
    if (cfg.engine == EngineKind::kMezo) {
      r.device_peak = r.param_count * bytes;
    } else {
      r.device_peak = (model::embedding_param_count(*spec) + model::head_param_count(*spec)) * bytes +
                      (spec->n_blocks == 0 ? 0 : cfg.arena_slots) * block;
      if (spec->tie_embeddings) r.device_peak += spec->vocab * spec->dim * bytes;
    }
    r.device_peak += model::activation_working_set_bytes(*spec, cfg.zo.batch_size, numerics::ElemFormat::kF32);
    return r;
  }

  validate(cfg);
  const auto data = gen_synthetic(cfg.model.vocab, cfg.model.seq_len, cfg.data_samples,
                                  {cfg.data_seed, numerics::streams::kData, 0}, cfg.data_mult, cfg.data_add);
  auto params = model::init_params(cfg.model, {cfg.init_seed, numerics::streams::kInit, 0}, cfg.dtype);
  r.param_count = params.param_count();
  r.initial_loss = dataset_loss(params, data);
  predict(cfg, cfg.model, r);

  std::vector<double> step_seconds;
  step_seconds.reserve(cfg.zo.steps);
  const auto t0 = Clock::now();
  model::ModelParams final_params;
  if (cfg.engine == EngineKind::kMezo) {
    for (std::size_t j = 0; j < cfg.zo.steps; ++j) {
      const auto batch = model::sample_batch(data, cfg.zo.seed, j, cfg.zo.batch_size);
      const auto ts = Clock::now();
      r.steps.push_back(zo::mezo_step(params, batch, cfg.zo, j));
      step_seconds.push_back(std::chrono::duration<double>(Clock::now() - ts).count());
    }
    r.device_peak = params.param_count() * numerics::bytes_per_elem(cfg.dtype) +
                    model::activation_working_set_bytes(cfg.model, cfg.zo.batch_size, cfg.dtype);
    final_params = std::move(params);
  } else {
    engine::EngineOptions o;
    o.zo = cfg.zo;
    o.update_mode = cfg.update_mode;
    o.overlap = cfg.overlap;
    o.slots = cfg.arena_slots;
    o.arena_reuse = cfg.arena_reuse;
    o.codec = cfg.codec;
    o.backend = cfg.backend;
    o.bytes_per_sec = cfg.throttle;
    o.latency_s = cfg.latency;
    o.hardware = hardware(cfg);
    engine::Zo2Engine eng(std::move(params), o);
    for (std::size_t j = 0; j < cfg.zo.steps; ++j) {
      const auto batch = model::sample_batch(data, cfg.zo.seed, j, cfg.zo.batch_size);
      const auto ts = Clock::now();
      r.steps.push_back(eng.step(batch, j));
      step_seconds.push_back(std::chrono::duration<double>(Clock::now() - ts).count());
    }
    eng.finalize();
    final_params = eng.params();
    const auto mem = eng.runtime().memory_report();
    const auto& log = eng.runtime().log();
    r.device_peak = mem.device_peak;
    r.host_bytes = mem.host_bytes;
    r.uploads = log.count(runtime::Direction::kUpload, std::nullopt, std::nullopt);
    r.offloads = log.count(runtime::Direction::kOffload, std::nullopt, std::nullopt);
    r.wire_bytes = log.wire_bytes();
    if (cfg.model.n_blocks > 0) {
      r.transfers_per_block_iter =
          static_cast<double>(r.uploads) / static_cast<double>(cfg.model.n_blocks * cfg.zo.steps);
    }
    for (const auto& tl : eng.timelines()) r.timeline_makespan += tl.makespan;
    if (artifacts) {
      artifacts->timelines = eng.timelines();
      artifacts->transfers = log.records();
    }
  }
  r.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  wall_rates(step_seconds, cfg.zo.batch_size * cfg.model.seq_len, r);
  r.final_loss = dataset_loss(final_params, data);
  r.digest = params_digest(final_params);
  return r;
}

std::string resolve_output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("ZO2_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

scheduler::Timeline concat_timelines(const std::vector<scheduler::Timeline>& parts) {
  scheduler::Timeline out;
  double offset = 0.0;
  for (const auto& tl : parts) {
    out.time_unit = tl.time_unit;
    for (auto e : tl.events) {
      e.t_start += offset;
      e.t_end += offset;
      out.events.push_back(std::move(e));
    }
    offset += tl.makespan;
  }
  out.makespan = offset;
  return out;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols = {
      "engine",      "backend",        "overlap",     "arena_slots",  "arena_reuse",       "codec",
      "update_mode", "n_blocks",       "dim",         "dtype",        "steps",             "seed",
      "batch_size",  "initial_loss",   "final_loss",  "digest",       "device_peak_bytes", "host_bytes",
      "uploads",     "offloads",       "wire_bytes",  "sim_tokens_per_sec", "sim_ratio_to_mezo"};
  return cols;
}

std::string summary_row(const RunConfig& c, const MetricsReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << r.engine << ',' << (c.backend == scheduler::Backend::kThreaded ? "threaded" : "simulated") << ','
     << (c.overlap ? "on" : "off") << ',' << c.arena_slots << ',' << (c.arena_reuse ? "on" : "off") << ','
     << (c.codec ? std::string(numerics::to_string(*c.codec)) : "none") << ','
     << (c.update_mode == scheduler::UpdateMode::kDeferred ? "deferred" : "naive") << ',' << c.model.n_blocks << ','
     << c.model.dim << ',' << numerics::to_string(c.dtype) << ',' << c.zo.steps << ',' << c.zo.seed << ','
     << c.zo.batch_size << ',' << r.initial_loss << ',' << r.final_loss << ',' << r.digest << ',' << r.device_peak
     << ',' << r.host_bytes << ',' << r.uploads << ',' << r.offloads << ',' << r.wire_bytes << ','
     << r.sim_tokens_per_sec << ','
     << (r.sim_mezo_tokens_per_sec > 0.0 ? r.sim_tokens_per_sec / r.sim_mezo_tokens_per_sec : 0.0);
  return os.str();
}

MetricsReport cli_run(const RunConfig& cfg) {
  RunArtifacts art;
  MetricsReport r = run_experiment(cfg, &art);
  const std::filesystem::path dir = resolve_output_dir(cfg);
  std::filesystem::create_directories(dir);

  std::ofstream(dir / "metrics.json") << r.to_json() << '\n';
  std::ofstream(dir / "config.txt") << to_text(cfg);
  {
    std::ofstream tl(dir / "timeline.jsonl");
    scheduler::write_timeline_jsonl(concat_timelines(art.timelines), tl);
  }
  {
    std::ofstream tr(dir / "transfers.jsonl");
    runtime::TransferLog log;
    for (const auto& t : art.transfers) log.append(t);
    log.write_jsonl(tr);
  }
  const auto csv = dir / "summary.csv";
  const bool fresh = !std::filesystem::exists(csv) || std::filesystem::file_size(csv) == 0;
  std::ofstream out(csv, std::ios::app);
  if (fresh) {
    const auto& cols = summary_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
  }
  out << summary_row(cfg, r) << '\n';
  return r;
}

}  // namespace zo2::harness
