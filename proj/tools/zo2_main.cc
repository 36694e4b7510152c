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

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zo2/common/errors.h"
#include "zo2/harness/config.h"
#include "zo2/harness/runner.h"
#include "zo2/harness/suites.h"
#include "zo2/model/model_spec.h"
#include "zo2/scheduler/cost_model.h"
#include "zo2/scheduler/throughput.h"

namespace {

using namespace zo2;

// Frequently used keys get named flags; any other config key is accepted as
// --key=value.
const std::vector<std::pair<std::string, std::string>> kFlags = {
    {"engine", "mezo or zo2"},
    {"seed", "base seed"},
    {"steps", "training steps"},
    {"lr", "learning rate"},
    {"eps", "perturbation scale"},
    {"batch-size", "sequences per step"},
    {"update-mode", "deferred or naive"},
    {"backend", "threaded or simulated"},
    {"preset", "OPT preset (opt-1.3b .. opt-175b)"},
    {"overlap", "on or off"},
    {"codec", "none, f16, bf16 or f8"},
    {"arena-slots", "device block slots"},
    {"throttle", "transfer bytes/s (0 = unthrottled)"},
    {"output-dir", "artifact directory (ZO2_OUTPUT_DIR overrides)"},
};

struct Common {
  std::string config_path;
  std::map<std::string, std::string> flags;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
  for (const auto& [name, help] : kFlags) app->add_option("--" + name, c.flags[name], help);
  app->allow_extras();
}

harness::RunConfig build_config(const CLI::App* app, const Common& c) {
  harness::RunConfig cfg;
  if (!c.config_path.empty()) cfg = harness::load_config(c.config_path);
  for (const auto& [name, value] : c.flags) {
    if (app->count("--" + name) > 0) harness::set_key(cfg, name, value);
  }
  harness::apply_overrides(cfg, app->remaining());
  return cfg;
}

int cmd_run(const harness::RunConfig& cfg) {
  const auto r = harness::cli_run(cfg);
  const auto dir = harness::resolve_output_dir(cfg);
  if (r.trained) {
    std::cout << "engine " << r.engine << ": " << cfg.zo.steps << " steps, loss " << r.initial_loss << " -> "
              << r.final_loss << "\n"
              << "digest " << r.digest << "\n"
              << "device peak " << r.device_peak << " B, host " << r.host_bytes << " B, uploads " << r.uploads
              << ", offloads " << r.offloads << ", wire " << r.wire_bytes << " B\n";
  } else {
    std::cout << "preset " << cfg.preset << " (" << r.param_count << " params), engine " << r.engine << "\n";
  }
  std::cout << "predicted " << r.sim_tokens_per_sec << " tokens/s (" << r.sim_tokens_per_sec / r.sim_mezo_tokens_per_sec
            << "x mezo)\n"
            << "artifacts in " << dir << "\n";
  return 0;
}

int cmd_suite(const std::string& name, const harness::RunConfig& cfg) {
  const auto rep = harness::run_suite(name, cfg);
  const auto dir = harness::resolve_output_dir(cfg);
  harness::write_suite(rep, dir);
  std::cout << rep.csv() << '\n' << rep.check_lines();
  return rep.passed() ? 0 : 1;
}

int cmd_sim(const harness::RunConfig& cfg) {
  std::vector<std::string> names;
  if (cfg.preset.empty()) {
    for (const auto& p : model::opt_presets()) names.push_back(p.name);
  } else {
    names.push_back(cfg.preset);
  }
  scheduler::HardwareProfile hw;
  if (cfg.throttle > 0.0) hw.link_bandwidth = cfg.throttle;
  scheduler::PlanOptions po;
  po.overlap = cfg.overlap;
  po.slots = cfg.arena_slots;
  po.update_mode = cfg.update_mode;
  po.arena_reuse = cfg.arena_reuse;
  nlohmann::json out = nlohmann::json::array();
  std::cout << "preset,layers,dim,mezo_tokens_per_sec,zo2_tokens_per_sec,zo2_ratio,zo2_amp_bf16_ratio,zo2_amp_f8_ratio\n";
  for (const auto& name : names) {
    const auto spec = model::find_preset(name);
    const auto cost = scheduler::cost_from_hardware(*spec, cfg.zo.batch_size, hw);
    const std::size_t tokens = cfg.zo.batch_size * spec->seq_len;
    const double mz = scheduler::predict_throughput(tokens, cost, scheduler::EngineMode::kMezo);
    const double z2 = scheduler::predict_throughput(tokens, cost, scheduler::EngineMode::kZo2, po);
    auto amp_po = po;
    amp_po.codec = numerics::ElemFormat::kBF16;
    const double bf = scheduler::predict_throughput(tokens, cost, scheduler::EngineMode::kZo2Amp, amp_po);
    amp_po.codec = numerics::ElemFormat::kF8E4M3;
    const double f8 = scheduler::predict_throughput(tokens, cost, scheduler::EngineMode::kZo2Amp, amp_po);
    std::cout << name << ',' << spec->n_blocks << ',' << spec->dim << ',' << mz << ',' << z2 << ',' << z2 / mz << ','
              << bf / mz << ',' << f8 / mz << '\n';
    out.push_back({{"preset", name}, {"n_blocks", spec->n_blocks}, {"dim", spec->dim},
                   {"mezo_tokens_per_sec", mz}, {"zo2_tokens_per_sec", z2}, {"zo2_ratio", z2 / mz},
                   {"zo2_amp_bf16_ratio", bf / mz}, {"zo2_amp_f8_ratio", f8 / mz}});
  }
  const std::filesystem::path dir = harness::resolve_output_dir(cfg);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "sim.json") << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ZO2: zeroth-order training with block offloading"};
  app.require_subcommand(1);

  Common run_opts, suite_opts, sim_opts;
  auto* run = app.add_subcommand("run", "train one configuration and write metrics and traces");
  add_common(run, run_opts);

  std::string suite_name;
  auto* suite = app.add_subcommand("suite", "run an experiment suite");
  suite->add_option("name", suite_name, "equivalence, ablation, amp, memory-scaling or sweep")->required();
  add_common(suite, suite_opts);

  auto* sim = app.add_subcommand("sim", "predict steady-state throughput for OPT presets");
  add_common(sim, sim_opts);

  auto* keys = app.add_subcommand("keys", "list config keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(build_config(run, run_opts));
    if (*suite) return cmd_suite(suite_name, build_config(suite, suite_opts));
    if (*sim) return cmd_sim(build_config(sim, sim_opts));
    if (*keys) {
      for (const auto& [k, help] : harness::config_keys()) std::cout << k << "\t" << help << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
