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

#include "zo2/harness/suites.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "zo2/common/errors.h"
#include "zo2/harness/runner.h"
#include "zo2/model/forward.h"
#include "zo2/scheduler/throughput.h"

namespace zo2::harness {

namespace {

using scheduler::CostModel;
using scheduler::EngineMode;
using scheduler::PlanOptions;

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

std::string codec_name(const std::optional<numerics::ElemFormat>& c) {
  return c ? std::string(numerics::to_string(*c)) : "none";
}

void check(SuiteReport& r, std::string name, bool ok, std::string detail) {
  r.checks.push_back({std::move(name), ok, std::move(detail)});
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); }

// Per-block transfer takes 0.8x the block's dual forward.
CostModel comm_significant(std::size_t n_blocks) {
  CostModel c = CostModel::uniform(n_blocks, 1.0, 1.6, 0.25, 0.5);
  c.update_time = 0.05;
  c.alloc_latency = 1.0;
  c.codec_time_per_byte = 0.0;
  return c;
}

SuiteReport equivalence(const RunConfig& base) {
  SuiteReport r{"equivalence", {"label", "engine", "backend", "overlap", "arena_slots", "update_mode", "codec",
                                "dtype", "final_loss", "digest"}, {}, {}};
  RunConfig ref = base;
  ref.engine = EngineKind::kMezo;
  const auto mezo = run_experiment(ref);
  auto add_row = [&](const std::string& label, const RunConfig& c, const MetricsReport& m) {
    r.rows.push_back({label, std::string(to_string(c.engine)),
                      c.backend == scheduler::Backend::kThreaded ? "threaded" : "simulated",
                      c.overlap ? "on" : "off", std::to_string(c.arena_slots),
                      c.update_mode == scheduler::UpdateMode::kDeferred ? "deferred" : "naive", codec_name(c.codec),
                      std::string(numerics::to_string(c.dtype)), num(m.final_loss), m.digest});
  };
  add_row("mezo", ref, mezo);

  struct Variant {
    std::string label;
    std::function<void(RunConfig&)> tweak;
  };
  const std::vector<Variant> exact = {
      {"zo2", [](RunConfig&) {}},
      {"zo2-no-overlap", [](RunConfig& c) { c.overlap = false; }},
      {"zo2-simulated", [](RunConfig& c) { c.backend = scheduler::Backend::kSimulated; }},
      {"zo2-k4", [](RunConfig& c) { c.arena_slots = 4; }},
      {"zo2-no-arena-reuse", [](RunConfig& c) { c.arena_reuse = false; }},
      {"zo2-naive-update", [](RunConfig& c) { c.update_mode = scheduler::UpdateMode::kNaive; }},
  };
  for (const auto& v : exact) {
    RunConfig c = base;
    c.engine = EngineKind::kZo2;
    v.tweak(c);
    const auto m = run_experiment(c);
    add_row(v.label, c, m);
    check(r, v.label + " digest equals mezo", m.digest == mezo.digest, m.digest.substr(0, 16));
  }
  for (auto fmt : {numerics::ElemFormat::kBF16, numerics::ElemFormat::kF8E4M3}) {
    RunConfig c = base;
    c.engine = EngineKind::kZo2;
    c.codec = fmt;
    const auto m = run_experiment(c);
    const std::string label = "zo2-" + codec_name(fmt);
    add_row(label, c, m);
    const double d = rel_diff(mezo.final_loss, m.final_loss);
    check(r, label + " final loss within 5% of mezo", d <= 0.05, "relative difference " + num(d));
  }
  return r;
}

SuiteReport ablation(const RunConfig&) {
  SuiteReport r{"ablation", {"variant", "iteration_time", "throughput_ratio_to_mezo"}, {}, {}};
  const CostModel cost = comm_significant(8);
  const double mezo = scheduler::iteration_time(cost, EngineMode::kMezo);
  auto row = [&](const std::string& name, PlanOptions po) {
    const double t = scheduler::iteration_time(cost, EngineMode::kZo2, po);
    r.rows.push_back({name, num(t), num(mezo / t)});
    return mezo / t;
  };
  PlanOptions full;
  PlanOptions naive;
  naive.update_mode = scheduler::UpdateMode::kNaive;
  PlanOptions serial;
  serial.overlap = false;
  PlanOptions fresh;
  fresh.arena_reuse = false;
  r.rows.push_back({"mezo", num(mezo), "1"});
  const double a = row("full", full);
  const double b = row("no-deferred-update", naive);
  const double c = row("no-overlap", serial);
  const double d = row("no-arena-reuse", fresh);
  check(r, "full > no-deferred-update", a > b, num(a) + " vs " + num(b));
  check(r, "no-deferred-update > no-overlap", b > c, num(b) + " vs " + num(c));
  check(r, "full > no-arena-reuse", a > d, num(a) + " vs " + num(d));
  return r;
}

SuiteReport amp(const RunConfig& base) {
  SuiteReport r{"amp", {"codec", "wire_bytes", "wire_ratio", "final_loss", "loss_rel_diff_to_mezo",
                        "sim_ratio_comm_bound", "sim_ratio_compute_bound"}, {}, {}};
  RunConfig ref = base;
  ref.engine = EngineKind::kMezo;
  ref.dtype = numerics::ElemFormat::kF32;
  const auto mezo = run_experiment(ref);

  // Comm-bound: transfers 3x the dual forward; compute-bound: 0.25x.
  const CostModel comm_bound = CostModel::uniform(8, 1.0, 6.0, 0.25, 0.5);
  const CostModel compute_bound = CostModel::uniform(8, 1.0, 0.5, 0.25, 0.5);
  const double mezo_cb = scheduler::iteration_time(comm_bound, EngineMode::kMezo);
  const double mezo_pb = scheduler::iteration_time(compute_bound, EngineMode::kMezo);

  std::size_t none_bytes = 0;
  double none_pb = 0.0;
  std::vector<double> comm_ratio;
  const std::vector<std::optional<numerics::ElemFormat>> codecs = {
      std::nullopt, numerics::ElemFormat::kF16, numerics::ElemFormat::kBF16, numerics::ElemFormat::kF8E4M3};
  for (const auto& codec : codecs) {
    RunConfig c = base;
    c.engine = EngineKind::kZo2;
    c.dtype = numerics::ElemFormat::kF32;
    c.codec = codec;
    const auto m = run_experiment(c);
    PlanOptions po;
    po.codec = codec;
    const double cb = mezo_cb / scheduler::iteration_time(comm_bound, EngineMode::kZo2, po);
    const double pb = mezo_pb / scheduler::iteration_time(compute_bound, EngineMode::kZo2, po);
    if (!codec) {
      none_bytes = m.wire_bytes;
      none_pb = pb;
    }
    const double ratio = static_cast<double>(m.wire_bytes) / static_cast<double>(none_bytes);
    const double d = rel_diff(mezo.final_loss, m.final_loss);
    comm_ratio.push_back(cb);
    r.rows.push_back({codec_name(codec), std::to_string(m.wire_bytes), num(ratio), num(m.final_loss), num(d),
                      num(cb), num(pb)});
    if (codec) {
      const std::size_t per = numerics::bytes_per_elem(*codec);
      const bool exact = m.wire_bytes * 4 == none_bytes * per;
      check(r, codec_name(codec) + " wire bytes are " + num(per / 4.0) + "x of f32", exact, num(ratio));
      check(r, codec_name(codec) + " final loss within 5% of mezo", d <= 0.05, num(d));
      check(r, codec_name(codec) + " irrelevant when compute-bound", std::abs(pb - none_pb) <= 0.02 * none_pb,
            num(pb) + " vs " + num(none_pb));
    } else {
      check(r, "uncompressed final loss within 5% of mezo", d <= 0.05, num(d));
    }
  }
  check(r, "comm-bound ordering f8 > bf16 > none", comm_ratio[3] > comm_ratio[2] && comm_ratio[2] > comm_ratio[0],
        num(comm_ratio[3]) + " > " + num(comm_ratio[2]) + " > " + num(comm_ratio[0]));
  return r;
}

SuiteReport memory_scaling(const RunConfig& base) {
  SuiteReport r{"memory-scaling", {"n_blocks", "device_peak_bytes", "host_bytes", "block_bytes"}, {}, {}};
  std::vector<std::size_t> peaks;
  bool host_linear = true;
  for (std::size_t n : {4, 8, 16}) {
    RunConfig c = base;
    c.engine = EngineKind::kZo2;
    c.model.n_blocks = n;
    c.zo.steps = 2;
    const auto m = run_experiment(c);
    const std::size_t block = model::block_param_count(c.model) * numerics::bytes_per_elem(c.dtype);
    host_linear = host_linear && m.host_bytes == n * block;
    peaks.push_back(m.device_peak);
    r.rows.push_back({std::to_string(n), std::to_string(m.device_peak), std::to_string(m.host_bytes),
                      std::to_string(block)});
  }
  check(r, "device peak identical across n_blocks", peaks[0] == peaks[1] && peaks[1] == peaks[2],
        std::to_string(peaks[0]));
  check(r, "host bytes = n_blocks x block bytes", host_linear, "");
  return r;
}

SuiteReport sweep(const RunConfig& base) {
  SuiteReport r{"sweep", {"batch", "seq_len", "tokens_per_step", "mezo_tokens_per_sec", "zo2_tokens_per_sec",
                          "ratio", "zo2_device_peak_bytes"}, {}, {}};
  bool ratios_ok = true;
  bool peak_monotone = true;
  for (std::size_t seq : {1024, 2048}) {
    std::size_t prev_peak = 0;
    for (std::size_t batch : {1, 2, 4, 8}) {
      model::ModelSpec spec = base.model;
      spec.seq_len = seq;
      const auto cost = scheduler::cost_from_hardware(spec, batch, {});
      const std::size_t tokens = batch * seq;
      const double mz = scheduler::predict_throughput(tokens, cost, EngineMode::kMezo);
      const double z2 = scheduler::predict_throughput(tokens, cost, EngineMode::kZo2);
      const std::size_t bytes = numerics::bytes_per_elem(base.dtype);
      const std::size_t peak =
          (model::embedding_param_count(spec) + model::head_param_count(spec) +
           3 * model::block_param_count(spec)) * bytes +
          model::activation_working_set_bytes(spec, batch, base.dtype);
      ratios_ok = ratios_ok && z2 <= mz * (1.0 + 1e-12);
      peak_monotone = peak_monotone && peak > prev_peak;
      prev_peak = peak;
      r.rows.push_back({std::to_string(batch), std::to_string(seq), std::to_string(tokens), num(mz), num(z2),
                        num(z2 / mz), std::to_string(peak)});
    }
  }
  check(r, "zo2 never exceeds resident mezo throughput", ratios_ok, "");
  check(r, "device peak grows with batch", peak_monotone, "");
  return r;
}

}  // namespace

bool SuiteReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

std::string SuiteReport::csv() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return os.str();
}

std::string SuiteReport::check_lines() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << name << ": " << c.name;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << '\n';
  }
  return os.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"equivalence", "ablation", "amp", "memory-scaling", "sweep"};
  return names;
}

SuiteReport run_suite(std::string_view name, const RunConfig& base) {
  if (name == "equivalence") return equivalence(base);
  if (name == "ablation") return ablation(base);
  if (name == "amp") return amp(base);
  if (name == "memory-scaling") return memory_scaling(base);
  if (name == "sweep") return sweep(base);
  throw ConfigError("suite", "unknown suite '" + std::string(name) + "'");
}

void write_suite(const SuiteReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(std::filesystem::path(dir) / (report.name + ".csv")) << report.csv();
  std::ofstream(std::filesystem::path(dir) / (report.name + "_checks.txt")) << report.check_lines();
}

}  // namespace zo2::harness
