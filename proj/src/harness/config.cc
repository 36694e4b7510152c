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

#include "zo2/harness/config.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "zo2/common/errors.h"

namespace zo2::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string normalize(std::string_view key) {
  std::string k(trim(key));
  std::replace(k.begin(), k.end(), '-', '_');
  static const std::map<std::string, std::string> aliases = {
      {"seed", "zo.seed"},          {"steps", "zo.steps"},         {"lr", "zo.lr"},
      {"eps", "zo.eps"},            {"batch_size", "zo.batch_size"}, {"n_blocks", "model.n_blocks"},
      {"dim", "model.dim"},         {"vocab", "model.vocab"},      {"seq_len", "model.seq_len"},
      {"dtype", "model.dtype"},     {"tie_embeddings", "model.tie_embeddings"},
      {"samples", "data.samples"},
  };
  if (auto it = aliases.find(k); it != aliases.end()) return it->second;
  return k;
}

std::uint64_t parse_uint(const std::string& key, std::string_view v) {
  std::uint64_t out = 0;
  v = trim(v);
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
    throw ConfigError(key, key + ": expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

double parse_double(const std::string& key, std::string_view v) {
  std::string s(trim(v));
  char* end = nullptr;
  double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError(key, key + ": expected a number, got '" + s + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, std::string_view v) {
  v = trim(v);
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, key + ": expected on/off, got '" + std::string(v) + "'");
}

numerics::ElemFormat parse_fmt(const std::string& key, std::string_view v) {
  if (auto f = numerics::parse_elem_format(trim(v))) return *f;
  throw ConfigError(key, key + ": unknown element format '" + std::string(v) + "'");
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string_view to_string(EngineKind e) { return e == EngineKind::kMezo ? "mezo" : "zo2"; }

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"model.n_blocks", "transformer blocks"},
      {"model.dim", "hidden size"},
      {"model.n_heads", "attention heads"},
      {"model.vocab", "vocabulary size"},
      {"model.seq_len", "tokens per sequence"},
      {"model.tie_embeddings", "share tok_embed with the LM head (on/off)"},
      {"model.dtype", "parameter format: f64 or f32"},
      {"zo.eps", "perturbation scale"},
      {"zo.lr", "learning rate"},
      {"zo.steps", "training steps"},
      {"zo.seed", "base seed for perturbations and batches"},
      {"zo.batch_size", "sequences per step"},
      {"engine", "mezo or zo2"},
      {"overlap", "three-lane overlap (on/off)"},
      {"arena_slots", "device block slots K"},
      {"arena_reuse", "reuse slot buffers across blocks (on/off)"},
      {"codec", "transfer codec: none, f16, bf16, f8"},
      {"update_mode", "deferred or naive"},
      {"backend", "threaded or simulated"},
      {"throttle", "transfer bandwidth in bytes/s, 0 = unthrottled"},
      {"latency", "fixed seconds per transfer"},
      {"output_dir", "artifact directory"},
      {"preset", "OPT preset for simulation (opt-1.3b .. opt-175b)"},
      {"data.samples", "synthetic sequences"},
      {"data.seed", "synthetic data seed"},
      {"data.mult", "pattern multiplier"},
      {"data.add", "pattern offset"},
      {"init.seed", "parameter initialization seed"},
  };
  return keys;
}

void set_key(RunConfig& c, std::string_view raw_key, std::string_view v) {
  const std::string k = normalize(raw_key);
  v = trim(v);
  if (k == "model.n_blocks") c.model.n_blocks = parse_uint(k, v);
  else if (k == "model.dim") c.model.dim = parse_uint(k, v);
  else if (k == "model.n_heads") c.model.n_heads = parse_uint(k, v);
  else if (k == "model.vocab") c.model.vocab = parse_uint(k, v);
  else if (k == "model.seq_len") c.model.seq_len = parse_uint(k, v);
  else if (k == "model.tie_embeddings") c.model.tie_embeddings = parse_bool(k, v);
  else if (k == "model.dtype") c.dtype = parse_fmt(k, v);
  else if (k == "zo.eps") c.zo.eps = parse_double(k, v);
  else if (k == "zo.lr") c.zo.lr = parse_double(k, v);
  else if (k == "zo.steps") c.zo.steps = parse_uint(k, v);
  else if (k == "zo.seed") c.zo.seed = parse_uint(k, v);
  else if (k == "zo.batch_size") c.zo.batch_size = parse_uint(k, v);
  else if (k == "engine") {
    if (v == "mezo") c.engine = EngineKind::kMezo;
    else if (v == "zo2") c.engine = EngineKind::kZo2;
    else throw ConfigError(k, "engine: expected mezo or zo2, got '" + std::string(v) + "'");
  } else if (k == "overlap") c.overlap = parse_bool(k, v);
  else if (k == "arena_slots") c.arena_slots = parse_uint(k, v);
  else if (k == "arena_reuse") c.arena_reuse = parse_bool(k, v);
  else if (k == "codec") {
    if (v == "none") c.codec.reset();
    else c.codec = parse_fmt(k, v);
  } else if (k == "update_mode") {
    if (v == "deferred") c.update_mode = scheduler::UpdateMode::kDeferred;
    else if (v == "naive") c.update_mode = scheduler::UpdateMode::kNaive;
    else throw ConfigError(k, "update_mode: expected deferred or naive, got '" + std::string(v) + "'");
  } else if (k == "backend") {
    if (v == "threaded") c.backend = scheduler::Backend::kThreaded;
    else if (v == "simulated") c.backend = scheduler::Backend::kSimulated;
    else throw ConfigError(k, "backend: expected threaded or simulated, got '" + std::string(v) + "'");
  } else if (k == "throttle") c.throttle = parse_double(k, v);
  else if (k == "latency") c.latency = parse_double(k, v);
  else if (k == "output_dir") c.output_dir = std::string(v);
  else if (k == "preset") {
    if (!v.empty() && !model::find_preset(v)) throw ConfigError(k, "preset: unknown preset '" + std::string(v) + "'");
    c.preset = std::string(v);
  } else if (k == "data.samples") c.data_samples = parse_uint(k, v);
  else if (k == "data.seed") c.data_seed = parse_uint(k, v);
  else if (k == "data.mult") c.data_mult = parse_uint(k, v);
  else if (k == "data.add") c.data_add = parse_uint(k, v);
  else if (k == "init.seed") c.init_seed = parse_uint(k, v);
  else throw ConfigError(std::string(trim(raw_key)), "unknown config key '" + std::string(trim(raw_key)) + "'");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(std::string(line), "malformed section header on line " + std::to_string(line_no));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    set_key(base, key, line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string_view a = args[i];
    if (a.substr(0, 2) != "--") throw ConfigError(std::string(a), "unexpected argument '" + std::string(a) + "'");
    a.remove_prefix(2);
    const auto eq = a.find('=');
    if (eq != std::string_view::npos) {
      set_key(cfg, a.substr(0, eq), a.substr(eq + 1));
    } else if (i + 1 < args.size()) {
      set_key(cfg, a, args[++i]);
    } else {
      throw ConfigError(std::string(a), "missing value for --" + std::string(a));
    }
  }
}

void validate(const RunConfig& c) {
  try {
    c.model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", e.what());
  }
  c.zo.validate();
  if (!numerics::is_compute_format(c.dtype)) throw ConfigError("model.dtype", "model.dtype must be f32 or f64");
  if (c.arena_slots < 1) throw ConfigError("arena_slots", "arena_slots must be >= 1");
  if (c.overlap && c.arena_slots < 2) {
    throw ConfigError("arena_slots", "arena_slots = 1 requires overlap = off");
  }
  if (c.codec && !numerics::is_low_bit_format(*c.codec)) {
    throw ConfigError("codec", "codec must be none, f16, bf16 or f8");
  }
  if (c.throttle < 0.0) throw ConfigError("throttle", "throttle must be >= 0");
  if (c.latency < 0.0) throw ConfigError("latency", "latency must be >= 0");
  if (c.data_samples == 0) throw ConfigError("data.samples", "data.samples must be >= 1: cannot train on an empty dataset");
}

std::string to_text(const RunConfig& c) {
  std::ostringstream os;
  os << "model.n_blocks = " << c.model.n_blocks << '\n'
     << "model.dim = " << c.model.dim << '\n'
     << "model.n_heads = " << c.model.n_heads << '\n'
     << "model.vocab = " << c.model.vocab << '\n'
     << "model.seq_len = " << c.model.seq_len << '\n'
     << "model.tie_embeddings = " << (c.model.tie_embeddings ? "on" : "off") << '\n'
     << "model.dtype = " << numerics::to_string(c.dtype) << '\n'
     << "zo.eps = " << fmt_double(c.zo.eps) << '\n'
     << "zo.lr = " << fmt_double(c.zo.lr) << '\n'
     << "zo.steps = " << c.zo.steps << '\n'
     << "zo.seed = " << c.zo.seed << '\n'
     << "zo.batch_size = " << c.zo.batch_size << '\n'
     << "engine = " << to_string(c.engine) << '\n'
     << "overlap = " << (c.overlap ? "on" : "off") << '\n'
     << "arena_slots = " << c.arena_slots << '\n'
     << "arena_reuse = " << (c.arena_reuse ? "on" : "off") << '\n'
     << "codec = " << (c.codec ? std::string(numerics::to_string(*c.codec)) : "none") << '\n'
     << "update_mode = " << (c.update_mode == scheduler::UpdateMode::kDeferred ? "deferred" : "naive") << '\n'
     << "backend = " << (c.backend == scheduler::Backend::kThreaded ? "threaded" : "simulated") << '\n'
     << "throttle = " << fmt_double(c.throttle) << '\n'
     << "latency = " << fmt_double(c.latency) << '\n'
     << "output_dir = " << c.output_dir << '\n'
     << "preset = " << c.preset << '\n'
     << "data.samples = " << c.data_samples << '\n'
     << "data.seed = " << c.data_seed << '\n'
     << "data.mult = " << c.data_mult << '\n'
     << "data.add = " << c.data_add << '\n'
     << "init.seed = " << c.init_seed << '\n';
  return os.str();
}

}  // namespace zo2::harness
