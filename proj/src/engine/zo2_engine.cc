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

#include "zo2/engine/zo2_engine.h"

#include <cmath>
#include <cstring>
#include <map>
#include <string>
#include <utility>

#include "zo2/common/errors.h"
#include "zo2/engine/dual_forward.h"
#include "zo2/model/forward.h"

namespace zo2::engine {

using model::BlockBucket;
using model::TokenBatch;
using numerics::TensorBuf;
using scheduler::Lane;
using scheduler::TaskKind;

namespace {

runtime::RuntimeOptions runtime_options(const EngineOptions& o) {
  runtime::RuntimeOptions r;
  r.slots = o.slots;
  r.arena_reuse = o.arena_reuse;
  r.codec = o.codec;
  r.device_capacity = o.device_capacity;
  r.bytes_per_sec = o.bytes_per_sec;
  r.latency_s = o.latency_s;
  r.batch_size = o.zo.batch_size;
  return r;
}

void apply_update(BlockBucket& b, double scale, const RngState& st, zo::OpTrace* trace, std::size_t module) {
  auto views = b.views();
  zo::axpy_gaussian(views, scale, st, zo::OpKind::kUpdate, trace, module);
}

}  // namespace

Zo2Engine::Zo2Engine(model::ModelParams params, EngineOptions opts)
    : opts_(opts),
      runtime_(std::move(params), runtime_options(opts)),
      mgr_(runtime_.n_blocks() + 2) {
  opts_.zo.validate();
  if (opts_.overlap && opts_.slots < 2) {
    throw ConfigError("arena_slots", "a single device slot requires overlap to be disabled");
  }
  if (runtime_.spec().tie_embeddings) {
    tied_snapshot_.emplace(std::vector<std::size_t>{runtime_.spec().vocab, runtime_.spec().dim},
                           runtime_.compute_fmt());
  }
}

scheduler::CostModel Zo2Engine::plan_cost(std::size_t batch) const {
  scheduler::HardwareProfile hw = opts_.hardware;
  if (opts_.bytes_per_sec > 0.0) hw.link_bandwidth = opts_.bytes_per_sec;
  if (opts_.latency_s > 0.0) hw.link_latency = opts_.latency_s;
  return scheduler::cost_from_hardware(runtime_.spec(), batch, hw);
}

zo::StepResult Zo2Engine::step(const TokenBatch& batch, std::uint64_t step_index) {
  const auto& spec = runtime_.spec();
  const std::size_t n = runtime_.n_blocks();
  const std::size_t head_id = n + 1;
  const double eps = opts_.zo.eps;
  const double lr = opts_.zo.lr;
  const bool tied = spec.tie_embeddings;
  const std::size_t iteration = mgr_.iteration();

  mgr_.begin_iteration(zo::perturbation_state(opts_.zo.seed, step_index).seed);

  scheduler::PlanOptions po;
  po.iterations = 1;
  po.overlap = opts_.overlap;
  po.slots = opts_.slots;
  po.update_mode = opts_.update_mode;
  po.arena_reuse = opts_.arena_reuse;
  po.codec = opts_.codec;
  graph_ = scheduler::build_plan(plan_cost(batch.batch), po);

  // Per-step working state shared by the compute-lane bodies.
  TensorBuf h_plus, h_minus;
  zo::StepResult result;
  std::map<std::pair<std::size_t, int>, std::size_t> slot_of;
  const std::size_t K = std::max<std::size_t>(runtime_.slot_count(), 1);

  for (std::size_t t = 0; t < graph_.size(); ++t) {
    const auto key = graph_.task(t).key;
    const std::size_t m = key.module;
    const int pass = key.pass;
    std::function<void()> body;

    if (key.kind == TaskKind::kUpload) {
      const std::size_t slot = visits_++ % K;
      slot_of[{m, pass}] = slot;
      body = [this, m, slot, iteration, pass] { runtime_.upload(m, slot, iteration, pass); };
    } else if (key.kind == TaskKind::kOffload) {
      const std::size_t slot = slot_of.at({m, pass});
      body = [this, m, slot, iteration, pass] { runtime_.offload(m, slot, iteration, pass); };
    } else if (key.kind == TaskKind::kUpdate) {
      const std::size_t slot = slot_of.at({m, pass});
      body = [this, m, slot, lr, &result] {
        if (result.g == 0.0) return;
        const auto st = mgr_.module_state(m);
        if (!st) throw StateCorruption("no generator state for module " + std::to_string(m));
        apply_update(runtime_.slot_bucket(slot), -lr * result.g, *st, opts_.trace, m);
      };
    } else if (m == 0) {
      body = [this, &batch, &h_plus, &h_minus, &spec, eps, lr, tied] {
        BlockBucket& emb = runtime_.embedding();
        auto segs = emb.views();
        DualForwardArgs a;
        a.module = 0;
        a.eps = eps;
        a.lr = lr;
        a.trace = opts_.trace;
        if (tied) {
          a.after_update = [this, &emb] {
            const auto v = emb.view(0);
            std::memcpy(tied_snapshot_->bytes().data(), v.data, tied_snapshot_->size_bytes());
          };
        }
        auto fwd = [&](const TokenBatch& b) { return model::forward_embedding(emb, b, spec); };
        auto out = dual_forward<TensorBuf>(segs, a, mgr_, pending_, fwd, batch, batch);
        h_plus = std::move(out.first);
        h_minus = std::move(out.second);
      };
    } else if (m == head_id) {
      body = [this, &batch, &h_plus, &h_minus, &result, &spec, eps, lr, tied, head_id] {
        BlockBucket& head = runtime_.head();
        BlockBucket& emb = runtime_.embedding();
        auto segs = head.views();
        DualForwardArgs a;
        a.module = head_id;
        a.eps = eps;
        a.lr = lr;
        a.trace = opts_.trace;
        if (tied) {
          const auto st = mgr_.module_state(0);
          if (!st) throw StateCorruption("tied head visited before the embedding");
          a.tied = TiedReplay{emb.view(0), &*tied_snapshot_, *st};
        }
        auto fwd = [&](const TensorBuf& h) {
          return model::loss(model::forward_head(head, tied ? &emb : nullptr, h, spec), batch.targets);
        };
        auto [lp, lm] = dual_forward<double>(segs, a, mgr_, pending_, fwd, h_plus, h_minus);
        result.loss_plus = lp;
        result.loss_minus = lm;
        if (!std::isfinite(lp) || !std::isfinite(lm)) {
          throw NonFiniteLoss("zo2 step: non-finite loss (l+=" + std::to_string(lp) + ", l-=" +
                              std::to_string(lm) + ")");
        }
        result.g = zo::projected_gradient(lp, lm, eps);
        if (opts_.update_mode == scheduler::UpdateMode::kNaive && result.g != 0.0) {
          apply_update(emb, -lr * result.g, *mgr_.module_state(0), opts_.trace, 0);
          apply_update(head, -lr * result.g, *mgr_.module_state(head_id), opts_.trace, head_id);
        }
      };
    } else {
      const std::size_t slot = slot_of.at({m, pass});
      body = [this, m, slot, &h_plus, &h_minus, &spec, eps, lr] {
        BlockBucket& b = runtime_.slot_bucket(slot);
        auto segs = b.views();
        DualForwardArgs a;
        a.module = m;
        a.eps = eps;
        a.lr = lr;
        a.trace = opts_.trace;
        auto fwd = [&](const TensorBuf& h) { return model::forward_block(b, h, spec); };
        auto out = dual_forward<TensorBuf>(segs, a, mgr_, pending_, fwd, h_plus, h_minus);
        h_plus = std::move(out.first);
        h_minus = std::move(out.second);
      };
    }
    graph_.set_body(t, std::move(body));
  }

  // Bodies hold references into this frame.
  auto drop_bodies = [this] {
    for (std::size_t t = 0; t < graph_.size(); ++t) graph_.set_body(t, {});
  };
  try {
    timelines_.push_back(scheduler::run_schedule(graph_, opts_.backend));
  } catch (...) {
    drop_bodies();
    throw;
  }
  drop_bodies();

  if (opts_.update_mode == scheduler::UpdateMode::kDeferred) {
    pending_ = PendingGradient{result.g, result.g != 0.0};
  } else {
    pending_ = PendingGradient{};
  }
  mgr_.end_iteration();
  return result;
}

void Zo2Engine::finalize() {
  if (!pending_.valid) return;
  const double scale = -opts_.zo.lr * pending_.g;
  const std::size_t n = runtime_.n_blocks();
  for (std::size_t m = 0; m < n + 2; ++m) {
    const auto st = mgr_.last_state(m);
    if (!st) throw StateCorruption("finalize: no generator state for module " + std::to_string(m));
    if (m == 0) {
      apply_update(runtime_.embedding(), scale, *st, opts_.trace, m);
    } else if (m == n + 1) {
      apply_update(runtime_.head(), scale, *st, opts_.trace, m);
    } else {
      runtime_.update_host_block(m, [&](BlockBucket& b) { apply_update(b, scale, *st, opts_.trace, m); });
    }
  }
  pending_ = PendingGradient{};
}

Zo2TrainResult train_zo2(model::ModelParams params, const model::Dataset& data, const EngineOptions& opts) {
  opts.zo.validate();
  Zo2Engine engine(std::move(params), opts);
  Zo2TrainResult out;
  out.steps.reserve(opts.zo.steps);
  for (std::size_t j = 0; j < opts.zo.steps; ++j) {
    const auto batch = model::sample_batch(data, opts.zo.seed, j, opts.zo.batch_size);
    out.steps.push_back(engine.step(batch, j));
  }
  engine.finalize();
  out.params = engine.params();
  out.timelines = engine.timelines();
  out.memory = engine.runtime().memory_report();
  out.transfers = engine.runtime().log().records();
  return out;
}

}  // namespace zo2::engine
