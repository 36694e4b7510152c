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

#include "zo2/zo_ref/mezo.h"

#include <stdexcept>

#include "zo2/model/forward.h"

namespace zo2::zo {

void ZOConfig::validate() const {
  if (!(eps > 0.0)) throw ConfigError("zo.eps", "zo.eps must be > 0");
  if (!(lr > 0.0)) throw ConfigError("zo.lr", "zo.lr must be > 0");
  if (steps < 1) throw ConfigError("zo.steps", "zo.steps must be >= 1");
  if (batch_size < 1) throw ConfigError("zo.batch_size", "zo.batch_size must be >= 1");
}

RngState perturbation_state(std::uint64_t base_seed, std::uint64_t step_index) {
  return {numerics::derive_seed(base_seed, step_index), numerics::streams::kPerturb, 0};
}

std::vector<SegmentView> all_segments(model::ModelParams& params) {
  std::vector<SegmentView> out;
  for (model::ModuleId m = 0; m < params.module_count(); ++m) {
    auto v = params.module(m).views();
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

namespace {

RngState apply_whole_model(model::ModelParams& params, double scale, RngState state, OpKind kind,
                           OpTrace* trace) {
  for (model::ModuleId m = 0; m < params.module_count(); ++m) {
    auto views = params.module(m).views();
    state = axpy_gaussian(views, scale, state, kind, trace, m);
  }
  return state;
}

}  // namespace

RngState perturb_all(model::ModelParams& params, double eps, RngState state, OpTrace* trace) {
  return apply_whole_model(params, eps, state, OpKind::kPerturb, trace);
}

RngState update_all(model::ModelParams& params, double lr, double g, RngState state, OpTrace* trace) {
  return apply_whole_model(params, -lr * g, state, OpKind::kUpdate, trace);
}

StepResult mezo_step(model::ModelParams& params, const model::TokenBatch& batch, const ZOConfig& cfg,
                     std::uint64_t step_index, OpTrace* trace) {
  const RngState s = perturbation_state(cfg.seed, step_index);
  StepResult r;
  perturb_all(params, cfg.eps, s, trace);
  r.loss_plus = model::forward_loss(params, batch);
  perturb_all(params, -2.0 * cfg.eps, s, trace);
  r.loss_minus = model::forward_loss(params, batch);
  perturb_all(params, cfg.eps, s, trace);
  if (!std::isfinite(r.loss_plus) || !std::isfinite(r.loss_minus)) {
    throw NonFiniteLoss("mezo_step " + std::to_string(step_index) + ": non-finite loss (l+=" +
                        std::to_string(r.loss_plus) + ", l-=" + std::to_string(r.loss_minus) + ")");
  }
  r.g = projected_gradient(r.loss_plus, r.loss_minus, cfg.eps);
  if (r.g != 0.0) update_all(params, cfg.lr, r.g, s, trace);
  return r;
}

TrainResult train_ref(model::ModelParams params, const model::Dataset& data, const ZOConfig& cfg,
                      OpTrace* trace) {
  cfg.validate();
  TrainResult out{std::move(params), {}};
  out.steps.reserve(cfg.steps);
  for (std::size_t j = 0; j < cfg.steps; ++j) {
    const model::TokenBatch batch = model::sample_batch(data, cfg.seed, j, cfg.batch_size);
    out.steps.push_back(mezo_step(out.params, batch, cfg, j, trace));
  }
  return out;
}

}  // namespace zo2::zo
