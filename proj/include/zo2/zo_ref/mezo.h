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

#ifndef ZO2_ZO_REF_MEZO_H_
#define ZO2_ZO_REF_MEZO_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zo2/common/errors.h"
#include "zo2/model/dataset.h"
#include "zo2/model/params.h"
#include "zo2/zo_ref/perturb.h"

namespace zo2::zo {

struct ZOConfig {
  double eps = 1e-3;
  double lr = 1e-4;  // constant schedule
  std::size_t steps = 100;
  std::uint64_t seed = 0;
  std::size_t batch_size = 1;

  void validate() const;
};

// Perturbation generator state for iteration `step_index`.
RngState perturbation_state(std::uint64_t base_seed, std::uint64_t step_index);

// All segments of all modules in canonical order: embedding, blocks, head.
std::vector<SegmentView> all_segments(model::ModelParams& params);

// theta += eps * z over the whole model; returns the advanced state.
RngState perturb_all(model::ModelParams& params, double eps, RngState state, OpTrace* trace = nullptr);

// theta -= lr * g * z over the whole model with z regenerated from `state`.
RngState update_all(model::ModelParams& params, double lr, double g, RngState state,
                    OpTrace* trace = nullptr);

struct StepResult {
  double g = 0.0;
  double loss_plus = 0.0;
  double loss_minus = 0.0;
};

/**
 * One MeZO iteration over a flat parameter list.
 *
 * Runs +eps, loss, -2 eps, loss, +eps with the generator reset to `state`
 * before every pass, then g = (l+ - l-) / 2 eps and the update with the same
 * z. The update is skipped when g == 0, which equals applying a zero-scaled
 * update apart from the sign of zero. Non-finite losses throw NonFiniteLoss
 * after the parameters have been restored.
 */
template <typename LossFn>
StepResult mezo_step_segments(std::span<const SegmentView> segments, LossFn&& loss_fn, double eps, double lr,
                              RngState state) {
  StepResult r;
  axpy_gaussian(segments, eps, state);
  r.loss_plus = loss_fn();
  axpy_gaussian(segments, -2.0 * eps, state);
  r.loss_minus = loss_fn();
  axpy_gaussian(segments, eps, state);
  if (!std::isfinite(r.loss_plus) || !std::isfinite(r.loss_minus)) {
    throw NonFiniteLoss("mezo_step: non-finite loss (l+=" + std::to_string(r.loss_plus) +
                        ", l-=" + std::to_string(r.loss_minus) + ")");
  }
  r.g = projected_gradient(r.loss_plus, r.loss_minus, eps);
  if (r.g != 0.0) axpy_gaussian(segments, -lr * r.g, state, OpKind::kUpdate);
  return r;
}

StepResult mezo_step(model::ModelParams& params, const model::TokenBatch& batch, const ZOConfig& cfg,
                     std::uint64_t step_index, OpTrace* trace = nullptr);

struct TrainResult {
  model::ModelParams params;
  std::vector<StepResult> steps;
};

TrainResult train_ref(model::ModelParams params, const model::Dataset& data, const ZOConfig& cfg,
                      OpTrace* trace = nullptr);

}  // namespace zo2::zo

#endif  // ZO2_ZO_REF_MEZO_H_
