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

#ifndef ZO2_ENGINE_DUAL_FORWARD_H_
#define ZO2_ENGINE_DUAL_FORWARD_H_

#include <cstddef>
#include <cstring>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "zo2/common/errors.h"
#include "zo2/engine/rng_state_manager.h"
#include "zo2/numerics/tensor_buf.h"
#include "zo2/zo_ref/perturb.h"

namespace zo2::engine {

using model::SegmentView;

// A weight owned by an earlier module but also read by this one (tied
// embeddings). Before each pass it is reset to `snapshot` and re-perturbed
// with `state`, so this module sees exactly the perturbed values the owner
// saw, and the final restore leaves the owner's bytes unchanged.
struct TiedReplay {
  SegmentView weight;
  const numerics::TensorBuf* snapshot = nullptr;
  RngState state;
};

struct DualForwardArgs {
  std::size_t module = 0;
  double eps = 0.0;
  double lr = 0.0;
  zo::OpTrace* trace = nullptr;
  // Runs after the deferred update and before the first perturbation.
  std::function<void()> after_update;
  std::optional<TiedReplay> tied;
};

namespace detail {

// Resets the tied weight to its snapshot and replays the first `n` of the
// +eps, -2 eps, +eps applications.
inline void replay_tied(const TiedReplay& t, double eps, int n) {
  const std::size_t bytes = t.weight.numel * numerics::bytes_per_elem(t.weight.fmt);
  if (t.snapshot == nullptr || t.snapshot->size_bytes() != bytes) {
    throw StateCorruption("tied weight snapshot missing or mis-sized");
  }
  std::memcpy(t.weight.data, t.snapshot->bytes().data(), bytes);
  const double scales[3] = {eps, -2.0 * eps, eps};
  for (int k = 0; k < n; ++k) zo::axpy_gaussian(t.weight, scales[k], t.state);
}

}  // namespace detail

/**
 * Dual forward of one module.
 *
 * 1. With a pending gradient, regenerate the previous iteration's z from lrs
 *    and apply theta -= lr * g * z; lrs advances past this module.
 * 2. theta += eps z (z from rs), out_plus = fwd(in_plus).
 * 3. theta -= 2 eps z, out_minus = fwd(in_minus).
 * 4. theta += eps z; rs advances past this module.
 * z is streamed, never materialized.
 */
template <typename Out, typename In, typename Fwd>
std::pair<Out, Out> dual_forward(std::span<const SegmentView> segments, const DualForwardArgs& args,
                                 RngStateManager& mgr, const PendingGradient& pending, Fwd&& fwd,
                                 const In& in_plus, const In& in_minus) {
  const std::uint64_t s = mgr.seed();
  if (pending.valid) {
    const auto& lrs = mgr.lrs();
    if (!lrs) throw StateCorruption("pending update without a previous generator state");
    const auto expected = mgr.last_state(args.module);
    if (!expected || *expected != *lrs) {
      throw StateCorruption("generator state for module " + std::to_string(args.module) +
                            " does not match the state recorded last iteration");
    }
    mgr.set_rng_state(s, *lrs);
    mgr.set_lrs(zo::axpy_gaussian(segments, -args.lr * pending.g, mgr.get_rng_state(s), zo::OpKind::kUpdate,
                                  args.trace, args.module));
  }
  if (args.after_update) args.after_update();

  const RngState rs = mgr.rs();
  mgr.record_module_state(args.module, rs);
  auto pass = [&](double scale, int tied_ops) {
    if (args.tied) detail::replay_tied(*args.tied, args.eps, tied_ops);
    mgr.set_rng_state(s, rs);
    return zo::axpy_gaussian(segments, scale, mgr.get_rng_state(s), zo::OpKind::kPerturb, args.trace,
                             args.module);
  };

  pass(args.eps, 1);
  Out out_plus = fwd(in_plus);
  pass(-2.0 * args.eps, 2);
  Out out_minus = fwd(in_minus);
  mgr.set_rs(pass(args.eps, 3));
  return {std::move(out_plus), std::move(out_minus)};
}

}  // namespace zo2::engine

#endif  // ZO2_ENGINE_DUAL_FORWARD_H_
