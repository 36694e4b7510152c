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

#include "zo2/engine/rng_state_manager.h"

#include <string>

#include "zo2/common/errors.h"

namespace zo2::engine {

void RngStateManager::begin_iteration(std::uint64_t seed) {
  seed_ = seed;
  rs_ = RngState{seed, numerics::streams::kPerturb, 0};
  set_rng_state(seed, rs_);
  rsb_.push_back(rs_);
  if (iteration_ > 0) {
    lrs_ = rsb_.front();
    rsb_.pop_front();
  }
  current_.assign(module_count_, std::nullopt);
  ++iteration_;
}

void RngStateManager::end_iteration() { lrs_map_ = current_; }

RngState RngStateManager::get_rng_state(std::uint64_t seed) const {
  auto it = storage_.find(seed);
  if (it == storage_.end()) throw StateCorruption("no generator state stored for seed " + std::to_string(seed));
  return it->second;
}

void RngStateManager::record_module_state(std::size_t module, const RngState& st) {
  if (module >= current_.size()) throw StateCorruption("module " + std::to_string(module) + " out of range");
  current_[module] = st;
}

std::optional<RngState> RngStateManager::module_state(std::size_t module) const {
  if (module >= current_.size()) return std::nullopt;
  return current_[module];
}

std::optional<RngState> RngStateManager::last_state(std::size_t module) const {
  if (module >= lrs_map_.size()) return std::nullopt;
  return lrs_map_[module];
}

}  // namespace zo2::engine
