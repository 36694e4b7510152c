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

#ifndef ZO2_ENGINE_RNG_STATE_MANAGER_H_
#define ZO2_ENGINE_RNG_STATE_MANAGER_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "zo2/numerics/rng.h"

namespace zo2::engine {

using numerics::RngState;

// Scalar projected gradient waiting to be applied. valid mirrors the
// "g != 0" gate: a zero gradient is never applied.
struct PendingGradient {
  double g = 0.0;
  bool valid = false;
};

/**
 * Perturbation-state bookkeeping for block-wise dual forwards.
 *
 * rs is the rolling perturbation state: each module draws its z from rs and
 * hands the advanced state to the next module. lrs rolls the same way through
 * the previous iteration's draws, starting from the state popped off the rsb
 * FIFO. The states each module actually used are kept per iteration; after
 * end_iteration() they become lrs_map, the source for deferred updates.
 */
class RngStateManager {
 public:
  explicit RngStateManager(std::size_t module_count) : module_count_(module_count) {}

  // Sets the seed for a new iteration and pushes its start state into rsb.
  // From the second iteration on, lrs is popped from the front of rsb.
  void begin_iteration(std::uint64_t seed);
  // Moves this iteration's per-module states into lrs_map.
  void end_iteration();

  std::uint64_t seed() const { return seed_; }
  std::size_t iteration() const { return iteration_; }

  void set_rng_state(std::uint64_t seed, const RngState& st) { storage_[seed] = st; }
  // Throws StateCorruption for an unknown seed.
  RngState get_rng_state(std::uint64_t seed) const;

  const RngState& rs() const { return rs_; }
  void set_rs(const RngState& st) { rs_ = st; }
  const std::optional<RngState>& lrs() const { return lrs_; }
  void set_lrs(const RngState& st) { lrs_ = st; }

  void record_module_state(std::size_t module, const RngState& st);
  // State module `module` drew from in the current iteration.
  std::optional<RngState> module_state(std::size_t module) const;
  // State module `module` drew from in the previous iteration.
  std::optional<RngState> last_state(std::size_t module) const;

  const std::deque<RngState>& rsb() const { return rsb_; }
  const std::vector<std::optional<RngState>>& lrs_map() const { return lrs_map_; }
  std::size_t module_count() const { return module_count_; }

 private:
  std::size_t module_count_;
  std::size_t iteration_ = 0;
  std::uint64_t seed_ = 0;
  RngState rs_{};
  std::optional<RngState> lrs_;
  std::deque<RngState> rsb_;
  std::vector<std::optional<RngState>> current_;
  std::vector<std::optional<RngState>> lrs_map_;
  std::unordered_map<std::uint64_t, RngState> storage_;
};

}  // namespace zo2::engine

#endif  // ZO2_ENGINE_RNG_STATE_MANAGER_H_
