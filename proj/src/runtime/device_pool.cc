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

#include "zo2/runtime/device_pool.h"

#include <algorithm>
#include <string>

#include "zo2/common/errors.h"

namespace zo2::runtime {

std::string_view to_string(MemCategory c) {
  switch (c) {
    case MemCategory::kPersistent:
      return "persistent";
    case MemCategory::kSlots:
      return "slots";
    case MemCategory::kActivations:
      return "activations";
    case MemCategory::kTiedSnapshot:
      return "tied_snapshot";
  }
  return "unknown";
}

DevicePool::Allocation& DevicePool::Allocation::operator=(Allocation&& o) noexcept {
  if (this != &o) {
    reset();
    pool_ = o.pool_;
    cat_ = o.cat_;
    bytes_ = o.bytes_;
    o.pool_ = nullptr;
    o.bytes_ = 0;
  }
  return *this;
}

void DevicePool::Allocation::reset() {
  if (pool_) pool_->release(cat_, bytes_);
  pool_ = nullptr;
  bytes_ = 0;
}

DevicePool::Allocation DevicePool::allocate(MemCategory cat, std::size_t bytes) {
  std::lock_guard lock(mu_);
  if (bytes > capacity_ - used_) {
    throw ResourceExhausted("device pool: allocating " + std::to_string(bytes) + " bytes (" +
                            std::string(to_string(cat)) + ") exceeds capacity " + std::to_string(capacity_) +
                            " with " + std::to_string(used_) + " in use");
  }
  used_ += bytes;
  allocated_total_ += bytes;
  ++allocation_count_;
  peak_ = std::max(peak_, used_);
  auto i = static_cast<std::size_t>(cat);
  cat_used_[i] += bytes;
  cat_peak_[i] = std::max(cat_peak_[i], cat_used_[i]);
  events_.push_back({true, cat, bytes, allocated_total_, freed_total_, used_});
  return Allocation(this, cat, bytes);
}

void DevicePool::release(MemCategory cat, std::size_t bytes) {
  std::lock_guard lock(mu_);
  used_ -= bytes;
  freed_total_ += bytes;
  cat_used_[static_cast<std::size_t>(cat)] -= bytes;
  events_.push_back({false, cat, bytes, allocated_total_, freed_total_, used_});
}

std::size_t DevicePool::used() const {
  std::lock_guard lock(mu_);
  return used_;
}

std::size_t DevicePool::peak() const {
  std::lock_guard lock(mu_);
  return peak_;
}

std::size_t DevicePool::used(MemCategory cat) const {
  std::lock_guard lock(mu_);
  return cat_used_[static_cast<std::size_t>(cat)];
}

std::size_t DevicePool::peak(MemCategory cat) const {
  std::lock_guard lock(mu_);
  return cat_peak_[static_cast<std::size_t>(cat)];
}

std::size_t DevicePool::allocation_count() const {
  std::lock_guard lock(mu_);
  return allocation_count_;
}

std::vector<MemEvent> DevicePool::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

}  // namespace zo2::runtime
