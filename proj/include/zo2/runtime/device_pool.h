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

#ifndef ZO2_RUNTIME_DEVICE_POOL_H_
#define ZO2_RUNTIME_DEVICE_POOL_H_

#include <array>
#include <cstddef>
#include <limits>
#include <mutex>
#include <string_view>
#include <vector>

namespace zo2::runtime {

enum class MemCategory : std::size_t { kPersistent = 0, kSlots, kActivations, kTiedSnapshot };
inline constexpr std::size_t kMemCategoryCount = 4;

std::string_view to_string(MemCategory c);

struct MemEvent {
  bool alloc;
  MemCategory category;
  std::size_t bytes;
  std::size_t allocated_total;  // cumulative
  std::size_t freed_total;      // cumulative
  std::size_t used_after;
};

/**
 * Byte accounting for the capacity-limited device tier.
 *
 * Every allocation goes through allocate(); exceeding capacity raises
 * ResourceExhausted and leaves the pool unchanged. The event log lets tests
 * check conservation (allocated - freed == used) at every step.
 */
class DevicePool {
 public:
  // Move-only handle; releases its bytes on destruction.
  class Allocation {
   public:
    Allocation() = default;
    Allocation(Allocation&& o) noexcept { *this = std::move(o); }
    Allocation& operator=(Allocation&& o) noexcept;
    Allocation(const Allocation&) = delete;
    Allocation& operator=(const Allocation&) = delete;
    ~Allocation() { reset(); }

    void reset();
    std::size_t bytes() const { return bytes_; }
    explicit operator bool() const { return pool_ != nullptr; }

   private:
    friend class DevicePool;
    Allocation(DevicePool* pool, MemCategory cat, std::size_t bytes) : pool_(pool), cat_(cat), bytes_(bytes) {}
    DevicePool* pool_ = nullptr;
    MemCategory cat_ = MemCategory::kPersistent;
    std::size_t bytes_ = 0;
  };

  explicit DevicePool(std::size_t capacity = std::numeric_limits<std::size_t>::max()) : capacity_(capacity) {}
  DevicePool(const DevicePool&) = delete;
  DevicePool& operator=(const DevicePool&) = delete;

  Allocation allocate(MemCategory cat, std::size_t bytes);

  std::size_t capacity() const { return capacity_; }
  std::size_t used() const;
  std::size_t peak() const;
  std::size_t used(MemCategory cat) const;
  std::size_t peak(MemCategory cat) const;
  std::size_t allocation_count() const;
  std::vector<MemEvent> events() const;

 private:
  void release(MemCategory cat, std::size_t bytes);

  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::size_t used_ = 0;
  std::size_t peak_ = 0;
  std::size_t allocated_total_ = 0;
  std::size_t freed_total_ = 0;
  std::size_t allocation_count_ = 0;
  std::array<std::size_t, kMemCategoryCount> cat_used_{};
  std::array<std::size_t, kMemCategoryCount> cat_peak_{};
  std::vector<MemEvent> events_;
};

}  // namespace zo2::runtime

#endif  // ZO2_RUNTIME_DEVICE_POOL_H_
