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

#include "zo2/runtime/transfer_log.h"

#include <ostream>

#include "json.hpp"

namespace zo2::runtime {

void TransferLog::append(const TransferRecord& r) {
  std::lock_guard lock(mu_);
  records_.push_back(r);
}

std::vector<TransferRecord> TransferLog::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::size_t TransferLog::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::size_t TransferLog::count(std::optional<Direction> dir, std::optional<std::size_t> module,
                               std::optional<std::size_t> iteration) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& r : records_) {
    if (dir && r.direction != *dir) continue;
    if (module && r.module != *module) continue;
    if (iteration && r.iteration != *iteration) continue;
    ++n;
  }
  return n;
}

std::size_t TransferLog::wire_bytes(std::optional<Direction> dir) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& r : records_) {
    if (!dir || r.direction == *dir) n += r.bytes_wire;
  }
  return n;
}

void TransferLog::write_jsonl(std::ostream& os) const {
  for (const auto& r : records()) {
    nlohmann::json j;
    j["module"] = r.module;
    j["direction"] = r.direction == Direction::kUpload ? "upload" : "offload";
    j["elem_count"] = r.elem_count;
    j["bytes_wire"] = r.bytes_wire;
    j["fmt_wire"] = std::string(numerics::to_string(r.fmt_wire));
    j["slot"] = r.slot;
    j["iteration"] = r.iteration;
    j["pass"] = r.pass;
    j["t_start"] = r.t_start;
    j["t_end"] = r.t_end;
    os << j.dump() << '\n';
  }
}

}  // namespace zo2::runtime
