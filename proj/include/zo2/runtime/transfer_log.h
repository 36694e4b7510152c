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

#ifndef ZO2_RUNTIME_TRANSFER_LOG_H_
#define ZO2_RUNTIME_TRANSFER_LOG_H_

#include <cstddef>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <vector>

#include "zo2/numerics/elem_format.h"

namespace zo2::runtime {

enum class Direction { kUpload, kOffload };

struct TransferRecord {
  std::size_t module;
  Direction direction;
  std::size_t elem_count;
  std::size_t bytes_wire;  // elem_count * bytes_per_elem(fmt_wire)
  numerics::ElemFormat fmt_wire;
  std::size_t slot;
  std::size_t iteration;
  int pass;
  double t_start;  // seconds since runtime creation
  double t_end;
};

// Append-only, safe for concurrent writers.
class TransferLog {
 public:
  void append(const TransferRecord& r);
  std::vector<TransferRecord> records() const;
  std::size_t size() const;
  // Matching records; nullopt fields match anything.
  std::size_t count(std::optional<Direction> dir, std::optional<std::size_t> module,
                    std::optional<std::size_t> iteration) const;
  std::size_t wire_bytes(std::optional<Direction> dir = std::nullopt) const;
  void write_jsonl(std::ostream& os) const;

 private:
  mutable std::mutex mu_;
  std::vector<TransferRecord> records_;
};

}  // namespace zo2::runtime

#endif  // ZO2_RUNTIME_TRANSFER_LOG_H_
