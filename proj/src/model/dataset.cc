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

#include "zo2/model/dataset.h"

#include <stdexcept>

#include "zo2/numerics/rng.h"

namespace zo2::model {

TokenBatch sample_batch(const Dataset& data, std::uint64_t base_seed, std::uint64_t step_index,
                        std::size_t batch_size) {
  if (data.empty()) throw std::invalid_argument("sample_batch: empty dataset");
  if (batch_size == 0) throw std::invalid_argument("sample_batch: batch_size must be >= 1");
  numerics::RngState st{numerics::derive_seed(base_seed, step_index), numerics::streams::kBatch, 0};
  TokenBatch out;
  out.batch = batch_size;
  out.seq = data.seq_len;
  out.inputs.reserve(batch_size * data.seq_len);
  out.targets.reserve(batch_size * data.seq_len);
  for (std::size_t b = 0; b < batch_size; ++b) {
    const auto& s = data.samples[numerics::next_index(st, data.samples.size())];
    if (s.size() != data.seq_len + 1) throw std::invalid_argument("sample_batch: malformed sample");
    out.inputs.insert(out.inputs.end(), s.begin(), s.end() - 1);
    out.targets.insert(out.targets.end(), s.begin() + 1, s.end());
  }
  return out;
}

}  // namespace zo2::model
