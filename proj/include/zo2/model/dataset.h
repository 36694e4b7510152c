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

#ifndef ZO2_MODEL_DATASET_H_
#define ZO2_MODEL_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "zo2/model/forward.h"

namespace zo2::model {

// Token sequences of length seq_len + 1; position t predicts t + 1.
struct Dataset {
  std::size_t vocab = 0;
  std::size_t seq_len = 0;
  std::vector<std::vector<std::int32_t>> samples;

  bool empty() const { return samples.empty(); }
};

// Batch for step `step_index`: indices drawn on the batch stream of the
// per-step seed, so every engine sees the same batch sequence and batch
// sampling never shifts perturbation draws.
TokenBatch sample_batch(const Dataset& data, std::uint64_t base_seed, std::uint64_t step_index,
                        std::size_t batch_size);

}  // namespace zo2::model

#endif  // ZO2_MODEL_DATASET_H_
