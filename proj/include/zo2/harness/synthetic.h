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

#ifndef ZO2_HARNESS_SYNTHETIC_H_
#define ZO2_HARNESS_SYNTHETIC_H_

#include <cstddef>

#include "zo2/model/dataset.h"
#include "zo2/numerics/rng.h"

namespace zo2::harness {

// Sequences of seq_len + 1 tokens: the first is uniform from `state`, each
// next one is (mult * prev + add) mod vocab. mult = 1, add = 0 is a copy
// task. n_samples = 0 gives an empty dataset.
model::Dataset gen_synthetic(std::size_t vocab, std::size_t seq_len, std::size_t n_samples,
                             numerics::RngState state, std::size_t mult = 1, std::size_t add = 1);

// Mean loss over the whole dataset, one sample at a time.
double dataset_loss(const model::ModelParams& params, const model::Dataset& data);

}  // namespace zo2::harness

#endif  // ZO2_HARNESS_SYNTHETIC_H_
