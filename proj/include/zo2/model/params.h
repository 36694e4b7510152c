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

#ifndef ZO2_MODEL_PARAMS_H_
#define ZO2_MODEL_PARAMS_H_

#include <cstddef>
#include <string>
#include <vector>

#include "zo2/model/bucket.h"
#include "zo2/model/model_spec.h"
#include "zo2/numerics/rng.h"

namespace zo2::model {

// Module ids follow visitation order: 0 is the embedding, 1..N the
// transformer blocks, N+1 the LM head.
using ModuleId = std::size_t;

struct ModelParams {
  ModelSpec spec;
  BlockBucket embedding;
  std::vector<BlockBucket> blocks;
  // Holds ln_f and, unless tied, lm_head.weight. When tied, the LM head reads
  // embedding's tok_embed segment: one storage, two roles.
  BlockBucket head;

  std::size_t module_count() const { return blocks.size() + 2; }
  ModuleId head_id() const { return blocks.size() + 1; }
  BlockBucket& module(ModuleId id);
  const BlockBucket& module(ModuleId id) const;
  std::size_t param_count() const;
  ElemFormat fmt() const { return embedding.fmt(); }

  friend bool operator==(const ModelParams& a, const ModelParams& b) {
    return a.spec == b.spec && a.embedding == b.embedding && a.blocks == b.blocks && a.head == b.head;
  }
};

std::string module_name(ModuleId id, std::size_t n_blocks);

// Weights ~ N(0, 0.02^2), gains 1, biases 0, drawn segment by segment in
// canonical module order from `state`. Throws ResourceExhausted when the
// buffers cannot be allocated.
ModelParams init_params(const ModelSpec& spec, numerics::RngState state,
                        ElemFormat fmt = ElemFormat::kF64);

// Concatenated bucket bytes in module order; the digest input.
std::vector<std::byte> canonical_bytes(const ModelParams& params);

}  // namespace zo2::model

#endif  // ZO2_MODEL_PARAMS_H_
