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

#ifndef ZO2_MODEL_FORWARD_H_
#define ZO2_MODEL_FORWARD_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "zo2/model/params.h"

namespace zo2::model {

// Token ids for one batch, row-major [batch, seq]. targets are the next-token
// labels for the same positions.
struct TokenBatch {
  std::size_t batch = 0;
  std::size_t seq = 0;
  std::vector<std::int32_t> inputs;
  std::vector<std::int32_t> targets;

  std::size_t tokens() const { return batch * seq; }
};

// All forward functions are pure: outputs depend only on the bucket bytes and
// the inputs, and nothing is retained between calls. Shape mismatches raise
// std::invalid_argument. Arithmetic runs in the bucket's format (F32/F64).

// [batch, seq, dim] = tok_embed[token] + pos_embed[position].
TensorBuf forward_embedding(const BlockBucket& embedding, const TokenBatch& tokens,
                            const ModelSpec& spec);

// Pre-norm block: x + attn(ln1(x)), then x + mlp(ln2(x)) with causal
// multi-head attention and an erf GELU.
TensorBuf forward_block(const BlockBucket& block, const TensorBuf& hidden, const ModelSpec& spec);

// Logits [batch, seq, vocab] = ln_f(h) * W^T. `tied_embedding` supplies W when
// the head bucket has no lm_head.weight; it is ignored otherwise.
TensorBuf forward_head(const BlockBucket& head, const BlockBucket* tied_embedding,
                       const TensorBuf& hidden, const ModelSpec& spec);

// Mean cross-entropy over all positions, accumulated in F64.
double loss(const TensorBuf& logits, std::span<const std::int32_t> targets);

TensorBuf forward_embedding(const ModelParams& params, const TokenBatch& tokens);
TensorBuf forward_head(const ModelParams& params, const TensorBuf& hidden);
TensorBuf forward_logits(const ModelParams& params, const TokenBatch& tokens);
double forward_loss(const ModelParams& params, const TokenBatch& tokens);

// Peak device bytes of one module's dual forward: two input and two output
// hidden states plus the largest single-forward scratch (block or head).
std::size_t activation_working_set_bytes(const ModelSpec& spec, std::size_t batch, ElemFormat fmt);

}  // namespace zo2::model

#endif  // ZO2_MODEL_FORWARD_H_
