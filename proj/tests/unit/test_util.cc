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

#include "unit/test_util.h"

#include "zo2/numerics/rng.h"

namespace zo2::testing {

model::ModelSpec toy_spec(std::size_t n_blocks, std::size_t dim, bool tied) {
  model::ModelSpec s;
  s.n_blocks = n_blocks;
  s.dim = dim;
  s.n_heads = 2;
  s.vocab = 64;
  s.seq_len = 8;
  s.tie_embeddings = tied;
  return s;
}

model::Dataset random_dataset(const model::ModelSpec& spec, std::size_t n_samples, std::uint64_t seed) {
  model::Dataset d;
  d.vocab = spec.vocab;
  d.seq_len = spec.seq_len;
  numerics::RngState st{seed, numerics::streams::kData, 0};
  for (std::size_t i = 0; i < n_samples; ++i) {
    std::vector<std::int32_t> row(spec.seq_len + 1);
    for (auto& t : row) t = static_cast<std::int32_t>(numerics::next_index(st, spec.vocab));
    d.samples.push_back(std::move(row));
  }
  return d;
}

model::ModelParams toy_params(const model::ModelSpec& spec, std::uint64_t seed, numerics::ElemFormat fmt) {
  return model::init_params(spec, {seed, numerics::streams::kInit, 0}, fmt);
}

}  // namespace zo2::testing
