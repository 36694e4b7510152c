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

#include "zo2/harness/synthetic.h"

#include <stdexcept>

#include "zo2/model/forward.h"

namespace zo2::harness {

model::Dataset gen_synthetic(std::size_t vocab, std::size_t seq_len, std::size_t n_samples,
                             numerics::RngState state, std::size_t mult, std::size_t add) {
  if (vocab == 0 || seq_len == 0) throw std::invalid_argument("gen_synthetic: vocab and seq_len must be >= 1");
  model::Dataset d;
  d.vocab = vocab;
  d.seq_len = seq_len;
  d.samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    std::vector<std::int32_t> row(seq_len + 1);
    std::size_t t = numerics::next_index(state, vocab);
    for (auto& x : row) {
      x = static_cast<std::int32_t>(t);
      t = (mult * t + add) % vocab;
    }
    d.samples.push_back(std::move(row));
  }
  return d;
}

double dataset_loss(const model::ModelParams& params, const model::Dataset& data) {
  if (data.empty()) throw std::invalid_argument("dataset_loss: empty dataset");
  double total = 0.0;
  for (const auto& s : data.samples) {
    model::TokenBatch b;
    b.batch = 1;
    b.seq = data.seq_len;
    b.inputs.assign(s.begin(), s.end() - 1);
    b.targets.assign(s.begin() + 1, s.end());
    total += model::forward_loss(params, b);
  }
  return total / static_cast<double>(data.samples.size());
}

}  // namespace zo2::harness
