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

#include "zo2/model/forward.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zo2::model {

namespace {

constexpr double kLayerNormEps = 1e-5;

void check_hidden(const TensorBuf& h, const ModelSpec& spec, ElemFormat fmt) {
  const auto& s = h.shape();
  if (s.size() != 3 || s[2] != spec.dim || s[1] > spec.seq_len) {
    throw std::invalid_argument("forward: hidden state must be [batch, seq<=seq_len, dim]");
  }
  if (h.fmt() != fmt) throw std::invalid_argument("forward: hidden/bucket format mismatch");
}

void check_tokens(const TokenBatch& t, const ModelSpec& spec) {
  if (t.batch == 0 || t.seq == 0 || t.seq > spec.seq_len || t.inputs.size() != t.tokens()) {
    throw std::invalid_argument("forward: token batch shape mismatch");
  }
  for (auto id : t.inputs) {
    if (id < 0 || static_cast<std::size_t>(id) >= spec.vocab) {
      throw std::invalid_argument("forward: token id out of vocabulary");
    }
  }
}

template <typename T>
void layer_norm(std::span<const T> x, std::size_t rows, std::size_t dim, std::span<const T> gain,
                std::span<const T> bias, std::span<T> y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = x.data() + r * dim;
    T* yr = y.data() + r * dim;
    T mean = 0;
    for (std::size_t i = 0; i < dim; ++i) mean += xr[i];
    mean /= static_cast<T>(dim);
    T var = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      const T c = xr[i] - mean;
      var += c * c;
    }
    var /= static_cast<T>(dim);
    const T inv = T(1) / std::sqrt(var + static_cast<T>(kLayerNormEps));
    for (std::size_t i = 0; i < dim; ++i) yr[i] = (xr[i] - mean) * inv * gain[i] + bias[i];
  }
}

// y[r, o] = b[o] + sum_i x[r, i] * w[i, o]
template <typename T>
void linear(std::span<const T> x, std::size_t rows, std::size_t in, std::span<const T> w,
            std::span<const T> b, std::size_t out, std::span<T> y) {
  for (std::size_t r = 0; r < rows; ++r) {
    T* yr = y.data() + r * out;
    std::copy(b.begin(), b.end(), yr);
    const T* xr = x.data() + r * in;
    for (std::size_t i = 0; i < in; ++i) {
      const T xi = xr[i];
      const T* wi = w.data() + i * out;
      for (std::size_t o = 0; o < out; ++o) yr[o] += xi * wi[o];
    }
  }
}

template <typename T>
T gelu(T x) {
  return static_cast<T>(0.5) * x * (T(1) + std::erf(x * static_cast<T>(0.7071067811865476)));
}

template <typename T>
TensorBuf embedding_impl(const BlockBucket& emb, const TokenBatch& t, const ModelSpec& spec) {
  const std::size_t d = spec.dim;
  TensorBuf out({t.batch, t.seq, d}, emb.fmt());
  auto y = out.as<T>();
  auto tok = emb.values<T>("tok_embed");
  auto pos = emb.values<T>("pos_embed");
  for (std::size_t b = 0; b < t.batch; ++b) {
    for (std::size_t s = 0; s < t.seq; ++s) {
      const std::size_t id = static_cast<std::size_t>(t.inputs[b * t.seq + s]);
      T* yr = y.data() + (b * t.seq + s) * d;
      for (std::size_t i = 0; i < d; ++i) yr[i] = tok[id * d + i] + pos[s * d + i];
    }
  }
  return out;
}

template <typename T>
TensorBuf block_impl(const BlockBucket& blk, const TensorBuf& hidden, const ModelSpec& spec) {
  const std::size_t batch = hidden.shape()[0];
  const std::size_t seq = hidden.shape()[1];
  const std::size_t d = spec.dim;
  const std::size_t m = spec.mlp_dim();
  const std::size_t nh = spec.n_heads;
  const std::size_t hd = spec.head_dim();
  const std::size_t rows = batch * seq;

  TensorBuf out = hidden;
  auto x = out.as<T>();

  std::vector<T> norm(rows * d);
  std::vector<T> qkv(rows * 3 * d);
  std::vector<T> scores(batch * nh * seq * seq);
  std::vector<T> ctx(rows * d);
  std::vector<T> proj(rows * d);
  std::vector<T> mlp(rows * m);

  layer_norm<T>(x, rows, d, blk.values<T>("ln1.gain"), blk.values<T>("ln1.bias"), norm);
  linear<T>(norm, rows, d, blk.values<T>("qkv.weight"), blk.values<T>("qkv.bias"), 3 * d, qkv);

  const T scale = T(1) / std::sqrt(static_cast<T>(hd));
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t h = 0; h < nh; ++h) {
      T* sc = scores.data() + (b * nh + h) * seq * seq;
      for (std::size_t i = 0; i < seq; ++i) {
        const T* q = qkv.data() + (b * seq + i) * 3 * d + h * hd;
        T mx = -std::numeric_limits<T>::infinity();
        for (std::size_t j = 0; j <= i; ++j) {
          const T* k = qkv.data() + (b * seq + j) * 3 * d + d + h * hd;
          T dot = 0;
          for (std::size_t e = 0; e < hd; ++e) dot += q[e] * k[e];
          sc[i * seq + j] = dot * scale;
          mx = std::max(mx, sc[i * seq + j]);
        }
        T sum = 0;
        for (std::size_t j = 0; j <= i; ++j) {
          sc[i * seq + j] = std::exp(sc[i * seq + j] - mx);
          sum += sc[i * seq + j];
        }
        T* c = ctx.data() + (b * seq + i) * d + h * hd;
        std::fill(c, c + hd, T(0));
        for (std::size_t j = 0; j <= i; ++j) {
          const T p = sc[i * seq + j] / sum;
          const T* v = qkv.data() + (b * seq + j) * 3 * d + 2 * d + h * hd;
          for (std::size_t e = 0; e < hd; ++e) c[e] += p * v[e];
        }
      }
    }
  }
  linear<T>(ctx, rows, d, blk.values<T>("attn_out.weight"), blk.values<T>("attn_out.bias"), d, proj);
  for (std::size_t i = 0; i < rows * d; ++i) x[i] += proj[i];

  layer_norm<T>(x, rows, d, blk.values<T>("ln2.gain"), blk.values<T>("ln2.bias"), norm);
  linear<T>(norm, rows, d, blk.values<T>("mlp_in.weight"), blk.values<T>("mlp_in.bias"), m, mlp);
  for (T& v : mlp) v = gelu(v);
  linear<T>(mlp, rows, m, blk.values<T>("mlp_out.weight"), blk.values<T>("mlp_out.bias"), d, proj);
  for (std::size_t i = 0; i < rows * d; ++i) x[i] += proj[i];
  return out;
}

template <typename T>
TensorBuf head_impl(const BlockBucket& head, std::span<const T> weight, const TensorBuf& hidden,
                    const ModelSpec& spec) {
  const std::size_t batch = hidden.shape()[0];
  const std::size_t seq = hidden.shape()[1];
  const std::size_t d = spec.dim;
  const std::size_t v = spec.vocab;
  const std::size_t rows = batch * seq;

  std::vector<T> norm(rows * d);
  layer_norm<T>(hidden.as<T>(), rows, d, head.values<T>("ln_f.gain"), head.values<T>("ln_f.bias"), norm);
  TensorBuf out({batch, seq, v}, head.fmt());
  auto y = out.as<T>();
  for (std::size_t r = 0; r < rows; ++r) {
    const T* hr = norm.data() + r * d;
    for (std::size_t o = 0; o < v; ++o) {
      const T* w = weight.data() + o * d;
      T acc = 0;
      for (std::size_t i = 0; i < d; ++i) acc += hr[i] * w[i];
      y[r * v + o] = acc;
    }
  }
  return out;
}

template <typename T>
double loss_impl(const TensorBuf& logits, std::span<const std::int32_t> targets) {
  const std::size_t v = logits.shape()[2];
  const std::size_t rows = logits.numel() / v;
  auto l = logits.as<T>();
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const T* lr = l.data() + r * v;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v; ++i) mx = std::max(mx, static_cast<double>(lr[i]));
    double sum = 0.0;
    for (std::size_t i = 0; i < v; ++i) sum += std::exp(static_cast<double>(lr[i]) - mx);
    total += mx + std::log(sum) - static_cast<double>(lr[static_cast<std::size_t>(targets[r])]);
  }
  return total / static_cast<double>(rows);
}

}  // namespace

TensorBuf forward_embedding(const BlockBucket& embedding, const TokenBatch& tokens, const ModelSpec& spec) {
  check_tokens(tokens, spec);
  if (embedding.numel() != embedding_param_count(spec)) {
    throw std::invalid_argument("forward_embedding: bucket does not match spec");
  }
  return embedding.fmt() == ElemFormat::kF64 ? embedding_impl<double>(embedding, tokens, spec)
                                             : embedding_impl<float>(embedding, tokens, spec);
}

TensorBuf forward_block(const BlockBucket& block, const TensorBuf& hidden, const ModelSpec& spec) {
  check_hidden(hidden, spec, block.fmt());
  if (block.numel() != block_param_count(spec)) {
    throw std::invalid_argument("forward_block: bucket does not match spec");
  }
  return block.fmt() == ElemFormat::kF64 ? block_impl<double>(block, hidden, spec)
                                         : block_impl<float>(block, hidden, spec);
}

TensorBuf forward_head(const BlockBucket& head, const BlockBucket* tied_embedding, const TensorBuf& hidden,
                       const ModelSpec& spec) {
  check_hidden(hidden, spec, head.fmt());
  const bool own_weight = head.has_segment("lm_head.weight");
  if (!own_weight && tied_embedding == nullptr) {
    throw std::invalid_argument("forward_head: tied head needs the embedding bucket");
  }
  const BlockBucket& wsrc = own_weight ? head : *tied_embedding;
  const char* wname = own_weight ? "lm_head.weight" : "tok_embed";
  if (wsrc.fmt() != head.fmt()) throw std::invalid_argument("forward_head: format mismatch");
  if (head.fmt() == ElemFormat::kF64) {
    return head_impl<double>(head, wsrc.values<double>(wname), hidden, spec);
  }
  return head_impl<float>(head, wsrc.values<float>(wname), hidden, spec);
}

double loss(const TensorBuf& logits, std::span<const std::int32_t> targets) {
  if (logits.shape().size() != 3) throw std::invalid_argument("loss: logits must be [batch, seq, vocab]");
  const std::size_t v = logits.shape()[2];
  if (logits.numel() / v != targets.size()) throw std::invalid_argument("loss: target count mismatch");
  for (auto t : targets) {
    if (t < 0 || static_cast<std::size_t>(t) >= v) throw std::invalid_argument("loss: target out of range");
  }
  return logits.fmt() == ElemFormat::kF64 ? loss_impl<double>(logits, targets)
                                          : loss_impl<float>(logits, targets);
}

TensorBuf forward_embedding(const ModelParams& params, const TokenBatch& tokens) {
  return forward_embedding(params.embedding, tokens, params.spec);
}

TensorBuf forward_head(const ModelParams& params, const TensorBuf& hidden) {
  return forward_head(params.head, &params.embedding, hidden, params.spec);
}

TensorBuf forward_logits(const ModelParams& params, const TokenBatch& tokens) {
  TensorBuf h = forward_embedding(params, tokens);
  for (const auto& blk : params.blocks) h = forward_block(blk, h, params.spec);
  return forward_head(params, h);
}

double forward_loss(const ModelParams& params, const TokenBatch& tokens) {
  return loss(forward_logits(params, tokens), tokens.targets);
}

std::size_t activation_working_set_bytes(const ModelSpec& spec, std::size_t batch, ElemFormat fmt) {
  const std::size_t rows = batch * spec.seq_len;
  const std::size_t d = spec.dim;
  const std::size_t hidden = rows * d;
  const std::size_t block_scratch = hidden                                      // norm
                                    + 3 * hidden                                // qkv
                                    + batch * spec.n_heads * spec.seq_len * spec.seq_len  // scores
                                    + hidden                                    // ctx
                                    + hidden                                    // proj
                                    + rows * spec.mlp_dim();                    // mlp
  const std::size_t head_scratch = hidden + rows * spec.vocab;
  const std::size_t elems = 4 * hidden + std::max(block_scratch, head_scratch);
  return elems * numerics::bytes_per_elem(fmt);
}

}  // namespace zo2::model
