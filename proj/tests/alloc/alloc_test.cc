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

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <new>

#include "zo2/engine/dual_forward.h"
#include "zo2/engine/rng_state_manager.h"
#include "zo2/model/params.h"
#include "zo2/zo_ref/mezo.h"
#include "zo2/zo_ref/perturb.h"

namespace {

std::atomic<bool> g_counting{false};
std::atomic<std::size_t> g_count{0};
std::atomic<std::size_t> g_bytes{0};
std::atomic<std::size_t> g_largest{0};

void note(std::size_t n) {
  if (!g_counting.load(std::memory_order_relaxed)) return;
  g_count.fetch_add(1);
  g_bytes.fetch_add(n);
  std::size_t cur = g_largest.load();
  while (n > cur && !g_largest.compare_exchange_weak(cur, n)) {
  }
}

}  // namespace

void* operator new(std::size_t n) {
  note(n);
  if (void* p = std::malloc(n ? n : 1)) return p;
  throw std::bad_alloc();
}
void* operator new[](std::size_t n) { return operator new(n); }
void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }
void operator delete[](void* p, std::size_t) noexcept { std::free(p); }

namespace zo2 {
namespace {

struct Counter {
  Counter() {
    g_count = 0;
    g_bytes = 0;
    g_largest = 0;
    g_counting = true;
  }
  ~Counter() { g_counting = false; }
};

model::ModelParams big_params() {
  model::ModelSpec s;
  s.n_blocks = 1;
  s.dim = 64;
  s.n_heads = 4;
  s.vocab = 64;
  s.seq_len = 8;
  return model::init_params(s, {1, numerics::streams::kInit, 0}, numerics::ElemFormat::kF64);
}

TEST(NoParameterShapedAllocation, AxpyGaussian) {
  auto p = big_params();
  auto segs = p.blocks[0].views();
  const std::size_t bytes = p.blocks[0].size_bytes();
  ASSERT_GT(bytes, 300000u);
  {
    Counter c;
    auto st = zo::axpy_gaussian(segs, 1e-3, {3, 0, 0});
    st = zo::axpy_gaussian(segs, -2e-3, {3, 0, 0});
    zo::axpy_gaussian(segs, 1e-3, {3, 0, 0});
  }
  EXPECT_EQ(g_count.load(), 0u);
}

TEST(NoParameterShapedAllocation, MezoStepSegments) {
  auto p = big_params();
  auto segs = p.blocks[0].views();
  {
    Counter c;
    int calls = 0;
    zo::mezo_step_segments(segs, [&] { return ++calls == 1 ? 1.0 : 0.5; }, 1e-3, 1e-2, {5, 0, 0});
  }
  EXPECT_EQ(g_count.load(), 0u);
}

TEST(NoParameterShapedAllocation, DualForwardWithDeferredUpdate) {
  auto p = big_params();
  const std::size_t bytes = p.blocks[0].size_bytes();
  engine::RngStateManager mgr(3);
  auto segs = p.blocks[0].views();
  auto fwd = [](int x) { return x; };
  engine::DualForwardArgs a;
  a.module = 1;
  a.eps = 1e-3;
  a.lr = 1e-2;
  mgr.begin_iteration(11);
  engine::dual_forward<int>(segs, a, mgr, engine::PendingGradient{}, fwd, 0, 0);
  mgr.end_iteration();
  mgr.begin_iteration(12);
  {
    Counter c;
    engine::dual_forward<int>(segs, a, mgr, engine::PendingGradient{0.5, true}, fwd, 1, 2);
  }
  // Only bookkeeping; nothing close to a block's size.
  EXPECT_LT(g_largest.load(), bytes / 64);
  EXPECT_LT(g_bytes.load(), 4096u);
}

}  // namespace
}  // namespace zo2
