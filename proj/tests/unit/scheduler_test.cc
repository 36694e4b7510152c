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

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "zo2/numerics/elem_format.h"
#include "zo2/scheduler/cost_model.h"
#include "zo2/scheduler/executor.h"
#include "zo2/scheduler/task_graph.h"
#include "zo2/scheduler/throughput.h"
#include "zo2/scheduler/timeline.h"

namespace zo2::scheduler {
namespace {

// Longest path by exhaustive recursion over every path, memo keyed by node.
// Edges are the graph's dependencies plus consecutive tasks on each lane.
double critical_path(const TaskGraph& g) {
  std::vector<std::vector<std::size_t>> preds(g.size());
  for (const auto& e : g.edges()) preds[e.succ].push_back(e.pred);
  for (Lane lane : {Lane::kCompute, Lane::kUpload, Lane::kOffload}) {
    const auto order = g.lane_order(lane);
    for (std::size_t i = 1; i < order.size(); ++i) preds[order[i]].push_back(order[i - 1]);
  }
  std::map<std::size_t, double> memo;
  std::function<double(std::size_t)> finish = [&](std::size_t t) -> double {
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    double start = 0;
    for (std::size_t p : preds[t]) start = std::max(start, finish(p));
    return memo[t] = start + g.task(t).duration;
  };
  double best = 0;
  for (std::size_t t = 0; t < g.size(); ++t) best = std::max(best, finish(t));
  return best;
}

double duration_sum(const TaskGraph& g) {
  double s = 0;
  for (const auto& t : g.tasks()) s += t.duration;
  return s;
}

std::size_t idx(const TaskGraph& g, Lane lane, TaskKind kind, std::size_t module) {
  auto f = g.find({lane, kind, module, 0, 0});
  EXPECT_TRUE(f.has_value());
  return *f;
}

TEST(CostModel, UniformAndValidate) {
  const auto c = CostModel::uniform(4, 1.0, 3.0, 0.5, 0.25);
  EXPECT_EQ(c.n_blocks(), 4u);
  EXPECT_EQ(c.dual_forward_block(2), 2.0);
  EXPECT_EQ(c.dual_forward_embed(), 1.0);
  EXPECT_EQ(c.dual_forward_head(), 0.5);
  EXPECT_EQ(c.transfer_time(c.block_bytes[0]), 3.0);
  EXPECT_NO_THROW(c.validate());
  auto bad = c;
  bad.bandwidth = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = c;
  bad.block_forward[1] = -1;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(CostModel, FromHardwareScalesWithShape) {
  model::ModelSpec s;
  s.n_blocks = 4;
  s.dim = 256;
  s.n_heads = 4;
  s.vocab = 1000;
  s.seq_len = 128;
  const HardwareProfile hw;
  const auto c1 = cost_from_hardware(s, 1, hw);
  const auto c2 = cost_from_hardware(s, 2, hw);
  EXPECT_EQ(c1.n_blocks(), 4u);
  EXPECT_EQ(c1.block_bytes[0], 4.0 * (12 * 256 * 256 + 13 * 256));
  EXPECT_GT(c2.block_forward[0], c1.block_forward[0]);
  EXPECT_EQ(c2.block_bytes[0], c1.block_bytes[0]);
  EXPECT_EQ(c1.bandwidth, hw.link_bandwidth);
}

TEST(BuildPlan, HandComputedMakespan) {
  // dual forward 2, transfer 3, embedding and head dual forwards 1.
  const auto c = CostModel::uniform(4, 1.0, 3.0, 0.5, 0.5);
  TaskGraph g = build_plan(c, {});
  const Timeline tl = simulate(g);
  EXPECT_DOUBLE_EQ(tl.makespan, 17.0);
  EXPECT_DOUBLE_EQ(critical_path(g), 17.0);
  const auto u4 = idx(g, Lane::kUpload, TaskKind::kUpload, 4);
  EXPECT_DOUBLE_EQ(tl.events[u4].t_start, 9.0);
  const auto ce = idx(g, Lane::kCompute, TaskKind::kDualForward, 0);
  EXPECT_DOUBLE_EQ(tl.events[ce].t_start, 0.0);
  const auto ch = idx(g, Lane::kCompute, TaskKind::kDualForward, 5);
  EXPECT_DOUBLE_EQ(tl.events[ch].t_start, 14.0);
}

TEST(BuildPlan, EdgesFollowRules) {
  const auto c = CostModel::uniform(5, 1.0, 1.0);
  PlanOptions o;
  o.slots = 2;
  TaskGraph g = build_plan(c, o);
  for (std::size_t i = 1; i <= 5; ++i) {
    const auto u = idx(g, Lane::kUpload, TaskKind::kUpload, i);
    const auto cc = idx(g, Lane::kCompute, TaskKind::kDualForward, i);
    const auto off = idx(g, Lane::kOffload, TaskKind::kOffload, i);
    EXPECT_TRUE(g.has_edge(u, cc));
    EXPECT_TRUE(g.has_edge(cc, off));
    if (i > 1) {
      EXPECT_TRUE(g.has_edge(idx(g, Lane::kUpload, TaskKind::kUpload, i - 1), u));
      EXPECT_TRUE(g.has_edge(idx(g, Lane::kOffload, TaskKind::kOffload, i - 1), off));
    }
    if (i > 2) {
      EXPECT_TRUE(g.has_edge(idx(g, Lane::kOffload, TaskKind::kOffload, i - 2), u));
    }
  }
  EXPECT_FALSE(g.find({Lane::kUpload, TaskKind::kUpload, 0, 0, 0}).has_value());
}

TEST(BuildPlan, ReuploadWaitsForOwnOffloadWhenFewBlocks) {
  const auto c = CostModel::uniform(2, 1.0, 1.0);
  for (auto mode : {UpdateMode::kDeferred, UpdateMode::kNaive}) {
    PlanOptions o;
    o.iterations = 2;
    o.update_mode = mode;
    TaskGraph g = build_plan(c, o);
    const Timeline tl = simulate(g);
    for (std::size_t a = 0; a < g.size(); ++a) {
      const auto& ka = g.task(a).key;
      if (ka.kind != TaskKind::kOffload) continue;
      for (std::size_t b = a + 1; b < g.size(); ++b) {
        const auto& kb = g.task(b).key;
        if (kb.kind == TaskKind::kUpload && kb.module == ka.module) {
          EXPECT_LE(tl.events[a].t_end, tl.events[b].t_start);
          break;
        }
      }
    }
  }
}

TEST(BuildPlan, NaiveAddsSecondCycle) {
  const auto c = CostModel::uniform(3, 1.0, 1.0);
  PlanOptions o;
  o.update_mode = UpdateMode::kNaive;
  TaskGraph g = build_plan(c, o);
  std::size_t uploads = 0;
  for (const auto& t : g.tasks()) uploads += t.key.kind == TaskKind::kUpload;
  EXPECT_EQ(uploads, 6u);
  EXPECT_TRUE(g.find({Lane::kCompute, TaskKind::kUpdate, 2, 0, 1}).has_value());
}

TEST(BuildPlan, RejectsForwardReferences) {
  TaskGraph g;
  g.add({Lane::kCompute, TaskKind::kDualForward, 0}, 1.0);
  EXPECT_THROW(g.add({Lane::kCompute, TaskKind::kDualForward, 1}, 1.0, {3}), std::exception);
  PlanOptions one;
  one.slots = 1;
  EXPECT_THROW(build_plan(CostModel::uniform(2, 1, 1), one), std::invalid_argument);
  one.overlap = false;
  EXPECT_NO_THROW(build_plan(CostModel::uniform(2, 1, 1), one));
}

TEST(Sequential, MakespanIsDurationSum) {
  const auto c = CostModel::uniform(6, 1.25, 0.75, 0.5, 0.5);
  TaskGraph g = build_plan(c, {});
  TaskGraph s = g.serialized();
  EXPECT_DOUBLE_EQ(simulate(s).makespan, duration_sum(g));
  EXPECT_DOUBLE_EQ(run_sequential(g, Backend::kSimulated).makespan, duration_sum(g));
  PlanOptions no;
  no.overlap = false;
  EXPECT_DOUBLE_EQ(simulate(build_plan(c, no)).makespan, duration_sum(g));
}

TEST(Validator, HandBuiltCounterexample) {
  const auto c = CostModel::uniform(4, 1.0, 3.0, 0.5, 0.5);
  TaskGraph g = build_plan(c, {});
  Timeline tl = simulate(g);
  ASSERT_TRUE(validate_timeline(tl, g).empty());
  const auto u2 = idx(g, Lane::kUpload, TaskKind::kUpload, 2);
  const auto c2 = idx(g, Lane::kCompute, TaskKind::kDualForward, 2);
  // C(W2) at [5.5, 7.5] while U(W2) ends at 6; C(W1) ends at 5.
  tl.events[c2].t_start = 5.5;
  tl.events[c2].t_end = 7.5;
  const auto v = validate_timeline(tl, g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::kDependency);
  EXPECT_EQ(v[0].pred, u2);
  EXPECT_EQ(v[0].succ, c2);
}

TEST(Validator, LaneOverlapAndNegativeDuration) {
  TaskGraph g;
  g.add({Lane::kUpload, TaskKind::kUpload, 1}, 1.0);
  g.add({Lane::kUpload, TaskKind::kUpload, 2}, 1.0);
  Timeline tl = simulate(g);
  tl.events[1].t_start = 0.5;
  tl.events[1].t_end = 1.5;
  auto v = validate_timeline(tl, g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::kLaneOverlap);
  tl = simulate(g);
  tl.events[0].t_end = -1;
  v = validate_timeline(tl, g);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, Violation::Kind::kNegativeDuration);
}

CostModel random_cost(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nb(0, 8);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  CostModel c;
  const int n = nb(rng);
  for (int i = 0; i < n; ++i) {
    c.block_forward.push_back(u(rng));
    c.block_bytes.push_back(u(rng) * 100);
  }
  c.embed_forward = u(rng);
  c.head_forward = u(rng);
  c.bandwidth = 10.0 + 20.0 * u(rng);
  c.latency = 0.2 * u(rng);
  c.update_time = 0.1 * u(rng);
  c.alloc_latency = 0.2 * u(rng);
  c.codec_time_per_byte = 0.001 * u(rng);
  c.amp_speedup = 1.0 + u(rng);
  return c;
}

PlanOptions random_options(std::mt19937_64& rng) {
  PlanOptions o;
  o.iterations = 1 + rng() % 3;
  o.overlap = rng() % 4 != 0;
  o.slots = (o.overlap ? 2 : 1) + rng() % 3;
  o.update_mode = rng() % 3 == 0 ? UpdateMode::kNaive : UpdateMode::kDeferred;
  o.arena_reuse = rng() % 3 != 0;
  switch (rng() % 4) {
    case 1: o.codec = numerics::ElemFormat::kBF16; break;
    case 2: o.codec = numerics::ElemFormat::kF8E4M3; break;
    default: break;
  }
  o.amp = rng() % 4 == 0;
  return o;
}

TEST(Fuzz, ThousandCostModelsBothBackends) {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = random_cost(rng);
    const auto o = random_options(rng);
    TaskGraph g = build_plan(c, o);
    const Timeline sim = run_schedule(g, Backend::kSimulated, {.skip_validation = true});
    ASSERT_TRUE(validate_timeline(sim, g).empty()) << "trial " << trial;
    const Timeline thr = run_schedule(g, Backend::kThreaded, {.skip_validation = true});
    ASSERT_TRUE(validate_timeline(thr, g).empty()) << "trial " << trial;
    const double seq = simulate(g.serialized()).makespan;
    ASSERT_LE(sim.makespan, seq + 1e-9) << "trial " << trial;
    ASSERT_NEAR(sim.makespan, critical_path(g), 1e-9 * std::max(1.0, seq)) << "trial " << trial;
  }
}

TEST(Fuzz, EdgeFlipsAreDetected) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = random_cost(rng);
    if (c.n_blocks() == 0) c = CostModel::uniform(3, 1.0, 2.0, 0.5, 0.5);
    for (auto& b : c.block_forward) b += 0.5;
    TaskGraph g = build_plan(c, random_options(rng));
    const auto edges = g.edges();
    ASSERT_FALSE(edges.empty());
    const auto e = edges[rng() % edges.size()];
    Timeline tl = simulate(g);
    auto& ev = tl.events[e.succ];
    const double shift = ev.t_start - (tl.events[e.pred].t_end - 0.25);
    ev.t_start -= shift;
    ev.t_end -= shift;
    const auto v = validate_timeline(tl, g);
    const bool named = std::any_of(v.begin(), v.end(), [&](const Violation& x) {
      return x.pred == e.pred && x.succ == e.succ && x.kind == Violation::Kind::kDependency;
    });
    EXPECT_TRUE(named) << "trial " << trial << " edge " << e.pred << "->" << e.succ;
  }
}

TEST(Monotonicity, SlowerTasksNeverShrinkMakespan) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_cost(rng);
    const auto o = random_options(rng);
    const double base = simulate(build_plan(c, o)).makespan;
    auto slower = c;
    for (auto& b : slower.block_forward) b *= 1.5;
    EXPECT_GE(simulate(build_plan(slower, o)).makespan, base - 1e-9);
    auto narrower = c;
    narrower.bandwidth *= 0.5;
    EXPECT_GE(simulate(build_plan(narrower, o)).makespan, base - 1e-9);
  }
}

TEST(Threaded, LaneOrderMatchesSimulated) {
  const auto c = CostModel::uniform(6, 1.0, 1.5, 0.5, 0.5);
  PlanOptions o;
  o.iterations = 2;
  TaskGraph g = build_plan(c, o);
  std::vector<std::size_t> ran;
  std::mutex mu;
  for (std::size_t i = 0; i < g.size(); ++i)
    g.set_body(i, [&, i] {
      std::lock_guard lock(mu);
      ran.push_back(i);
    });
  const Timeline thr = run_schedule(g, Backend::kThreaded, {.time_scale = 1e-4});
  EXPECT_EQ(thr.time_unit, "s");
  EXPECT_EQ(ran.size(), g.size());
  for (Lane lane : {Lane::kCompute, Lane::kUpload, Lane::kOffload}) {
    const auto order = g.lane_order(lane);
    std::vector<std::size_t> seen;
    for (std::size_t t : ran)
      if (g.task(t).key.lane == lane) seen.push_back(t);
    EXPECT_EQ(seen, order);
    for (std::size_t i = 1; i < order.size(); ++i)
      EXPECT_LE(thr.events[order[i - 1]].t_end, thr.events[order[i]].t_start);
  }
  // With wall time proportional to duration the threaded run overlaps lanes too.
  EXPECT_LT(thr.makespan, duration_sum(g) * 1e-4);
}

TEST(Threaded, BodyExceptionPropagates) {
  TaskGraph g;
  const auto a = g.add({Lane::kCompute, TaskKind::kDualForward, 0}, 1.0);
  const auto b = g.add({Lane::kOffload, TaskKind::kOffload, 1}, 1.0, {a});
  bool ran_b = false;
  g.set_body(a, [] { throw std::runtime_error("boom"); });
  g.set_body(b, [&] { ran_b = true; });
  EXPECT_THROW(run_schedule(g, Backend::kThreaded), std::runtime_error);
  EXPECT_FALSE(ran_b);
}

TEST(Throughput, NearParityWhenCommFitsUnderCompute) {
  for (double comm : {0.5, 1.0, 2.0}) {  // dual forward costs 2
    const auto c = CostModel::uniform(16, 1.0, comm, 0.5, 0.5);
    const double ratio = iteration_time(c, EngineMode::kMezo) / iteration_time(c, EngineMode::kZo2);
    EXPECT_GE(ratio, 0.97) << "comm " << comm;
    EXPECT_LE(ratio, 1.0 + 1e-12);
  }
}

TEST(Throughput, CommBoundRegimeDrops) {
  const auto c = CostModel::uniform(16, 1.0, 4.0, 0.5, 0.5);
  const double ratio = iteration_time(c, EngineMode::kMezo) / iteration_time(c, EngineMode::kZo2);
  EXPECT_LT(ratio, 0.8);
  EXPECT_GT(ratio, 0.4);
}

TEST(Throughput, PredictAndTimelineOutput) {
  const auto c = CostModel::uniform(4, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(predict_throughput(100, c, EngineMode::kMezo), 100.0 / iteration_time(c, EngineMode::kMezo));
  PlanOptions bf;
  bf.codec = numerics::ElemFormat::kBF16;
  auto slow = CostModel::uniform(4, 1.0, 6.0);
  EXPECT_LT(iteration_time(slow, EngineMode::kZo2Amp, bf), iteration_time(slow, EngineMode::kZo2));
  TaskGraph g = build_plan(c, {});
  std::ostringstream os;
  write_timeline_jsonl(simulate(g), os);
  const std::string s = os.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), g.size());
  EXPECT_NE(s.find("\"lane\""), std::string::npos);
  EXPECT_NE(s.find("\"t_start\""), std::string::npos);
}

}  // namespace
}  // namespace zo2::scheduler
