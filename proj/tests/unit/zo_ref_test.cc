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

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "unit/test_util.h"
#include "zo2/common/errors.h"
#include "zo2/model/forward.h"
#include "zo2/numerics/rng.h"
#include "zo2/zo_ref/mezo.h"
#include "zo2/zo_ref/perturb.h"

namespace zo2::zo {
namespace {

using numerics::ElemFormat;

SegmentView view_of(std::vector<double>& v) {
  return {reinterpret_cast<std::byte*>(v.data()), v.size(), ElemFormat::kF64};
}

double ulp_at(double m) {
  return std::nextafter(m, std::numeric_limits<double>::infinity()) - m;
}

TEST(ProjectedGradient, TextbookValue) {
  // (1.2 - 0.8) / 0.2 in decimal. Binary64 inputs round this to
  // 1.9999999999999996; the assertion keeps the exact requirement.
  EXPECT_EQ(projected_gradient(1.2, 0.8, 0.1), 2.0);
}

TEST(ProjectedGradient, ExactlyRepresentableInputs) {
  EXPECT_EQ(projected_gradient(1.25, 0.75, 0.125), 2.0);
  EXPECT_EQ(projected_gradient(3.0, 3.0, 1e-3), 0.0);
  EXPECT_EQ(projected_gradient(0.5, 1.0, 0.25), -1.0);
}

TEST(Axpy, CounterLawAcrossSegments) {
  std::vector<double> a(37, 0.0), b(91, 0.0);
  const std::vector<SegmentView> segs = {view_of(a), view_of(b)};
  const RngState s{12, numerics::streams::kPerturb, 5};
  const RngState after = axpy_gaussian(segs, 1.0, s);
  auto [ref, ref_after] = numerics::gaussian_fill(s, a.size() + b.size());
  EXPECT_EQ(after, ref_after);
  auto z = ref.as<double>();
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], z[i]);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b[i], z[a.size() + i]);
}

TEST(Axpy, F32Segments) {
  std::vector<float> a(10, 1.0f);
  SegmentView v{reinterpret_cast<std::byte*>(a.data()), a.size(), ElemFormat::kF32};
  const RngState s{3, 0, 0};
  axpy_gaussian(v, 0.5, s);
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(a[i], 1.0f + static_cast<float>(0.5 * numerics::gaussian_at(3, 0, i)));
  std::vector<std::uint16_t> h(4);
  SegmentView hv{reinterpret_cast<std::byte*>(h.data()), h.size(), ElemFormat::kF16};
  EXPECT_THROW(axpy_gaussian(hv, 1.0, s), std::invalid_argument);
}

TEST(Axpy, EmptySegmentsConsumeNothing) {
  const RngState s{1, 0, 9};
  EXPECT_EQ(axpy_gaussian(std::span<const SegmentView>{}, 1.0, s), s);
}

TEST(Perturb, RestoreDriftWithinFourUlp) {
  const auto spec = testing::toy_spec(4, 32);
  for (double eps : {1e-3, 1e-2, 1.0}) {
    auto p = testing::toy_params(spec, 11);
    const auto orig = p;
    const RngState s = perturbation_state(77, 3);
    perturb_all(p, eps, s);
    perturb_all(p, -2.0 * eps, s);
    perturb_all(p, eps, s);
    RngState zs = s;
    std::size_t worst_ulps = 0;
    for (model::ModuleId m = 0; m < p.module_count(); ++m) {
      auto got = p.module(m).buf().as<double>();
      auto want = orig.module(m).buf().as<double>();
      for (std::size_t i = 0; i < got.size(); ++i) {
        const double z = numerics::next_gaussian(zs);
        const double mag = std::max(std::abs(want[i]), std::abs(want[i]) + eps * std::abs(z));
        const double d = std::abs(got[i] - want[i]) / ulp_at(mag);
        ASSERT_LE(d, 4.0) << "module " << m << " elem " << i << " eps " << eps;
        worst_ulps = std::max(worst_ulps, static_cast<std::size_t>(d));
      }
    }
  }
}

TEST(Perturb, TraceRecordsOneEntryPerSegment) {
  const auto spec = testing::toy_spec(2, 16);
  auto p = testing::toy_params(spec, 1);
  OpTrace trace;
  const RngState s{5, 0, 0};
  const RngState end = perturb_all(p, 0.1, s, &trace);
  std::size_t nseg = 0;
  for (model::ModuleId m = 0; m < p.module_count(); ++m) nseg += p.module(m).segments().size();
  const auto recs = trace.records();
  ASSERT_EQ(recs.size(), nseg);
  EXPECT_EQ(recs.front().state, s);
  EXPECT_EQ(end.counter, p.param_count());
  EXPECT_EQ(trace.for_segment(1, 0).size(), 1u);
}

TEST(MezoStep, ConstantLossIsNoOp) {
  std::vector<double> theta = {0.1, -0.2, 0.3};
  const auto before = theta;
  const std::vector<SegmentView> segs = {view_of(theta)};
  const auto r = mezo_step_segments(segs, [] { return 4.0; }, 0.5, 0.1, RngState{1, 0, 0});
  EXPECT_EQ(r.g, 0.0);
  // +0.5, -1.0, +0.5 with a power-of-two eps restores bit-exactly here.
  EXPECT_EQ(std::memcmp(theta.data(), before.data(), sizeof(double) * 3), 0);
}

TEST(MezoStep, NonFiniteLossThrowsAfterRestore) {
  std::vector<double> theta = {1.0, 2.0};
  const std::vector<SegmentView> segs = {view_of(theta)};
  int calls = 0;
  auto bad = [&] { return ++calls == 2 ? std::numeric_limits<double>::quiet_NaN() : 1.0; };
  EXPECT_THROW(mezo_step_segments(segs, bad, 0.25, 0.1, RngState{1, 0, 0}), NonFiniteLoss);
  EXPECT_NEAR(theta[0], 1.0, 1e-15);
  EXPECT_NEAR(theta[1], 2.0, 1e-15);
}

TEST(MezoStep, UpdateUsesSameZ) {
  // Linear loss L = c.theta: l+ - l- = 2 eps c.z, so g = c.z and the update is -lr (c.z) z.
  std::vector<double> theta(8, 0.0), c = {1, -2, 3, 0.5, 0, 1, -1, 2};
  const std::vector<SegmentView> segs = {view_of(theta)};
  auto loss = [&] {
    double s = 0;
    for (std::size_t i = 0; i < 8; ++i) s += c[i] * theta[i];
    return s;
  };
  const RngState st{21, 0, 0};
  const auto r = mezo_step_segments(segs, loss, 1e-3, 0.1, st);
  double cz = 0;
  for (std::size_t i = 0; i < 8; ++i) cz += c[i] * numerics::gaussian_at(21, 0, i);
  EXPECT_NEAR(r.g, cz, 1e-9);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(theta[i], -0.1 * r.g * numerics::gaussian_at(21, 0, i), 1e-12);
}

TEST(MezoStep, RgeAlignsWithGradientOnQuadratic) {
  const std::size_t n = 16, samples = 10000;
  const double eps = 1e-4;
  std::vector<double> theta0(n), target(n), grad(n);
  RngState init{5, numerics::streams::kInit, 0};
  for (std::size_t i = 0; i < n; ++i) {
    theta0[i] = numerics::next_gaussian(init);
    target[i] = numerics::next_gaussian(init);
    grad[i] = theta0[i] - target[i];
  }
  std::vector<double> theta = theta0;
  const std::vector<SegmentView> segs = {view_of(theta)};
  auto loss = [&] {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += 0.5 * (theta[i] - target[i]) * (theta[i] - target[i]);
    return s;
  };
  std::vector<double> mean(n, 0.0);
  for (std::size_t k = 0; k < samples; ++k) {
    theta = theta0;
    const RngState s = perturbation_state(2024, k);
    const auto r = mezo_step_segments(segs, loss, eps, 1e-3, s);
    RngState zs = s;
    for (std::size_t i = 0; i < n; ++i) mean[i] += r.g * numerics::next_gaussian(zs) / samples;
  }
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += mean[i] * grad[i];
    na += mean[i] * mean[i];
    nb += grad[i] * grad[i];
  }
  EXPECT_GE(dot / std::sqrt(na * nb), 0.95);
}

TEST(MezoStep, ModelStepMatchesManualSequence) {
  const auto spec = testing::toy_spec(2, 16);
  auto p = testing::toy_params(spec, 3);
  auto manual = p;
  const auto data = testing::random_dataset(spec, 8, 4);
  ZOConfig cfg;
  cfg.eps = 1e-3;
  cfg.lr = 1e-2;
  cfg.seed = 9;
  const auto batch = model::sample_batch(data, cfg.seed, 0, 2);
  const auto r = mezo_step(p, batch, cfg, 0);

  const RngState s = perturbation_state(9, 0);
  perturb_all(manual, 1e-3, s);
  const double lp = model::forward_loss(manual, batch);
  perturb_all(manual, -2e-3, s);
  const double lm = model::forward_loss(manual, batch);
  perturb_all(manual, 1e-3, s);
  const double g = (lp - lm) / 2e-3;
  update_all(manual, 1e-2, g, s);
  EXPECT_EQ(r.loss_plus, lp);
  EXPECT_EQ(r.loss_minus, lm);
  EXPECT_EQ(r.g, g);
  EXPECT_TRUE(p == manual);
}

TEST(TrainRef, DeterministicAndLearns) {
  const auto spec = testing::toy_spec(1, 16);
  const auto data = testing::random_dataset(spec, 16, 2);
  ZOConfig cfg;
  cfg.steps = 30;
  cfg.lr = 1e-3;
  cfg.seed = 4;
  cfg.batch_size = 2;
  const auto a = train_ref(testing::toy_params(spec, 1), data, cfg);
  const auto b = train_ref(testing::toy_params(spec, 1), data, cfg);
  EXPECT_TRUE(a.params == b.params);
  ASSERT_EQ(a.steps.size(), 30u);
  for (std::size_t i = 0; i < 30; ++i) EXPECT_EQ(a.steps[i].g, b.steps[i].g);
  cfg.seed = 5;
  EXPECT_FALSE(train_ref(testing::toy_params(spec, 1), data, cfg).params == a.params);
}

TEST(ZOConfig, Validation) {
  ZOConfig c;
  EXPECT_NO_THROW(c.validate());
  c.eps = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.lr = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.steps = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace zo2::zo
