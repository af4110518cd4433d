// Copyright 2026 The Earshot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "earshot/errors.hpp"
#include "earshot/losses.hpp"
#include "earshot/scene.hpp"
#include "support/oracles.hpp"

namespace earshot {
namespace {

using testing::random_spectrogram;

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return norm(d) / std::max(norm(a), norm(b));
}

TEST(LossD, Examples) {
  const StftConfig c;
  const auto a = random_spectrogram(c, 64, 1);
  EXPECT_EQ(loss_d(a, a), 0.0);

  const StftConfig tiny{6, 3, 6};  // 4 bins
  ComplexSpectrogram p(tiny, 1), t(tiny, 1);
  for (int f = 0; f < 4; ++f) p.set(f, 0, {1.0, 0.0});
  EXPECT_DOUBLE_EQ(loss_d(p, t), 2.0);

  const auto b = random_spectrogram(c, 64, 2);
  double acc = 0.0;
  for (int f = 0; f < 257; ++f)
    for (int u = 0; u < 64; ++u) acc += std::norm(a.at(f, u) - b.at(f, u));
  EXPECT_NEAR(loss_d(a, b), std::sqrt(acc), 1e-12 * std::sqrt(acc));
  EXPECT_THROW(loss_d(a, random_spectrogram(c, 63, 1)), std::invalid_argument);
}

TEST(LossD, TriangleInequality) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto a = random_spectrogram(StftConfig{}, 4, 3 * s);
    const auto b = random_spectrogram(StftConfig{}, 4, 3 * s + 1);
    const auto c = random_spectrogram(StftConfig{}, 4, 3 * s + 2);
    EXPECT_LE(loss_d(a, c), loss_d(a, b) + loss_d(b, c) + 1e-12);
  }
}

TEST(LossRl, Examples) {
  const StftConfig c;
  const auto tl = random_spectrogram(c, 5, 1), tr = random_spectrogram(c, 5, 2);
  EXPECT_EQ(loss_rl(tl, tr, tl, tr), 0.0);
  auto pr = tr;
  for (auto& v : pr.re_values()) v += 1.0;
  EXPECT_EQ(loss_rl(tl, pr, tl, tr), loss_d(pr, tr));
  const auto pl = random_spectrogram(c, 5, 3);
  EXPECT_DOUBLE_EQ(loss_rl(pl, pr, tl, tr), loss_rl(pr, pl, tr, tl));
}

TEST(TotalLoss, Examples) {
  const LossWeights w{5.0, {2.0, 10}};
  EXPECT_EQ(total_loss({0, 0, 0}, w, 0), 0.0);
  EXPECT_EQ(total_loss({1.0, 1.0, 123.0}, w, 10), 6.0);
  EXPECT_EQ(total_loss({1.0, 1.0, 123.0}, w, 50), 6.0);
  EXPECT_EQ(total_loss({0.0, 0.0, 0.5}, w, 0), 1.0);
}

TEST(TotalLoss, MonotoneAndLinear) {
  const LossWeights w{5.0, {2.0, 100}};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const LossParts p{d(rng), d(rng), d(rng)};
    const long t = static_cast<long>(rng() % 150);
    const double base = total_loss(p, w, t);
    EXPECT_GE(total_loss({p.diff + 0.1, p.channels, p.prior_raw}, w, t), base);
    EXPECT_GE(total_loss({p.diff, p.channels + 0.1, p.prior_raw}, w, t), base);
    EXPECT_GE(total_loss({p.diff, p.channels, p.prior_raw + 0.1}, w, t), base);
    EXPECT_NEAR(total_loss({p.diff, p.channels + 1.0, p.prior_raw}, w, t) - base, 5.0, 1e-12);
    EXPECT_NEAR(total_loss({p.diff, p.channels, p.prior_raw + 1.0}, w, t) - base,
                anneal_weight(t, w.anneal), 1e-12);
  }
}

TEST(FiniteDiff, Examples) {
  const auto sq = finite_diff_grad([](std::span<const double> p) { return p[0] * p[0]; },
                                   std::vector<double>{3.0}, 1e-4);
  EXPECT_NEAR(sq[0], 6.0, 1e-7);
  const auto ones = finite_diff_grad(
      [](std::span<const double> p) {
        double s = 0.0;
        for (double x : p) s += x;
        return s;
      },
      std::vector<double>{0.1, -4.0, 7.5, 1e3}, 1e-3);
  for (double g : ones) EXPECT_NEAR(g, 1.0, 1e-9);
  EXPECT_THROW(finite_diff_grad([](std::span<const double>) { return NAN; }, std::vector<double>{1.0}, 1e-3),
               NumericError);
  EXPECT_THROW(finite_diff_grad([](std::span<const double>) { return 0.0; }, std::vector<double>{1.0}, 0.0),
               std::invalid_argument);
}

EncoderParams random_heads(std::uint64_t seed, double scale) {
  auto p = EncoderParams::init(EncoderConfig{}, seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-scale, scale);
  auto flat = flatten_heads(p);
  for (auto& v : flat) v = d(rng);
  unflatten_heads(flat, p);
  return p;
}

FeatureMap random_features(std::uint64_t seed) {
  FeatureMap v(32, 14, 28);
  const auto x = testing::random_signal(v.size(), seed);
  std::copy(x.begin(), x.end(), v.values().begin());
  return v;
}

TEST(PriorGradient, AnalyticMatchesFiniteDifferences) {
  const auto targets = logistic_targets(PriorConfig{});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto params = random_heads(s, 0.5);
    const auto v = random_features(100 + s);
    const double lambda = 0.5 + 0.25 * s;
    const auto analytic = prior_loss_gradient(v, params, targets, lambda);
    const auto numeric = finite_diff_grad(
        [&](std::span<const double> h) { return prior_loss_of_heads(v, h, params, targets, lambda); },
        flatten_heads(params), 1e-5);
    EXPECT_LT(relative_error(analytic, numeric), 1e-6) << s;
  }
}

TEST(PriorGradient, FlattenRoundTripAndLossAgreement) {
  const auto p = random_heads(7, 1.0);
  const auto flat = flatten_heads(p);
  EXPECT_EQ(flat.size(), 2u * (32 + 14 * 28));
  EncoderParams q = EncoderParams::init(EncoderConfig{}, 99);
  unflatten_heads(flat, q);
  EXPECT_EQ(flatten_heads(q), flat);
  const auto v = random_features(8);
  const auto targets = logistic_targets(PriorConfig{});
  const auto a = attention_from_heads(v, p);
  EXPECT_NEAR(prior_loss_of_heads(v, flat, p, targets, 2.0), prior_loss(a.left, a.right, targets, 2.0),
              1e-15);
  EXPECT_THROW(unflatten_heads(std::vector<double>(5), q), std::invalid_argument);
}

TEST(TotalLossGradient, PriorOnlyParametersInertAfterAnneal) {
  const auto targets = logistic_targets(PriorConfig{});
  const auto params = random_heads(3, 0.5);
  const auto v = random_features(4);
  const LossWeights w{5.0, {2.0, 20}};
  const LossParts fixed{0.7, 0.3, 0.0};
  auto objective = [&](long t) {
    return [&, t](std::span<const double> h) {
      LossParts parts = fixed;
      parts.prior_raw = prior_loss_of_heads(v, h, params, targets, 1.0);
      return total_loss(parts, w, t);
    };
  };
  for (long t : {20L, 21L, 100L}) {
    for (double g : finite_diff_grad(objective(t), flatten_heads(params), 1e-5)) ASSERT_EQ(g, 0.0);
  }
  const auto early = finite_diff_grad(objective(0), flatten_heads(params), 1e-5);
  EXPECT_GT(norm(early), 0.0);
}

TEST(PriorDemo, SingleStepRecordsTwice) {
  const auto frames = left_blob_frames(1, 3);
  DemoOptions o;
  o.steps = 1;
  o.schedule = {2.0, 1};
  const auto r = train_prior_demo(frames, PriorConfig{}, o, 5);
  ASSERT_EQ(r.trace.size(), 2u);
  ASSERT_EQ(r.trajectory.size(), 2u);
  EXPECT_NE(r.trajectory[0], r.trajectory[1]);
  EXPECT_EQ(r.trace[0].lambda_t, 2.0);
  EXPECT_EQ(r.trace[1].lambda_t, 0.0);
  EXPECT_EQ(flatten_heads(r.params), r.trajectory[1]);
  o.steps = 0;
  EXPECT_THROW(train_prior_demo(frames, PriorConfig{}, o, 5), std::invalid_argument);
}

TEST(PriorDemo, ZeroLambdaLeavesParametersUnchanged) {
  const auto frames = left_blob_frames(1, 3);
  DemoOptions o;
  o.steps = 4;
  o.schedule = {0.0, 2};
  const auto r = train_prior_demo(frames, PriorConfig{}, o, 5);
  for (const auto& p : r.trajectory) EXPECT_EQ(p, r.trajectory[0]);
}

TEST(PriorDemo, DivergenceIsReported) {
  const auto frames = left_blob_frames(1, 3);
  DemoOptions o;
  o.steps = 3;
  o.schedule = {2.0, 3};
  o.learning_rate = std::numeric_limits<double>::infinity();
  try {
    train_prior_demo(frames, PriorConfig{}, o, 5);
    ADD_FAILURE();
  } catch (const NumericError& e) {
    EXPECT_STREQ(e.what(), "demo diverged; reduce lr");
  }
}

TEST(LeftHalfMass, Arithmetic) {
  Grid2 a(2, 4, 0.125);
  EXPECT_DOUBLE_EQ(left_half_mass(a), 0.5);
  Grid2 b(1, 3);
  b(0, 0) = 0.2;
  b(0, 1) = 0.5;
  b(0, 2) = 0.3;
  EXPECT_DOUBLE_EQ(left_half_mass(b), 0.2);
}

}  // namespace
}  // namespace earshot
