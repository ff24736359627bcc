// Copyright 2026 The jlmetric Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jlmetric/distances.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "jlmetric/rng.hpp"
#include "oracles.hpp"

namespace jlm {
namespace {

using Vec = std::vector<double>;

Vec random_series(Rng& rng, std::size_t n, bool ties) {
  Vec v(n);
  for (double& x : v) x = ties ? static_cast<double>(rng.below(6)) : rng.normal() * 3.0;
  return v;
}

TEST(KsTest, Examples) {
  const Vec a = {1, 2, 3};
  EXPECT_EQ(ks_distance(a, a), 0.0);
  EXPECT_EQ(ks_distance(Vec{0, 0, 0}, Vec{1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(ks_distance(Vec{1, 2, 3}, Vec{2, 3, 4}), 1.0 / 3.0);
  EXPECT_THROW(ks_distance(Vec{}, a), std::invalid_argument);
}

TEST(KsTest, MatchesBruteForceEcdf) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec a = random_series(rng, 1 + rng.below(40), trial % 2 == 0);
    const Vec b = random_series(rng, 1 + rng.below(40), trial % 2 == 0);
    EXPECT_EQ(ks_distance(a, b), oracle::ks(a, b));
  }
}

TEST(KsTest, MonotoneTransformInvariant) {
  Rng rng(2);
  const Vec a = random_series(rng, 30, false);
  const Vec b = random_series(rng, 25, false);
  Vec ea, eb;
  for (double x : a) ea.push_back(std::exp(x));
  for (double x : b) eb.push_back(std::exp(x));
  EXPECT_EQ(ks_distance(a, b), ks_distance(ea, eb));
}

TEST(MmdTest, Examples) {
  const Vec a = {0.5, 1.5, 2.0};
  EXPECT_NEAR(mmd_distance(a, a), 0.0, 1e-12);
  const Vec zeros(10, 0.0), tens(10, 10.0);
  EXPECT_NEAR(mmd_distance(zeros, tens, 1.0), 2.0 * (1.0 - std::exp(-50.0)), 1e-12);
  EXPECT_THROW(mmd_distance(a, a, 0.0), std::invalid_argument);
  EXPECT_THROW(mmd_distance(Vec{}, a), std::invalid_argument);
}

TEST(MmdTest, MatchesDoubleLoop) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Vec a = random_series(rng, 1 + rng.below(200), trial % 3 == 0);
    const Vec b = random_series(rng, 1 + rng.below(200), trial % 3 == 0);
    const double sigma = mmd_auto_bandwidth(a, b);
    EXPECT_NEAR(mmd_distance(a, b), oracle::mmd(a, b, sigma), 1e-10);
    EXPECT_NEAR(mmd_distance(a, b, 0.7), oracle::mmd(a, b, 0.7), 1e-10);
  }
}

TEST(MmdTest, AutoBandwidthIsMedianPairwiseDistance) {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec a = random_series(rng, 2 + rng.below(30), false);
    const Vec b = random_series(rng, 1 + rng.below(30), false);
    EXPECT_EQ(mmd_auto_bandwidth(a, b), oracle::median_pairwise(a, b));
  }
}

TEST(MmdTest, BandwidthFallbacks) {
  // Most pairs tie, so the median is 0 and the mean is used instead.
  const Vec a = {1, 1, 1, 1, 1};
  const Vec b = {1, 1, 4};
  const double mean = 7.0 * 3.0 / 28.0;
  EXPECT_DOUBLE_EQ(mmd_auto_bandwidth(a, b), mean);
  EXPECT_EQ(mmd_auto_bandwidth(a, a), 1.0);
}

TEST(MmdTest, Symmetric) {
  Rng rng(5);
  const Vec a = random_series(rng, 50, true);
  const Vec b = random_series(rng, 70, true);
  EXPECT_NEAR(mmd_distance(a, b), mmd_distance(b, a), 1e-15);
}

FeatureView view(const Vec& v) { return {v, 1}; }

TEST(KlTest, TwoBinHandComputation) {
  const Vec p = {0.75, 0.25};
  const Vec q = {0.25, 0.75};
  EXPECT_NEAR(kl_from_probs(p, q), 0.5 * std::log(3.0), 1e-15);
  // Smoothed two-bin histograms (5+1, 1+1)/8 and (1+1, 5+1)/8.
  const Vec a = {0, 0, 0, 0, 0, 1};
  const Vec b = {0, 1, 1, 1, 1, 1};
  EXPECT_NEAR(kl_divergence(view(a), view(b), 2), 0.5 * std::log(3.0), 1e-15);
}

TEST(KlTest, ZeroOnIdenticalAndAsymmetricWitness) {
  const Vec a = {0, 0.1, 0.5, 0.7, 0.9};
  EXPECT_NEAR(kl_divergence(view(a), view(a)), 0.0, 1e-12);
  const Vec x = {0, 0, 0, 0, 0, 0, 1};
  const Vec y = {0, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  EXPECT_GT(std::abs(kl_divergence(view(x), view(y), 4) - kl_divergence(view(y), view(x), 4)), 1e-3);
}

TEST(JsTest, MatchesKlDecomposition) {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    Vec a(5 + rng.below(80)), b(5 + rng.below(80));
    for (double& x : a) x = rng.normal();
    for (double& x : b) x = rng.normal() + 0.5;
    EXPECT_NEAR(js_divergence(view(a), view(b), 16), oracle::js(a, b, 16), 1e-12);
    EXPECT_NEAR(js_divergence(view(a), view(b), 16), js_divergence(view(b), view(a), 16), 1e-15);
  }
}

TEST(JsTest, AveragesChannels) {
  const Vec a = {0, 5, 1, 6, 2, 9, 3, 9};
  const Vec b = {1, 5, 1, 5, 4, 0, 0, 1};
  const Vec a0 = {0, 1, 2, 3}, a1 = {5, 6, 9, 9};
  const Vec b0 = {1, 1, 4, 0}, b1 = {5, 5, 0, 1};
  EXPECT_NEAR(js_divergence(FeatureView{a, 2}, FeatureView{b, 2}, 4),
              0.5 * (oracle::js(a0, b0, 4) + oracle::js(a1, b1, 4)), 1e-15);
}

TEST(JsTest, BoundedByLog2) {
  const Vec a(200, 0.0);
  const Vec b(200, 1.0);
  const double js = js_divergence(view(a), view(b), 2);
  EXPECT_LE(js, std::log(2.0));
  EXPECT_GT(js, 0.9 * std::log(2.0));
  EXPECT_EQ(js_divergence(view(a), view(a)), 0.0);
}

TEST(HistogramTest, SmoothingAndDegenerateRange) {
  const Vec a = {3, 3, 3};
  const auto h = channel_histogram(view(a), 0, 3.0, 3.0, 4);
  EXPECT_EQ(h, (Vec{4.0 / 7, 1.0 / 7, 1.0 / 7, 1.0 / 7}));
}

TEST(FeatureEstimatorTest, AverageOverChannels) {
  const Vec a = {0, 10, 1, 10, 2, 10};
  const Vec b = {0, 20, 1, 20, 2, 20};
  EXPECT_DOUBLE_EQ(feature_ks(FeatureView{a, 2}, FeatureView{b, 2}), 0.5);
  EXPECT_THROW(feature_ks(FeatureView{a, 2}, FeatureView{a, 3}), std::invalid_argument);
  EXPECT_THROW(feature_mmd(FeatureView{{}, 0}, FeatureView{{}, 0}), std::invalid_argument);
}

TEST(SpearmanTest, Examples) {
  EXPECT_DOUBLE_EQ(*spearman(Vec{1, 2, 3}, Vec{10, 20, 30}), 1.0);
  EXPECT_DOUBLE_EQ(*spearman(Vec{1, 2, 3}, Vec{3, 2, 1}), -1.0);
  EXPECT_NEAR(*spearman(Vec{1, 2, 3, 4}, Vec{1, 3, 2, 4}), 0.8, 1e-15);
}

TEST(SpearmanTest, ConstantSeriesHasNoValue) {
  EXPECT_FALSE(spearman(Vec{1, 2, 3}, Vec{5, 5, 5}).has_value());
  EXPECT_THROW(spearman(Vec{1, 2, 3}, Vec{1, 2}), std::invalid_argument);
  EXPECT_THROW(spearman(Vec{1, 2}, Vec{1, 2}), std::invalid_argument);
}

TEST(SpearmanTest, TiesUseAverageRanks) {
  EXPECT_EQ(average_ranks(Vec{10, 20, 10, 30}), (Vec{1.5, 3, 1.5, 4}));
}

TEST(SpearmanTest, MonotoneTransformInvariant) {
  Rng rng(7);
  const Vec x = random_series(rng, 20, true);
  const Vec y = random_series(rng, 20, false);
  Vec fy;
  for (double v : y) fy.push_back(v * v * v + 2.0);
  EXPECT_NEAR(*spearman(x, y), *spearman(x, fy), 1e-14);
}

}  // namespace
}  // namespace jlm
