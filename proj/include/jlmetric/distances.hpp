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

#ifndef JLMETRIC_DISTANCES_HPP_
#define JLMETRIC_DISTANCES_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace jlm {

enum class Estimator { ks, mmd, kl, js };

std::string_view estimator_name(Estimator e);
Estimator parse_estimator(std::string_view name);

/// Sup-norm distance between empirical CDFs. Throws std::invalid_argument on
/// empty input.
double ks_distance(std::span<const double> a, std::span<const double> b);

/// Biased (V-statistic) squared MMD with kernel exp(-d^2 / (2 sigma^2)).
/// Without an explicit bandwidth, sigma = mmd_auto_bandwidth(a, b). Throws
/// std::invalid_argument on empty input or a non-positive bandwidth.
double mmd_distance(std::span<const double> a, std::span<const double> b,
                    std::optional<double> bandwidth = std::nullopt);

/// Median of |x_i - x_j| over all pairs i < j of the pooled sample, averaging
/// the two middle values for an even pair count. Falls back to the mean
/// pairwise distance when the median is 0, and to 1 when that is 0 too.
double mmd_auto_bandwidth(std::span<const double> a, std::span<const double> b);

/// k-th smallest (1-based) of |x_i - x_j|, i < j, for sorted `x`.
double kth_pairwise_distance(std::span<const double> sorted, std::size_t k);

/// Row-major matrix of per-event feature vectors.
struct FeatureView {
  std::span<const double> values;
  std::size_t dim = 0;

  std::size_t rows() const { return dim == 0 ? 0 : values.size() / dim; }
};

/// Laplace-smoothed histogram of channel `channel` over [lo, hi]; each bin
/// gets one pseudo-count. A degenerate range puts every value in bin 0.
std::vector<double> channel_histogram(FeatureView x, std::size_t channel,
                                      double lo, double hi, std::size_t bins);

/// sum_i p_i log(p_i / q_i) for strictly positive q.
double kl_from_probs(std::span<const double> p, std::span<const double> q);

/// Mean over channels of KL(p_a || p_b), histograms over the pooled range.
double kl_divergence(FeatureView a, FeatureView b, std::size_t bins = 32);

/// Mean over channels of the Jensen-Shannon divergence on the same
/// histograms.
double js_divergence(FeatureView a, FeatureView b, std::size_t bins = 32);

/// Mean over channels of ks_distance.
double feature_ks(FeatureView a, FeatureView b);

/// Mean over channels of mmd_distance, bandwidth chosen per channel.
double feature_mmd(FeatureView a, FeatureView b,
                   std::optional<double> bandwidth = std::nullopt);

/// Ranks starting at 1, ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson correlation of average ranks. nullopt when either series is
/// constant. Throws std::invalid_argument on a length mismatch or fewer than
/// three points.
std::optional<double> spearman(std::span<const double> x,
                               std::span<const double> y);

}  // namespace jlm

#endif  // JLMETRIC_DISTANCES_HPP_
