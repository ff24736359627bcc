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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace jlm {

std::string_view estimator_name(Estimator e) {
  switch (e) {
    case Estimator::ks:
      return "ks";
    case Estimator::mmd:
      return "mmd";
    case Estimator::kl:
      return "kl";
    case Estimator::js:
      return "js";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view name) {
  for (Estimator e : {Estimator::ks, Estimator::mmd, Estimator::kl, Estimator::js}) {
    if (estimator_name(e) == name) return e;
  }
  throw std::invalid_argument("unknown estimator: " + std::string(name));
}

namespace {

void require_nonempty(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
}

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

double ks_distance(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a, b);
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double v;
    if (j >= sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
      v = sa[i];
    } else {
      v = sb[j];
    }
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na -
                                   static_cast<double>(j) / nb));
  }
  return best;
}

// ---------------------------------------------------------------------------
// MMD

namespace {

// Number of pairs i < j in sorted x with x_j - x_i <= d.
std::uint64_t count_pairs_within(std::span<const double> x, double d) {
  std::uint64_t count = 0;
  std::size_t lo = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    while (x[j] - x[lo] > d) ++lo;
    count += j - lo;
  }
  return count;
}

struct Distinct {
  std::vector<double> values;
  std::vector<double> counts;
};

Distinct compress(std::span<const double> x) {
  const auto s = sorted_copy(x);
  Distinct d;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t k = i;
    while (k < s.size() && s[k] == s[i]) ++k;
    d.values.push_back(s[i]);
    d.counts.push_back(static_cast<double>(k - i));
    i = k;
  }
  return d;
}

double kernel_mean(const Distinct& x, double nx, const Distinct& y, double ny,
                   double gamma) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < y.values.size(); ++j) {
      const double diff = x.values[i] - y.values[j];
      row += y.counts[j] * std::exp(-gamma * diff * diff);
    }
    total += x.counts[i] * row;
  }
  return total / (nx * ny);
}

}  // namespace

double kth_pairwise_distance(std::span<const double> sorted, std::size_t k) {
  const std::uint64_t pairs =
      static_cast<std::uint64_t>(sorted.size()) * (sorted.size() - 1) / 2;
  if (k < 1 || k > pairs) throw std::out_of_range("pair rank out of range");
  // Non-negative doubles order like their bit patterns.
  std::uint64_t lo = 0;
  std::uint64_t hi = std::bit_cast<std::uint64_t>(sorted.back() - sorted.front());
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (count_pairs_within(sorted, std::bit_cast<double>(mid)) >= k) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return std::bit_cast<double>(lo);
}

double mmd_auto_bandwidth(std::span<const double> a, std::span<const double> b) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  const std::size_t n = pooled.size();
  if (n < 2) return 1.0;
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  double median;
  if (pairs % 2 == 1) {
    median = kth_pairwise_distance(pooled, pairs / 2 + 1);
  } else {
    median = 0.5 * (kth_pairwise_distance(pooled, pairs / 2) +
                    kth_pairwise_distance(pooled, pairs / 2 + 1));
  }
  if (median > 0.0) return median;

  // Sum over j of sum_{i<j} (x_j - x_i) = j x_j - prefix_j.
  double total = 0.0;
  double prefix = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    total += static_cast<double>(j) * pooled[j] - prefix;
    prefix += pooled[j];
  }
  const double mean = total / static_cast<double>(pairs);
  return mean > 0.0 ? mean : 1.0;
}

double mmd_distance(std::span<const double> a, std::span<const double> b,
                    std::optional<double> bandwidth) {
  require_nonempty(a, b);
  if (bandwidth && !(*bandwidth > 0.0)) {
    throw std::invalid_argument("MMD bandwidth must be positive");
  }
  const double sigma = bandwidth ? *bandwidth : mmd_auto_bandwidth(a, b);
  const double gamma = 1.0 / (2.0 * sigma * sigma);
  const Distinct da = compress(a);
  const Distinct db = compress(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double kaa = kernel_mean(da, na, da, na, gamma);
  const double kbb = kernel_mean(db, nb, db, nb, gamma);
  const double kab = kernel_mean(da, na, db, nb, gamma);
  return std::max(0.0, kaa + kbb - 2.0 * kab);
}

// ---------------------------------------------------------------------------
// Feature samples

namespace {

void require_compatible(FeatureView a, FeatureView b) {
  if (a.dim == 0 || b.dim == 0) throw std::invalid_argument("no feature channels");
  if (a.dim != b.dim) throw std::invalid_argument("feature dimensions differ");
  if (a.rows() == 0 || b.rows() == 0) throw std::invalid_argument("empty sample");
}

std::vector<double> channel(FeatureView x, std::size_t c) {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.values[i * x.dim + c];
  return out;
}

std::pair<double, double> pooled_range(FeatureView a, FeatureView b,
                                       std::size_t c) {
  double lo = a.values[c];
  double hi = lo;
  for (FeatureView x : {a, b}) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      lo = std::min(lo, x.values[i * x.dim + c]);
      hi = std::max(hi, x.values[i * x.dim + c]);
    }
  }
  return {lo, hi};
}

template <typename F>
double average_over_channels(FeatureView a, FeatureView b, F&& per_channel) {
  require_compatible(a, b);
  double total = 0.0;
  for (std::size_t c = 0; c < a.dim; ++c) total += per_channel(c);
  return total / static_cast<double>(a.dim);
}

}  // namespace

std::vector<double> channel_histogram(FeatureView x, std::size_t channel_index,
                                      double lo, double hi, std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  std::vector<double> counts(bins, 1.0);
  const double width = hi - lo;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double v = x.values[i * x.dim + channel_index];
    std::size_t bin = 0;
    if (width > 0.0) {
      const double pos = (v - lo) / width * static_cast<double>(bins);
      bin = pos <= 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(pos));
    }
    counts[bin] += 1.0;
  }
  const double total = static_cast<double>(x.rows() + bins);
  for (double& c : counts) c /= total;
  return counts;
}

double kl_from_probs(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("histogram sizes differ");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

double kl_divergence(FeatureView a, FeatureView b, std::size_t bins) {
  return average_over_channels(a, b, [&](std::size_t c) {
    const auto [lo, hi] = pooled_range(a, b, c);
    return kl_from_probs(channel_histogram(a, c, lo, hi, bins),
                         channel_histogram(b, c, lo, hi, bins));
  });
}

double js_divergence(FeatureView a, FeatureView b, std::size_t bins) {
  return average_over_channels(a, b, [&](std::size_t c) {
    const auto [lo, hi] = pooled_range(a, b, c);
    const auto p = channel_histogram(a, c, lo, hi, bins);
    const auto q = channel_histogram(b, c, lo, hi, bins);
    std::vector<double> m(p.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
    return 0.5 * kl_from_probs(p, m) + 0.5 * kl_from_probs(q, m);
  });
}

double feature_ks(FeatureView a, FeatureView b) {
  return average_over_channels(a, b, [&](std::size_t c) {
    return ks_distance(channel(a, c), channel(b, c));
  });
}

double feature_mmd(FeatureView a, FeatureView b, std::optional<double> bandwidth) {
  return average_over_channels(a, b, [&](std::size_t c) {
    return mmd_distance(channel(a, c), channel(b, c), bandwidth);
  });
}

// ---------------------------------------------------------------------------
// Spearman

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t k = i;
    while (k < order.size() && x[order[k]] == x[order[i]]) ++k;
    const double rank = 0.5 * static_cast<double>(i + 1 + k);
    for (std::size_t r = i; r < k; ++r) ranks[order[r]] = rank;
    i = k;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x,
                               std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("series lengths differ");
  if (x.size() < 3) throw std::invalid_argument("spearman needs at least 3 points");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace jlm
