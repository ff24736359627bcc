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

// Slow, straight-line reference implementations used only by tests. None of
// these call into the library's numerical code paths.

#ifndef JLMETRIC_TESTS_ORACLES_HPP_
#define JLMETRIC_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jlmetric/ctdg.hpp"
#include "jlmetric/rng.hpp"

namespace jlm::oracle {

/// Sylvester construction, scaled by 1/sqrt(2) per doubling.
inline Eigen::MatrixXd hadamard(std::size_t order) {
  Eigen::MatrixXd h(1, 1);
  h(0, 0) = 1.0;
  while (static_cast<std::size_t>(h.rows()) < order) {
    const auto k = h.rows();
    Eigen::MatrixXd next(2 * k, 2 * k);
    next << h, h, h, -h;
    h = next / std::sqrt(2.0);
  }
  return h;
}

/// sqrt(L / n) * (H_L diag(d))[:, :n] restricted to the first `rows` rows,
/// written as an explicit M x n map (row i is the image of e_i).
inline Eigen::MatrixXd srm_matrix(std::span<const double> d, std::size_t rows,
                                  std::size_t cols) {
  const std::size_t order = d.size();
  const Eigen::MatrixXd h = hadamard(order);
  Eigen::MatrixXd w(rows, cols);
  const double scale = std::sqrt(static_cast<double>(order) / static_cast<double>(cols));
  // y = H D x, so input coordinate i contributes d_i * H[:, i] to the output.
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          scale * h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) * d[i];
    }
  }
  return w;
}

/// Evaluates both ECDFs at every pooled point.
inline double ks(std::span<const double> a, std::span<const double> b) {
  std::vector<double> pts(a.begin(), a.end());
  pts.insert(pts.end(), b.begin(), b.end());
  double best = 0.0;
  for (double x : pts) {
    double fa = 0.0;
    double fb = 0.0;
    for (double v : a) fa += v <= x ? 1.0 : 0.0;
    for (double v : b) fb += v <= x ? 1.0 : 0.0;
    best = std::max(best, std::abs(fa / static_cast<double>(a.size()) -
                                   fb / static_cast<double>(b.size())));
  }
  return best;
}

inline double mmd(std::span<const double> a, std::span<const double> b, double sigma) {
  auto k = [&](double x, double y) {
    return std::exp(-(x - y) * (x - y) / (2.0 * sigma * sigma));
  };
  double aa = 0.0, bb = 0.0, ab = 0.0;
  for (double x : a)
    for (double y : a) aa += k(x, y);
  for (double x : b)
    for (double y : b) bb += k(x, y);
  for (double x : a)
    for (double y : b) ab += k(x, y);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  return aa / (na * na) + bb / (nb * nb) - 2.0 * ab / (na * nb);
}

/// Median of all pairwise |x_i - x_j|, i < j, by enumeration.
inline double median_pairwise(std::span<const double> a, std::span<const double> b) {
  std::vector<double> x(a.begin(), a.end());
  x.insert(x.end(), b.begin(), b.end());
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) d.push_back(std::abs(x[i] - x[j]));
  std::sort(d.begin(), d.end());
  const std::size_t m = d.size();
  return m % 2 == 1 ? d[m / 2] : 0.5 * (d[m / 2 - 1] + d[m / 2]);
}

inline double kl(std::span<const double> p, std::span<const double> q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * std::log(p[i] / q[i]);
  return s;
}

/// JS divergence of two scalar samples: 'bins' equal-width bins over the
/// pooled range, Laplace (+1) smoothing, KL against the midpoint mixture.
inline double js(std::span<const double> a, std::span<const double> b, std::size_t bins) {
  double lo = a[0], hi = a[0];
  for (auto s : {a, b}) {
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  auto hist = [&](std::span<const double> x) {
    std::vector<double> h(bins, 1.0);
    for (double v : x) {
      std::size_t k = 0;
      if (hi > lo) {
        const double pos = (v - lo) / (hi - lo) * static_cast<double>(bins);
        k = pos <= 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(pos));
      }
      h[k] += 1.0;
    }
    for (double& c : h) c /= static_cast<double>(x.size() + bins);
    return h;
  };
  const auto p = hist(a);
  const auto q = hist(b);
  std::vector<double> m(bins);
  for (std::size_t i = 0; i < bins; ++i) m[i] = 0.5 * (p[i] + q[i]);
  return 0.5 * kl(p, m) + 0.5 * kl(q, m);
}

/// Statistics of the cumulative undirected graph of events with t <= when,
/// rebuilt from the raw event list.
struct SnapshotStats {
  double mean_degree = 0.0;
  double lcc = 0.0;
  double nc = 0.0;
  std::optional<double> ple;
};

inline SnapshotStats snapshot_stats(const Ctdg& g, double when) {
  std::set<NodeId> nodes;
  std::set<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < g.num_events(); ++i) {
    if (g.time(i) > when) continue;
    const NodeId a = g.src(i);
    const NodeId b = g.dst(i);
    nodes.insert(a);
    nodes.insert(b);
    if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
  }
  std::map<NodeId, std::vector<NodeId>> adj;
  for (NodeId v : nodes) adj[v];
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  SnapshotStats s;
  if (nodes.empty()) return s;
  s.mean_degree = 2.0 * static_cast<double>(edges.size()) / static_cast<double>(nodes.size());

  std::set<NodeId> seen;
  for (NodeId root : nodes) {
    if (seen.count(root)) continue;
    std::vector<NodeId> stack{root};
    seen.insert(root);
    double size = 0.0;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      size += 1.0;
      for (NodeId w : adj[v]) {
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
    s.nc += 1.0;
    s.lcc = std::max(s.lcc, size);
  }

  std::vector<double> degrees;
  for (const auto& [v, nbrs] : adj) {
    if (!nbrs.empty()) degrees.push_back(static_cast<double>(nbrs.size()));
  }
  if (!degrees.empty()) {
    const double d_min = *std::min_element(degrees.begin(), degrees.end());
    double sum = 0.0;
    for (double d : degrees) sum += std::log(d / d_min);
    s.ple = sum > 0.0 ? 1.0 + static_cast<double>(degrees.size()) / sum : 1.0 + 1e6;
  }
  return s;
}

/// Random CTDG with integer-ish timestamps so ties and gaps both occur.
inline Ctdg random_ctdg(Rng& rng, std::size_t max_events, std::size_t max_nodes,
                        std::size_t feature_dim) {
  const std::size_t events = 2 + rng.below(max_events - 1);
  const std::size_t nodes = 2 + rng.below(max_nodes - 1);
  EventTable t;
  t.feature_dim = feature_dim;
  std::vector<double> f(feature_dim);
  for (std::size_t i = 0; i < events; ++i) {
    for (double& x : f) x = rng.uniform() * 10.0 - 5.0;
    t.push_back(rng.below(nodes), rng.below(nodes),
                static_cast<double>(rng.below(events)) * 0.5, f);
  }
  // Guarantee two distinct timestamps.
  t.t[0] = 0.0;
  t.t[1] = static_cast<double>(events);
  return Ctdg(std::move(t));
}

}  // namespace jlm::oracle

#endif  // JLMETRIC_TESTS_ORACLES_HPP_
