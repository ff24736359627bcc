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

#include "jlmetric/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "jlmetric/rng.hpp"

namespace jlm {

std::string_view perturb_name(PerturbKind k) {
  switch (k) {
    case PerturbKind::edge_rewiring:
      return "edge_rewiring";
    case PerturbKind::time_perturbation:
      return "time_perturbation";
    case PerturbKind::event_permutation:
      return "event_permutation";
    case PerturbKind::mode_dropping:
      return "mode_dropping";
    case PerturbKind::mode_collapse:
      return "mode_collapse";
  }
  return "unknown";
}

PerturbKind parse_perturb(std::string_view name) {
  for (PerturbKind k :
       {PerturbKind::edge_rewiring, PerturbKind::time_perturbation,
        PerturbKind::event_permutation, PerturbKind::mode_dropping,
        PerturbKind::mode_collapse}) {
    if (perturb_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown perturbation: " + std::string(name));
}

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("perturbation probability must lie in [0, 1]");
  }
}

}  // namespace

Ctdg edge_rewire(const Ctdg& g, double p, std::uint64_t seed) {
  check_probability(p);
  const std::size_t z = g.num_nodes();
  if (z < 2) throw std::invalid_argument("edge rewiring needs at least 2 nodes");
  const auto nodes = g.nodes();
  EventTable table = g.table();
  Rng rng(derive_seed(seed, "edge_rewiring"));
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double u = rng.uniform();
    std::size_t r = rng.below(z - 1);
    if (u < p) {
      if (r >= g.src_index(i)) ++r;
      table.dst[i] = nodes[r];
    }
  }
  return Ctdg(std::move(table));
}

Ctdg time_perturb(const Ctdg& g, double p, std::uint64_t seed) {
  check_probability(p);
  EventTable table = g.table();
  const std::size_t k = table.size();
  Rng rng(derive_seed(seed, "time_perturbation"));
  for (std::size_t i = 1; i + 1 < k; ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform();
    if (!(u < p)) continue;
    const double lo = std::max(g.time(i - 1), table.t[i - 1]);
    const double hi = g.time(i + 1);
    const double t = lo + v * (hi - lo);
    if (t > lo && t < hi) table.t[i] = t;
  }
  return Ctdg(std::move(table));
}

Ctdg event_permute(const Ctdg& g, double p, std::uint64_t seed, PermuteMode mode) {
  check_probability(p);
  const std::size_t dim = g.feature_dim();
  if (dim == 0) throw std::invalid_argument("no features to permute");
  const std::size_t k = g.num_events();
  if (k < 2) throw std::invalid_argument("event permutation needs at least 2 events");
  EventTable table = g.table();
  Rng rng(derive_seed(seed, "event_permutation"));
  for (std::size_t i = 0; i < k; ++i) {
    const double u = rng.uniform();
    std::size_t j = rng.below(k - 1);
    if (!(u < p)) continue;
    if (j >= i) ++j;
    auto dst_row = table.row(i);
    if (mode == PermuteMode::replace) {
      auto src_row = g.features(j);
      std::copy(src_row.begin(), src_row.end(), dst_row.begin());
    } else {
      auto other = table.row(j);
      std::swap_ranges(dst_row.begin(), dst_row.end(), other.begin());
    }
  }
  return Ctdg(std::move(table));
}

// ---------------------------------------------------------------------------
// Mode clustering

std::size_t ModeAssignment::mode_of(NodeId id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) {
    throw std::out_of_range("node " + std::to_string(id) + " has no mode");
  }
  return mode[static_cast<std::size_t>(it - nodes.begin())];
}

namespace {

using Points = std::vector<std::vector<double>>;

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t nearest(const std::vector<double>& x, const Points& centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance(x, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// Cluster labels compacted to 0..(non-empty clusters - 1), in order of first
// appearance.
std::vector<std::size_t> kmeans(const Points& x, std::size_t k, Rng& rng) {
  const std::size_t z = x.size();
  Points centers;
  centers.push_back(x[rng.below(z)]);
  std::vector<double> d2(z);
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < z; ++i) {
      d2[i] = squared_distance(x[i], centers[nearest(x[i], centers)]);
      total += d2[i];
    }
    if (total <= 0.0) break;
    const double target = rng.uniform() * total;
    std::size_t pick = z - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < z; ++i) {
      acc += d2[i];
      if (acc > target && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
    centers.push_back(x[pick]);
  }

  std::vector<std::size_t> label(z, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = iter == 0;
    for (std::size_t i = 0; i < z; ++i) {
      const std::size_t c = nearest(x[i], centers);
      if (c != label[i]) {
        label[i] = c;
        changed = true;
      }
    }
    if (!changed) break;
    Points sums(centers.size(), std::vector<double>(x[0].size(), 0.0));
    std::vector<std::size_t> counts(centers.size(), 0);
    for (std::size_t i = 0; i < z; ++i) {
      for (std::size_t d = 0; d < x[i].size(); ++d) sums[label[i]][d] += x[i][d];
      ++counts[label[i]];
    }
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (counts[c] == 0) continue;
      for (double& v : sums[c]) v /= static_cast<double>(counts[c]);
      centers[c] = std::move(sums[c]);
    }
  }

  std::vector<std::size_t> remap(centers.size(), z);
  std::size_t next = 0;
  for (std::size_t& l : label) {
    if (remap[l] == z) remap[l] = next++;
    l = remap[l];
  }
  return label;
}

std::size_t count_labels(const std::vector<std::size_t>& label) {
  return label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
}

}  // namespace

std::size_t default_mode_count(std::size_t num_nodes) {
  return std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(num_nodes)))));
}

ModeAssignment cluster_modes(const Ctdg& g, const JlConfig& cfg,
                             std::uint64_t seed, std::size_t k) {
  const std::size_t z = g.num_nodes();
  if (z < 4) throw std::invalid_argument("mode clustering needs at least 4 nodes");

  const Ctdg* self[] = {&g};
  const JlEmbedder embedder(cfg, JlShape::covering(self));
  const auto seqs = build_node_sequences(g, normalize_events(g));
  Points x(z);
  for (const auto& s : seqs) {
    x[g.index_of(s.node)] = embedder.w1().apply(s.payload);
  }

  if (k == 0) k = default_mode_count(z);
  k = std::min(k, z);

  Rng rng(derive_seed(seed, "cluster_modes"));
  auto label = kmeans(x, k, rng);
  if (count_labels(label) < 2 && k != 2) label = kmeans(x, 2, rng);
  if (count_labels(label) < 2) {
    // Every embedding coincides: split the nodes into two seeded halves.
    std::vector<std::size_t> order(z);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (std::size_t r = 0; r < z; ++r) label[order[r]] = r < z / 2 ? 0 : 1;
  }

  ModeAssignment m;
  m.nodes.assign(g.nodes().begin(), g.nodes().end());
  m.mode = std::move(label);
  m.num_modes = count_labels(m.mode);

  const std::size_t n = cfg.n;
  Points mean(m.num_modes, std::vector<double>(n, 0.0));
  std::vector<std::size_t> size(m.num_modes, 0);
  for (std::size_t i = 0; i < z; ++i) {
    for (std::size_t d = 0; d < n; ++d) mean[m.mode[i]][d] += x[i][d];
    ++size[m.mode[i]];
  }
  for (std::size_t c = 0; c < m.num_modes; ++c) {
    for (double& v : mean[c]) v /= static_cast<double>(size[c]);
  }
  m.representative.assign(m.num_modes, 0);
  std::vector<double> best(m.num_modes, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < z; ++i) {
    const std::size_t c = m.mode[i];
    const double d = squared_distance(x[i], mean[c]);
    if (d < best[c]) {  // nodes ascend, so ties keep the smallest id
      best[c] = d;
      m.representative[c] = m.nodes[i];
    }
  }

  const std::size_t dim = g.feature_dim();
  m.mean_feature.assign(m.num_modes, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> touching(m.num_modes, 0);
  for (std::size_t e = 0; e < g.num_events(); ++e) {
    const std::size_t a = m.mode[g.src_index(e)];
    const std::size_t b = m.mode[g.dst_index(e)];
    auto f = g.features(e);
    auto add = [&](std::size_t c) {
      for (std::size_t d = 0; d < dim; ++d) m.mean_feature[c][d] += f[d];
      ++touching[c];
    };
    add(a);
    if (b != a) add(b);
  }
  for (std::size_t c = 0; c < m.num_modes; ++c) {
    if (touching[c] == 0) continue;
    for (double& v : m.mean_feature[c]) v /= static_cast<double>(touching[c]);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Mode perturbations

namespace {

void check_modes(const Ctdg& g, const ModeAssignment& modes) {
  if (modes.num_modes < 2) throw std::invalid_argument("need at least 2 modes");
  if (!std::equal(modes.nodes.begin(), modes.nodes.end(), g.nodes().begin(),
                  g.nodes().end())) {
    throw std::invalid_argument("mode assignment was built for another graph");
  }
}

}  // namespace

Ctdg mode_drop(const Ctdg& g, const ModeAssignment& modes, double p,
               std::uint64_t seed) {
  check_probability(p);
  check_modes(g, modes);
  Rng rng(derive_seed(seed, "mode_dropping"));

  std::vector<bool> dropped(modes.num_modes);
  std::size_t survivor = 0;
  double best = -1.0;
  bool any_survives = false;
  for (std::size_t c = 0; c < modes.num_modes; ++c) {
    const double u = rng.uniform();
    dropped[c] = u < p;
    any_survives = any_survives || !dropped[c];
    if (u > best) {
      best = u;
      survivor = c;
    }
  }
  if (!any_survives) dropped[survivor] = false;

  auto alive = [&](std::size_t e) {
    return std::pair<bool, bool>{!dropped[modes.mode[g.src_index(e)]],
                                 !dropped[modes.mode[g.dst_index(e)]]};
  };
  std::vector<std::size_t> pool;
  for (std::size_t e = 0; e < g.num_events(); ++e) {
    const auto [a, b] = alive(e);
    if (a && b) pool.push_back(e);
  }
  if (pool.empty()) {
    for (std::size_t e = 0; e < g.num_events(); ++e) {
      const auto [a, b] = alive(e);
      if (a || b) pool.push_back(e);
    }
  }

  EventTable table = g.table();
  for (std::size_t e = 0; e < g.num_events(); ++e) {
    const double w = rng.uniform();
    const auto [a, b] = alive(e);
    if (a && b) continue;
    const std::size_t donor =
        pool[std::min(pool.size() - 1, static_cast<std::size_t>(w * static_cast<double>(pool.size())))];
    table.src[e] = g.src(donor);
    table.dst[e] = g.dst(donor);
    auto f = g.features(donor);
    std::copy(f.begin(), f.end(), table.row(e).begin());
  }
  return Ctdg(std::move(table));
}

Ctdg mode_collapse(const Ctdg& g, const ModeAssignment& modes, double p,
                   std::uint64_t seed) {
  check_probability(p);
  check_modes(g, modes);
  Rng rng(derive_seed(seed, "mode_collapse"));
  EventTable table = g.table();
  for (std::size_t e = 0; e < g.num_events(); ++e) {
    if (!(rng.uniform() < p)) continue;
    const std::size_t a = modes.mode[g.src_index(e)];
    const std::size_t b = modes.mode[g.dst_index(e)];
    table.src[e] = modes.representative[a];
    table.dst[e] = modes.representative[b];
    const auto& f = modes.mean_feature[a];
    std::copy(f.begin(), f.end(), table.row(e).begin());
  }
  return Ctdg(std::move(table));
}

Ctdg perturb(const Ctdg& g, PerturbKind kind, double p, std::uint64_t seed,
             const PerturbOptions& options) {
  switch (kind) {
    case PerturbKind::edge_rewiring:
      return edge_rewire(g, p, seed);
    case PerturbKind::time_perturbation:
      return time_perturb(g, p, seed);
    case PerturbKind::event_permutation:
      return event_permute(g, p, seed, options.permute_mode);
    case PerturbKind::mode_dropping:
    case PerturbKind::mode_collapse:
      if (options.modes == nullptr) {
        throw std::invalid_argument(std::string(perturb_name(kind)) +
                                    " needs a mode assignment");
      }
      return kind == PerturbKind::mode_dropping
                 ? mode_drop(g, *options.modes, p, seed)
                 : mode_collapse(g, *options.modes, p, seed);
  }
  throw std::invalid_argument("unknown perturbation");
}

}  // namespace jlm
