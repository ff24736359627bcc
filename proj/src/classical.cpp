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

#include "jlmetric/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "jlmetric/format.hpp"

namespace jlm {

std::string_view descriptor_name(Descriptor d) {
  switch (d) {
    case Descriptor::mean_degree:
      return "mean_degree";
    case Descriptor::lcc:
      return "lcc";
    case Descriptor::nc:
      return "nc";
    case Descriptor::ple:
      return "ple";
    case Descriptor::activity_rate:
      return "activity_rate";
  }
  return "unknown";
}

Descriptor parse_descriptor(std::string_view name) {
  for (Descriptor d : {Descriptor::mean_degree, Descriptor::lcc, Descriptor::nc,
                       Descriptor::ple, Descriptor::activity_rate}) {
    if (descriptor_name(d) == name) return d;
  }
  throw std::invalid_argument("unknown descriptor: " + std::string(name));
}

// ---------------------------------------------------------------------------
// From-scratch statistics on one snapshot

double mean_degree(const Snapshot& s) {
  if (s.nodes().empty()) return 0.0;
  return 2.0 * static_cast<double>(s.edges().size()) /
         static_cast<double>(s.nodes().size());
}

namespace {

// Component sizes by BFS over the snapshot's edge list.
std::vector<std::size_t> component_sizes(const Snapshot& s) {
  const auto nodes = s.nodes();
  const std::size_t n = nodes.size();
  auto index = [&](NodeId id) {
    return static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
  };
  std::vector<std::size_t> offset(n + 1, 0);
  for (const auto& e : s.edges()) {
    ++offset[index(e.u) + 1];
    ++offset[index(e.v) + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] += offset[i];
  std::vector<std::size_t> adj(offset[n]);
  std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
  for (const auto& e : s.edges()) {
    const std::size_t a = index(e.u);
    const std::size_t b = index(e.v);
    adj[fill[a]++] = b;
    adj[fill[b]++] = a;
  }

  std::vector<std::size_t> sizes;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> queue;
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    queue.assign(1, root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t v = queue[head];
      for (std::size_t k = offset[v]; k < offset[v + 1]; ++k) {
        if (!seen[adj[k]]) {
          seen[adj[k]] = true;
          queue.push_back(adj[k]);
        }
      }
    }
    sizes.push_back(queue.size());
  }
  return sizes;
}

}  // namespace

double lcc(const Snapshot& s) {
  const auto sizes = component_sizes(s);
  return sizes.empty() ? 0.0
                       : static_cast<double>(*std::max_element(sizes.begin(), sizes.end()));
}

double num_components(const Snapshot& s) {
  return static_cast<double>(component_sizes(s).size());
}

std::optional<PleResult> ple(const Snapshot& s) {
  std::size_t d_min = std::numeric_limits<std::size_t>::max();
  std::size_t count = 0;
  for (std::size_t d : s.degrees()) {
    if (d == 0) continue;
    d_min = std::min(d_min, d);
    ++count;
  }
  if (count == 0) return std::nullopt;
  double sum = 0.0;
  for (std::size_t d : s.degrees()) {
    if (d > 0) sum += std::log(static_cast<double>(d) / static_cast<double>(d_min));
  }
  if (sum <= 0.0) return PleResult{kPleCap, true};
  return PleResult{1.0 + static_cast<double>(count) / sum, false};
}

std::vector<double> activity_rate(const Ctdg& g) {
  std::vector<double> alpha(g.num_nodes(), 0.0);
  for (std::size_t i = 0; i < g.num_events(); ++i) {
    alpha[g.src_index(i)] += 1.0;
    alpha[g.dst_index(i)] += 1.0;
  }
  return alpha;
}

std::vector<double> DescriptorSeries::defined_values() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (defined[i]) out.push_back(values[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Incremental walk

namespace {

// Node count, edge count, union-find components and a degree histogram, all
// updated from each snapshot's delta.
class IncrementalState {
 public:
  void add_node(NodeId id) {
    const std::size_t idx = parent_.size();
    slot_.emplace(id, idx);
    parent_.push_back(idx);
    size_.push_back(1);
    degree_.push_back(0);
    ++components_;
    largest_ = std::max<std::size_t>(largest_, 1);
  }

  void add_edge(NodeId u, NodeId v) {
    const std::size_t a = slot_.at(u);
    const std::size_t b = slot_.at(v);
    bump_degree(a);
    bump_degree(b);
    ++edges_;
    unite(a, b);
  }

  double mean_degree() const {
    return parent_.empty() ? 0.0
                           : 2.0 * static_cast<double>(edges_) /
                                 static_cast<double>(parent_.size());
  }
  double lcc() const { return static_cast<double>(largest_); }
  double nc() const { return static_cast<double>(components_); }

  std::optional<PleResult> ple() const {
    if (histogram_.empty()) return std::nullopt;
    const double d_min = static_cast<double>(histogram_.begin()->first);
    std::size_t count = 0;
    double sum = 0.0;
    for (const auto& [d, c] : histogram_) {
      count += c;
      sum += static_cast<double>(c) * std::log(static_cast<double>(d) / d_min);
    }
    if (sum <= 0.0) return PleResult{kPleCap, true};
    return PleResult{1.0 + static_cast<double>(count) / sum, false};
  }

 private:
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    largest_ = std::max(largest_, size_[a]);
    --components_;
  }

  void bump_degree(std::size_t x) {
    const std::size_t old = degree_[x]++;
    if (old > 0) {
      auto it = histogram_.find(old);
      if (--it->second == 0) histogram_.erase(it);
    }
    ++histogram_[old + 1];
  }

  std::unordered_map<NodeId, std::size_t> slot_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> degree_;
  std::map<std::size_t, std::size_t> histogram_;  // positive degrees only
  std::size_t edges_ = 0;
  std::size_t components_ = 0;
  std::size_t largest_ = 0;
};

}  // namespace

DescriptorSeries snapshot_series(const Ctdg& g, Descriptor d, double phi) {
  if (!is_snapshot_descriptor(d)) {
    throw std::invalid_argument(std::string(descriptor_name(d)) +
                                " is not a snapshot statistic");
  }
  const auto snapshots = discretize(g, phi);
  DescriptorSeries out;
  out.descriptor = d;
  out.values.reserve(snapshots.size());
  out.defined.reserve(snapshots.size());

  IncrementalState state;
  double value = 0.0;
  bool defined = d != Descriptor::ple;
  bool capped = false;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const Snapshot& s = snapshots[i];
    const bool changed = i == 0 || !s.shares_graph_with(snapshots[i - 1]);
    if (changed) {
      for (NodeId id : s.added_nodes()) state.add_node(id);
      for (const Edge& e : s.added_edges()) state.add_edge(e.u, e.v);
      switch (d) {
        case Descriptor::mean_degree:
          value = state.mean_degree();
          break;
        case Descriptor::lcc:
          value = state.lcc();
          break;
        case Descriptor::nc:
          value = state.nc();
          break;
        case Descriptor::ple: {
          const auto r = state.ple();
          defined = r.has_value();
          value = r ? r->value : std::numeric_limits<double>::quiet_NaN();
          capped = r && r->capped;
          break;
        }
        case Descriptor::activity_rate:
          break;
      }
    }
    out.values.push_back(value);
    out.defined.push_back(defined);
    if (capped) ++out.capped;
  }
  return out;
}

DescriptorSeries descriptor_series(const Ctdg& g, Descriptor d, double phi) {
  if (is_snapshot_descriptor(d)) return snapshot_series(g, d, phi);
  DescriptorSeries out;
  out.descriptor = d;
  out.values = activity_rate(g);
  out.defined.assign(out.values.size(), true);
  return out;
}

void write_series_csv(const DescriptorSeries& s, std::ostream& out) {
  out << descriptor_name(s.descriptor) << '\n';
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    out << (s.defined[i] ? format_double(s.values[i]) : std::string("nan")) << '\n';
  }
}

}  // namespace jlm
