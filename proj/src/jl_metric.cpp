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

#include "jlmetric/jl_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "jlmetric/rng.hpp"

namespace jlm {

NormStats NormStats::of(const Ctdg& g) {
  NormStats s;
  const std::size_t k = g.feature_dim();
  s.f_min.assign(k, std::numeric_limits<double>::infinity());
  s.f_max.assign(k, -std::numeric_limits<double>::infinity());
  if (g.empty()) {
    s.f_min.assign(k, 0.0);
    s.f_max.assign(k, 0.0);
    return s;
  }
  s.t_min = g.t_min();
  s.t_max = g.t_max();
  for (std::size_t i = 0; i < g.num_events(); ++i) {
    auto f = g.features(i);
    for (std::size_t c = 0; c < k; ++c) {
      s.f_min[c] = std::min(s.f_min[c], f[c]);
      s.f_max[c] = std::max(s.f_max[c], f[c]);
    }
  }
  return s;
}

namespace {

double scale_channel(double x, double lo, double hi) {
  return hi > lo ? (x - lo) / (hi - lo) : 0.0;
}

}  // namespace

ReducedEvents normalize_events(const Ctdg& g, const NormStats& stats) {
  const std::size_t k = g.feature_dim();
  if (stats.f_min.size() != k || stats.f_max.size() != k) {
    throw std::invalid_argument("normalization stats have " +
                                std::to_string(stats.f_min.size()) +
                                " feature channels, graph has " + std::to_string(k));
  }
  ReducedEvents out;
  out.width = 1 + k;
  out.values.resize(g.num_events() * out.width);
  for (std::size_t i = 0; i < g.num_events(); ++i) {
    double* row = out.values.data() + i * out.width;
    row[0] = scale_channel(g.time(i), stats.t_min, stats.t_max);
    auto f = g.features(i);
    for (std::size_t c = 0; c < k; ++c) {
      row[1 + c] = scale_channel(f[c], stats.f_min[c], stats.f_max[c]);
    }
  }
  return out;
}

std::vector<NodeSequence> build_node_sequences(const Ctdg& g,
                                               const ReducedEvents& events) {
  if (events.size() != g.num_events()) {
    throw std::invalid_argument("reduced events do not match graph");
  }
  const std::size_t num_nodes = g.num_nodes();
  const auto ids = g.nodes();
  std::vector<NodeSequence> by_index(num_nodes);
  std::vector<bool> seen(num_nodes, false);
  std::vector<std::size_t> counts(num_nodes, 0);
  for (std::size_t i = 0; i < g.num_events(); ++i) {
    ++counts[g.src_index(i)];
    if (g.dst_index(i) != g.src_index(i)) ++counts[g.dst_index(i)];
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    by_index[v].node = ids[v];
    by_index[v].payload.reserve(counts[v] * events.width);
  }
  auto append = [&](std::uint32_t v, std::size_t i) {
    if (!seen[v]) {
      seen[v] = true;
      by_index[v].first_seen = g.time(i);
    }
    auto r = events.row(i);
    by_index[v].payload.insert(by_index[v].payload.end(), r.begin(), r.end());
  };
  for (std::size_t i = 0; i < g.num_events(); ++i) {
    append(g.src_index(i), i);
    if (g.dst_index(i) != g.src_index(i)) append(g.dst_index(i), i);
  }
  std::stable_sort(by_index.begin(), by_index.end(),
                   [](const NodeSequence& a, const NodeSequence& b) {
                     if (a.first_seen != b.first_seen) return a.first_seen < b.first_seen;
                     return a.node < b.node;
                   });
  return by_index;
}

std::size_t max_payload_length(const Ctdg& g) {
  std::vector<std::size_t> counts(g.num_nodes(), 0);
  for (std::size_t i = 0; i < g.num_events(); ++i) {
    ++counts[g.src_index(i)];
    if (g.dst_index(i) != g.src_index(i)) ++counts[g.dst_index(i)];
  }
  const std::size_t most = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  return most * (1 + g.feature_dim());
}

// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const GraphDescriptor& d) {
  j = nlohmann::json{
      {"n", d.params.n},
      {"o", d.params.o},
      {"seed_w1", d.params.seed_w1},
      {"seed_w2", d.params.seed_w2},
      {"m", d.params.m},
      {"z", d.params.z},
      {"matrix_kind",
       d.params.matrix_kind == srm::MatrixKind::dense ? "dense" : "structured"},
      {"matrix", d.matrix},
  };
}

void from_json(const nlohmann::json& j, GraphDescriptor& d) {
  j.at("n").get_to(d.params.n);
  j.at("o").get_to(d.params.o);
  j.at("seed_w1").get_to(d.params.seed_w1);
  j.at("seed_w2").get_to(d.params.seed_w2);
  j.at("m").get_to(d.params.m);
  j.at("z").get_to(d.params.z);
  d.params.matrix_kind = j.at("matrix_kind").get<std::string>() == "dense"
                             ? srm::MatrixKind::dense
                             : srm::MatrixKind::structured;
  j.at("matrix").get_to(d.matrix);
  if (d.matrix.size() != d.params.n * d.params.o) {
    throw std::invalid_argument("descriptor matrix size does not match n x o");
  }
}

JlShape JlShape::covering(std::span<const Ctdg* const> graphs) {
  JlShape s;
  for (const Ctdg* g : graphs) {
    s.m = std::max(s.m, max_payload_length(*g));
    s.z = std::max(s.z, g->num_nodes());
  }
  return s;
}

// ---------------------------------------------------------------------------

JlEmbedder::JlEmbedder(const JlConfig& cfg, JlShape shape)
    : params_{cfg.n,
              cfg.o,
              derive_seed(cfg.seed, "W1"),
              derive_seed(cfg.seed, "W2"),
              shape.m,
              shape.z,
              cfg.matrix_kind},
      w1_(cfg.matrix_kind, shape.m, cfg.n, params_.seed_w1),
      w2_(cfg.matrix_kind, shape.z, cfg.o, params_.seed_w2) {}

GraphDescriptor JlEmbedder::embed(const Ctdg& g) const {
  return embed(g, NormStats::of(g));
}

GraphDescriptor JlEmbedder::embed(const Ctdg& g, const NormStats& stats) const {
  const auto seqs = build_node_sequences(g, normalize_events(g, stats));
  return embed_sequences(seqs);
}

GraphDescriptor JlEmbedder::embed_sequences(
    std::span<const NodeSequence> seqs) const {
  const std::size_t n = params_.n;
  const std::size_t o = params_.o;
  const std::size_t z = seqs.size();
  if (z > params_.z) {
    throw std::invalid_argument("graph has " + std::to_string(z) +
                                " nodes, descriptor shape allows " +
                                std::to_string(params_.z));
  }

  // Stage 1, stored coordinate-major: xt[k * z + j] is coordinate k of
  // node j's embedding, so each stage-2 input is contiguous.
  std::vector<double> xt(n * z);
  std::vector<double> out(n);
  std::vector<double> scratch;
  for (std::size_t j = 0; j < z; ++j) {
    if (seqs[j].payload.size() > params_.m) {
      throw std::invalid_argument("node payload of length " +
                                  std::to_string(seqs[j].payload.size()) +
                                  " exceeds M = " + std::to_string(params_.m));
    }
    w1_.apply(seqs[j].payload, out, scratch);
    for (std::size_t k = 0; k < n; ++k) xt[k * z + j] = out[k];
  }

  GraphDescriptor d;
  d.params = params_;
  d.matrix.resize(n * o);
  for (std::size_t k = 0; k < n; ++k) {
    w2_.apply(std::span<const double>(xt.data() + k * z, z),
              std::span<double>(d.matrix.data() + k * o, o), scratch);
  }
  return d;
}

GraphDescriptor embed_graph(const Ctdg& g, const JlConfig& cfg, JlShape shape) {
  return JlEmbedder(cfg, shape).embed(g);
}

double jl_distance(const GraphDescriptor& a, const GraphDescriptor& b) {
  if (!(a.params == b.params) || a.matrix.size() != b.matrix.size()) {
    throw std::invalid_argument("descriptors were built with different parameters");
  }
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < a.matrix.size(); ++i) {
    ab += a.matrix[i] * b.matrix[i];
    aa += a.matrix[i] * a.matrix[i];
    bb += b.matrix[i] * b.matrix[i];
  }
  if (aa == 0.0 || bb == 0.0) throw std::domain_error("degenerate descriptor");
  const double d = 1.0 - ab / std::sqrt(aa * bb);
  return std::clamp(d, 0.0, 2.0);
}

double jl_score(const Ctdg& reference, const Ctdg& generated,
                const JlConfig& cfg, NormalizationMode mode) {
  const Ctdg* pair[] = {&reference, &generated};
  const JlEmbedder embedder(cfg, JlShape::covering(pair));
  const NormStats ref_stats = NormStats::of(reference);
  const auto a = embedder.embed(reference, ref_stats);
  const auto b = mode == NormalizationMode::reference
                     ? embedder.embed(generated, ref_stats)
                     : embedder.embed(generated);
  return jl_distance(a, b);
}

}  // namespace jlm
