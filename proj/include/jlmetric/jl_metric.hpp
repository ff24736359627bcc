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

#ifndef JLMETRIC_JL_METRIC_HPP_
#define JLMETRIC_JL_METRIC_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "jlmetric/ctdg.hpp"
#include "jlmetric/srm.hpp"
#include "json.hpp"

namespace jlm {

/// Per-channel min/max of a CTDG: the timestamp channel and each feature.
struct NormStats {
  double t_min = 0.0;
  double t_max = 0.0;
  std::vector<double> f_min;
  std::vector<double> f_max;

  static NormStats of(const Ctdg& g);
};

/// Events with node ids dropped and every channel min-max scaled. Row i is
/// (t_norm, f_1_norm, ..., f_k_norm) of event i; width = 1 + feature_dim.
struct ReducedEvents {
  std::size_t width = 1;
  std::vector<double> values;

  std::size_t size() const { return values.size() / width; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * width, width};
  }
};

/// Scales with `stats`; a channel with max == min maps to 0. Values are not
/// clamped, so normalizing with another graph's stats can leave [0, 1].
ReducedEvents normalize_events(const Ctdg& g, const NormStats& stats);
inline ReducedEvents normalize_events(const Ctdg& g) {
  return normalize_events(g, NormStats::of(g));
}

/// Time-ordered concatenation of the reduced events touching one node.
struct NodeSequence {
  NodeId node = 0;
  double first_seen = 0.0;
  std::vector<double> payload;
};

/// One sequence per node. An event is appended to both endpoints (once for a
/// self-loop). Ordered by first appearance, ties by ascending id.
std::vector<NodeSequence> build_node_sequences(const Ctdg& g,
                                               const ReducedEvents& events);

/// Longest node payload, (events touching node) * (1 + feature_dim).
std::size_t max_payload_length(const Ctdg& g);

enum class NormalizationMode {
  /// Each graph is scaled by its own channel ranges.
  per_graph,
  /// Generated graphs are scaled by the reference graph's ranges.
  reference,
};

struct JlConfig {
  std::size_t n = 100;
  std::size_t o = 100;
  std::uint64_t seed = 0;
  srm::MatrixKind matrix_kind = srm::MatrixKind::structured;
};

/// Everything that must agree for two descriptors to be comparable.
struct DescriptorParams {
  std::size_t n = 0;
  std::size_t o = 0;
  std::uint64_t seed_w1 = 0;
  std::uint64_t seed_w2 = 0;
  std::size_t m = 0;
  std::size_t z = 0;
  srm::MatrixKind matrix_kind = srm::MatrixKind::structured;

  friend bool operator==(const DescriptorParams&,
                         const DescriptorParams&) = default;
};

/// n x o descriptor matrix, row-major.
struct GraphDescriptor {
  DescriptorParams params;
  std::vector<double> matrix;

  double at(std::size_t row, std::size_t col) const {
    return matrix[row * params.o + col];
  }
};

void to_json(nlohmann::json& j, const GraphDescriptor& d);
void from_json(const nlohmann::json& j, GraphDescriptor& d);

/// Shared (M, Z) for a set of graphs compared under one configuration.
struct JlShape {
  std::size_t m = 1;
  std::size_t z = 1;

  static JlShape covering(std::span<const Ctdg* const> graphs);
};

/// Holds W1 (M x n) and W2 (Z x o). Read-only after construction, so one
/// instance may embed many graphs concurrently.
class JlEmbedder {
 public:
  JlEmbedder(const JlConfig& cfg, JlShape shape);

  const DescriptorParams& params() const { return params_; }
  const srm::RandomProjection& w1() const { return w1_; }
  const srm::RandomProjection& w2() const { return w2_; }

  /// Throws std::invalid_argument if a payload exceeds M or the node count
  /// exceeds Z.
  GraphDescriptor embed(const Ctdg& g) const;
  GraphDescriptor embed(const Ctdg& g, const NormStats& stats) const;
  GraphDescriptor embed_sequences(std::span<const NodeSequence> seqs) const;

 private:
  DescriptorParams params_;
  srm::RandomProjection w1_;
  srm::RandomProjection w2_;
};

GraphDescriptor embed_graph(const Ctdg& g, const JlConfig& cfg, JlShape shape);

/// 1 - <A, B>_F / (|A|_F |B|_F). Throws std::invalid_argument on a params
/// mismatch and std::domain_error("degenerate descriptor") if either matrix
/// is all zero.
double jl_distance(const GraphDescriptor& a, const GraphDescriptor& b);

/// Embeds both graphs under a shape covering the pair and returns their
/// distance.
double jl_score(const Ctdg& reference, const Ctdg& generated,
                const JlConfig& cfg,
                NormalizationMode mode = NormalizationMode::per_graph);

}  // namespace jlm

#endif  // JLMETRIC_JL_METRIC_HPP_
