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

#ifndef JLMETRIC_PERTURB_HPP_
#define JLMETRIC_PERTURB_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "jlmetric/ctdg.hpp"
#include "jlmetric/jl_metric.hpp"

namespace jlm {

// Every scheme draws a fixed number of random values per event (or per mode)
// whatever p is, and applies a change when its uniform draw falls below p.
// For one seed the set of changed events therefore only grows with p, and
// p = 0 returns the input unchanged.

enum class PerturbKind {
  edge_rewiring,
  time_perturbation,
  event_permutation,
  mode_dropping,
  mode_collapse,
};

std::string_view perturb_name(PerturbKind k);
PerturbKind parse_perturb(std::string_view name);

/// Each event's dst moves, with probability p, to a uniform node other than
/// its src. Throws std::invalid_argument for fewer than two nodes.
Ctdg edge_rewire(const Ctdg& g, double p, std::uint64_t seed);

/// With probability p, each interior event's timestamp is redrawn uniformly
/// inside (max(t_{i-1}, t'_{i-1}), t_{i+1}), t' being the already perturbed
/// predecessor. The first and last events are fixed, and event order is kept.
Ctdg time_perturb(const Ctdg& g, double p, std::uint64_t seed);

enum class PermuteMode {
  /// Copy the original features of a uniformly chosen other event.
  replace,
  /// Swap features with a uniformly chosen other event, in event order.
  swap,
};

/// Throws std::invalid_argument("no features to permute") for featureless
/// graphs and for fewer than two events.
Ctdg event_permute(const Ctdg& g, double p, std::uint64_t seed,
                   PermuteMode mode = PermuteMode::replace);

/// Clusters of nodes ("modes"), indexed like g.nodes().
struct ModeAssignment {
  std::vector<NodeId> nodes;
  std::vector<std::size_t> mode;
  std::size_t num_modes = 0;
  /// Node nearest each cluster mean in embedding space.
  std::vector<NodeId> representative;
  /// Mean feature vector of the events touching each mode.
  std::vector<std::vector<double>> mean_feature;

  std::size_t mode_of(NodeId id) const;
};

/// max(2, round(sqrt(z))).
std::size_t default_mode_count(std::size_t num_nodes);

/// k-means (k-means++ seeding) over stage-1 JL node embeddings, with
/// k = max(2, round(sqrt(z))) unless `k` is given. Falls back to k = 2, and
/// then to a seeded split into two halves when all embeddings coincide.
/// Throws std::invalid_argument for fewer than 4 nodes.
ModeAssignment cluster_modes(const Ctdg& g, const JlConfig& cfg,
                             std::uint64_t seed, std::size_t k = 0);

/// Each mode is dropped with probability p; if all are, the one with the
/// largest draw survives. Events touching a dropped mode are replaced by a
/// uniform event among those with both endpoints in surviving modes (or, if
/// none, touching one), keeping the original timestamp.
Ctdg mode_drop(const Ctdg& g, const ModeAssignment& modes, double p,
               std::uint64_t seed);

/// With probability p, an event's endpoints move to their modes'
/// representatives and its features become the src mode's mean feature.
Ctdg mode_collapse(const Ctdg& g, const ModeAssignment& modes, double p,
                   std::uint64_t seed);

struct PerturbOptions {
  PermuteMode permute_mode = PermuteMode::replace;
  /// Required for the two mode schemes.
  const ModeAssignment* modes = nullptr;
};

Ctdg perturb(const Ctdg& g, PerturbKind kind, double p, std::uint64_t seed,
             const PerturbOptions& options = {});

}  // namespace jlm

#endif  // JLMETRIC_PERTURB_HPP_
