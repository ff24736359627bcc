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

#ifndef JLMETRIC_CTDG_HPP_
#define JLMETRIC_CTDG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace jlm {

using NodeId = std::uint64_t;

/// One timestamped interaction (src, dst, t, features).
struct Event {
  NodeId src = 0;
  NodeId dst = 0;
  double t = 0.0;
  std::vector<double> features;
};

/// Column-major event storage. Features are stored row-major, one row of
/// `feature_dim` values per event.
struct EventTable {
  std::vector<NodeId> src;
  std::vector<NodeId> dst;
  std::vector<double> t;
  std::vector<double> features;
  std::size_t feature_dim = 0;

  std::size_t size() const { return t.size(); }
  void reserve(std::size_t n);
  void push_back(NodeId s, NodeId d, double time, std::span<const double> f);

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * feature_dim, feature_dim};
  }
  std::span<double> row(std::size_t i) {
    return {features.data() + i * feature_dim, feature_dim};
  }

  friend bool operator==(const EventTable&, const EventTable&) = default;
};

/// A continuous-time dynamic graph: a time-ordered event sequence starting
/// from the empty graph. Immutable after construction.
///
/// Events are stably sorted by timestamp on construction, so ties keep their
/// input order. Node ids need not be contiguous; `nodes()` lists the distinct
/// ids in ascending order and `src_index`/`dst_index` give each endpoint's
/// position in that list.
class Ctdg {
 public:
  Ctdg() = default;

  /// Validates and stably sorts `table`. Throws std::invalid_argument on a
  /// negative or non-finite timestamp, non-finite feature, or a feature
  /// buffer whose size disagrees with `feature_dim`.
  explicit Ctdg(EventTable table);

  static Ctdg from_events(std::span<const Event> events,
                          std::size_t feature_dim);

  std::size_t num_events() const { return table_.size(); }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t feature_dim() const { return table_.feature_dim; }
  bool empty() const { return table_.size() == 0; }

  NodeId src(std::size_t i) const { return table_.src[i]; }
  NodeId dst(std::size_t i) const { return table_.dst[i]; }
  double time(std::size_t i) const { return table_.t[i]; }
  std::span<const double> features(std::size_t i) const {
    return table_.row(i);
  }
  Event event(std::size_t i) const;

  const EventTable& table() const { return table_; }
  std::span<const NodeId> nodes() const { return nodes_; }
  std::uint32_t src_index(std::size_t i) const { return src_idx_[i]; }
  std::uint32_t dst_index(std::size_t i) const { return dst_idx_[i]; }

  /// Position of `id` in nodes(); throws std::out_of_range if absent.
  std::size_t index_of(NodeId id) const;

  double t_min() const;
  double t_max() const;

  friend bool operator==(const Ctdg& a, const Ctdg& b) {
    return a.table_ == b.table_;
  }

 private:
  EventTable table_;
  std::vector<NodeId> nodes_;
  std::vector<std::uint32_t> src_idx_;
  std::vector<std::uint32_t> dst_idx_;
};

/// Events [begin, begin + count). With `rebase`, timestamps are shifted so the
/// window starts at t = 0.
Ctdg slice(const Ctdg& g, std::size_t begin, std::size_t count,
           bool rebase = false);

/// First `max_events` events in time order.
Ctdg truncate(const Ctdg& g, std::size_t max_events);

/// Copy of a featureless graph with one constant feature per event.
Ctdg with_constant_feature(const Ctdg& g, double value = 1.0);

// ---------------------------------------------------------------------------
// Event CSV

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class CsvFormat {
  /// `src,dst,t,f1,...,fk`, header optional.
  events,
  /// `user_id,item_id,timestamp,state_label,f1,...,fk`; item ids are offset
  /// past the largest user id so the two id spaces are disjoint.
  jodie,
};

Ctdg parse_ctdg(std::istream& in, CsvFormat format = CsvFormat::events);
Ctdg load_ctdg(const std::filesystem::path& path,
               CsvFormat format = CsvFormat::events);

void write_event_csv(const Ctdg& g, std::ostream& out);
void save_ctdg(const Ctdg& g, const std::filesystem::path& path);

/// Bookkeeping summary of a CTDG.
struct CtdgManifest {
  std::size_t num_nodes = 0;
  std::size_t feature_dim = 0;
  std::size_t num_events = 0;
  std::uint64_t checksum = 0;
};

CtdgManifest manifest(const Ctdg& g);
void to_json(nlohmann::json& j, const CtdgManifest& m);
void from_json(const nlohmann::json& j, CtdgManifest& m);

// ---------------------------------------------------------------------------
// Time axis

/// Smallest positive gap between consecutive distinct timestamps. Throws
/// std::domain_error("degenerate time axis") when fewer than two distinct
/// timestamps exist.
double nyquist_resolution(const Ctdg& g);

/// floor(tau_max / phi) + 1, evaluated against the same `i * phi` grid used to
/// place events.
std::size_t snapshot_count(double tau_max, double phi);

/// Smallest i with t <= i * phi.
std::size_t snapshot_index(double t, double phi);

struct SnapshotSchedule {
  double phi = 1.0;
  std::size_t count = 1;

  static SnapshotSchedule for_graph(const Ctdg& g, double phi);
};

// ---------------------------------------------------------------------------
// Snapshots

/// Undirected edge with u <= v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// The induced static graph after a prefix of events, plus the delta that
/// produced it from its predecessor.
struct SnapshotGraph {
  std::vector<NodeId> nodes;           // sorted
  std::vector<std::size_t> degrees;    // aligned with nodes
  std::vector<Edge> edges;             // sorted, unique
  std::vector<NodeId> added_nodes;
  std::vector<Edge> added_edges;
};

/// A snapshot at time i * phi. Snapshots with no new events share their
/// predecessor's graph.
class Snapshot {
 public:
  Snapshot(double time, std::shared_ptr<const SnapshotGraph> graph)
      : time_(time), graph_(std::move(graph)) {}

  double time() const { return time_; }
  std::span<const NodeId> nodes() const { return graph_->nodes; }
  std::span<const std::size_t> degrees() const { return graph_->degrees; }
  std::span<const Edge> edges() const { return graph_->edges; }
  std::span<const NodeId> added_nodes() const { return graph_->added_nodes; }
  std::span<const Edge> added_edges() const { return graph_->added_edges; }
  bool shares_graph_with(const Snapshot& other) const {
    return graph_ == other.graph_;
  }

 private:
  double time_;
  std::shared_ptr<const SnapshotGraph> graph_;
};

/// Snapshots at 0, phi, 2 phi, ..., each the cumulative undirected edge set of
/// all events with t <= i * phi. Each distinct snapshot is derived from the
/// previous one by applying the newly covered events. Self-loops register
/// their node but add no edge. Throws std::invalid_argument when phi <= 0.
std::vector<Snapshot> discretize(const Ctdg& g, double phi);

// ---------------------------------------------------------------------------
// Synthetic grid dataset

struct GridSpec {
  std::size_t rows = 11;
  std::size_t cols = 49;
  std::size_t num_events = 1000;
  double interval = 1.0;
  std::uint64_t seed = 0;
};

/// Event features of the grid dataset: (src * t, dst + t).
std::array<double, 2> grid_features(NodeId src, NodeId dst, double t);

/// Lattice CTDG. Node (r, c) has id r * cols + c. Lattice edges are visited in
/// row-major node order, right neighbour before lower neighbour; the i-th
/// emitted event (1-based) fires at t = i * interval, and the edge list is
/// cycled when num_events exceeds the edge count. The seed picks each event's
/// direction.
Ctdg generate_grid(const GridSpec& spec);
Ctdg generate_grid(std::size_t side, std::size_t num_events, double interval,
                   std::uint64_t seed);

}  // namespace jlm

#endif  // JLMETRIC_CTDG_HPP_
