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

#include "jlmetric/ctdg.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include "jlmetric/format.hpp"
#include "jlmetric/rng.hpp"

namespace jlm {

void EventTable::reserve(std::size_t n) {
  src.reserve(n);
  dst.reserve(n);
  t.reserve(n);
  features.reserve(n * feature_dim);
}

void EventTable::push_back(NodeId s, NodeId d, double time,
                           std::span<const double> f) {
  if (f.size() != feature_dim) {
    throw std::invalid_argument("feature vector has " +
                                std::to_string(f.size()) + " values, expected " +
                                std::to_string(feature_dim));
  }
  src.push_back(s);
  dst.push_back(d);
  t.push_back(time);
  features.insert(features.end(), f.begin(), f.end());
}

Ctdg::Ctdg(EventTable table) {
  const std::size_t k = table.size();
  if (table.src.size() != k || table.dst.size() != k ||
      table.features.size() != k * table.feature_dim) {
    throw std::invalid_argument("event table columns have inconsistent sizes");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::isfinite(table.t[i]) || table.t[i] < 0.0) {
      throw std::invalid_argument("event " + std::to_string(i) +
                                  ": timestamp must be finite and >= 0");
    }
  }
  for (double f : table.features) {
    if (!std::isfinite(f)) {
      throw std::invalid_argument("non-finite event feature");
    }
  }

  if (!std::is_sorted(table.t.begin(), table.t.end())) {
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return table.t[a] < table.t[b];
    });
    EventTable sorted;
    sorted.feature_dim = table.feature_dim;
    sorted.reserve(k);
    for (auto i : order) {
      sorted.push_back(table.src[i], table.dst[i], table.t[i], table.row(i));
    }
    table = std::move(sorted);
  }
  table_ = std::move(table);

  nodes_.reserve(2 * k);
  nodes_.insert(nodes_.end(), table_.src.begin(), table_.src.end());
  nodes_.insert(nodes_.end(), table_.dst.begin(), table_.dst.end());
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  nodes_.shrink_to_fit();
  if (nodes_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("too many distinct nodes");
  }

  src_idx_.resize(k);
  dst_idx_.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    src_idx_[i] = static_cast<std::uint32_t>(index_of(table_.src[i]));
    dst_idx_[i] = static_cast<std::uint32_t>(index_of(table_.dst[i]));
  }
}

Ctdg Ctdg::from_events(std::span<const Event> events, std::size_t feature_dim) {
  EventTable table;
  table.feature_dim = feature_dim;
  table.reserve(events.size());
  for (const auto& e : events) table.push_back(e.src, e.dst, e.t, e.features);
  return Ctdg(std::move(table));
}

Event Ctdg::event(std::size_t i) const {
  auto f = features(i);
  return Event{src(i), dst(i), time(i), std::vector<double>(f.begin(), f.end())};
}

std::size_t Ctdg::index_of(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) {
    throw std::out_of_range("node " + std::to_string(id) + " not in graph");
  }
  return static_cast<std::size_t>(it - nodes_.begin());
}

double Ctdg::t_min() const {
  if (empty()) throw std::logic_error("t_min of empty CTDG");
  return table_.t.front();
}

double Ctdg::t_max() const {
  if (empty()) throw std::logic_error("t_max of empty CTDG");
  return table_.t.back();
}

Ctdg slice(const Ctdg& g, std::size_t begin, std::size_t count, bool rebase) {
  if (begin > g.num_events() || count > g.num_events() - begin) {
    throw std::out_of_range("slice exceeds event count");
  }
  EventTable out;
  out.feature_dim = g.feature_dim();
  out.reserve(count);
  const double shift = (rebase && count > 0) ? g.time(begin) : 0.0;
  for (std::size_t i = begin; i < begin + count; ++i) {
    out.push_back(g.src(i), g.dst(i), g.time(i) - shift, g.features(i));
  }
  return Ctdg(std::move(out));
}

Ctdg truncate(const Ctdg& g, std::size_t max_events) {
  return slice(g, 0, std::min(max_events, g.num_events()));
}

Ctdg with_constant_feature(const Ctdg& g, double value) {
  if (g.feature_dim() != 0) {
    throw std::invalid_argument("graph already has event features");
  }
  EventTable out = g.table();
  out.feature_dim = 1;
  out.features.assign(out.size(), value);
  return Ctdg(std::move(out));
}

// ---------------------------------------------------------------------------
// CSV

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<NodeId> parse_node(std::string_view s) {
  NodeId v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Ctdg parse_ctdg(std::istream& in, CsvFormat format) {
  const std::size_t lead = format == CsvFormat::events ? 3 : 4;
  EventTable table;
  bool have_dim = false;
  std::vector<double> row;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    auto fields = split_fields(view);

    if (first_content_line) {
      first_content_line = false;
      if (!parse_node(fields[0])) continue;  // header
    }
    if (fields.size() < lead) {
      throw ParseError(line_no, "expected at least " + std::to_string(lead) +
                                    " fields, got " +
                                    std::to_string(fields.size()));
    }
    auto src = parse_node(fields[0]);
    auto dst = parse_node(fields[1]);
    auto t = parse_double(fields[2]);
    if (!src) throw ParseError(line_no, "invalid source node id");
    if (!dst) throw ParseError(line_no, "invalid destination node id");
    if (!t || !std::isfinite(*t) || *t < 0.0) {
      throw ParseError(line_no, "invalid timestamp");
    }
    if (format == CsvFormat::jodie && !parse_double(fields[3])) {
      throw ParseError(line_no, "invalid state label");
    }

    const std::size_t k = fields.size() - lead;
    if (!have_dim) {
      table.feature_dim = k;
      have_dim = true;
    } else if (k != table.feature_dim) {
      throw ParseError(line_no, "inconsistent feature dimension: expected " +
                                    std::to_string(table.feature_dim) +
                                    ", got " + std::to_string(k));
    }
    row.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      auto f = parse_double(fields[lead + j]);
      if (!f || !std::isfinite(*f)) {
        throw ParseError(line_no, "invalid feature " + std::to_string(j + 1));
      }
      row[j] = *f;
    }
    table.push_back(*src, *dst, *t, row);
  }

  if (table.size() == 0) throw ParseError(line_no, "no events in input");

  if (format == CsvFormat::jodie) {
    const NodeId offset =
        *std::max_element(table.src.begin(), table.src.end()) + 1;
    for (auto& d : table.dst) d += offset;
  }
  return Ctdg(std::move(table));
}

Ctdg load_ctdg(const std::filesystem::path& path, CsvFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_ctdg(in, format);
}

void write_event_csv(const Ctdg& g, std::ostream& out) {
  out << "src,dst,t";
  for (std::size_t j = 0; j < g.feature_dim(); ++j) out << ",f" << (j + 1);
  out << '\n';
  for (std::size_t i = 0; i < g.num_events(); ++i) {
    out << g.src(i) << ',' << g.dst(i) << ',' << format_double(g.time(i));
    for (double f : g.features(i)) out << ',' << format_double(f);
    out << '\n';
  }
}

void save_ctdg(const Ctdg& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_event_csv(g, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CtdgManifest manifest(const Ctdg& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t i = 0; i < g.num_events(); ++i) {
    feed(g.src(i));
    feed(g.dst(i));
    feed(std::bit_cast<std::uint64_t>(g.time(i)));
    for (double f : g.features(i)) feed(std::bit_cast<std::uint64_t>(f));
  }
  return {g.num_nodes(), g.feature_dim(), g.num_events(), h};
}

void to_json(nlohmann::json& j, const CtdgManifest& m) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(m.checksum));
  j = nlohmann::json{{"num_nodes", m.num_nodes},
                     {"feature_dim", m.feature_dim},
                     {"num_events", m.num_events},
                     {"checksum", hex}};
}

void from_json(const nlohmann::json& j, CtdgManifest& m) {
  m.num_nodes = j.at("num_nodes").get<std::size_t>();
  m.feature_dim = j.at("feature_dim").get<std::size_t>();
  m.num_events = j.at("num_events").get<std::size_t>();
  m.checksum = std::stoull(j.at("checksum").get<std::string>(), nullptr, 16);
}

// ---------------------------------------------------------------------------
// Time axis

double nyquist_resolution(const Ctdg& g) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < g.num_events(); ++i) {
    const double gap = g.time(i) - g.time(i - 1);
    if (gap > 0.0) best = std::min(best, gap);
  }
  if (!std::isfinite(best)) throw std::domain_error("degenerate time axis");
  return best;
}

namespace {

void check_phi(double phi) {
  if (!(phi > 0.0) || !std::isfinite(phi)) {
    throw std::invalid_argument("temporal resolution must be positive");
  }
}

// Beyond this the handle vector alone would exhaust memory.
constexpr double kMaxSnapshots = 1e11;

}  // namespace

std::size_t snapshot_count(double tau_max, double phi) {
  check_phi(phi);
  if (tau_max < 0.0) return 1;
  const double q = std::floor(tau_max / phi);
  if (q > kMaxSnapshots) {
    throw std::length_error("snapshot count exceeds supported range");
  }
  auto i = static_cast<std::size_t>(q);
  while (static_cast<double>(i + 1) * phi <= tau_max) ++i;
  while (i > 0 && static_cast<double>(i) * phi > tau_max) --i;
  return i + 1;
}

std::size_t snapshot_index(double t, double phi) {
  check_phi(phi);
  if (t <= 0.0) return 0;
  const double q = std::ceil(t / phi);
  if (q > kMaxSnapshots) {
    throw std::length_error("snapshot index exceeds supported range");
  }
  auto i = static_cast<std::size_t>(q);
  while (i > 0 && t <= static_cast<double>(i - 1) * phi) --i;
  while (t > static_cast<double>(i) * phi) ++i;
  return i;
}

SnapshotSchedule SnapshotSchedule::for_graph(const Ctdg& g, double phi) {
  return {phi, g.empty() ? std::size_t{1} : snapshot_count(g.t_max(), phi)};
}

// ---------------------------------------------------------------------------
// Snapshots

std::vector<Snapshot> discretize(const Ctdg& g, double phi) {
  const auto schedule = SnapshotSchedule::for_graph(g, phi);
  std::vector<Snapshot> out;
  out.reserve(schedule.count);

  auto current = std::make_shared<const SnapshotGraph>();
  std::size_t next = 0;
  const std::size_t k = g.num_events();

  for (std::size_t i = 0; i < schedule.count; ++i) {
    const double when = static_cast<double>(i) * phi;
    if (next >= k || g.time(next) > when) {
      out.emplace_back(when, current);
      continue;
    }

    std::vector<NodeId> new_nodes;
    std::vector<Edge> new_edges;
    for (; next < k && g.time(next) <= when; ++next) {
      const NodeId a = g.src(next);
      const NodeId b = g.dst(next);
      new_nodes.push_back(a);
      new_nodes.push_back(b);
      if (a != b) new_edges.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(new_nodes.begin(), new_nodes.end());
    new_nodes.erase(std::unique(new_nodes.begin(), new_nodes.end()),
                    new_nodes.end());
    std::sort(new_edges.begin(), new_edges.end());
    new_edges.erase(std::unique(new_edges.begin(), new_edges.end()),
                    new_edges.end());

    auto next_graph = std::make_shared<SnapshotGraph>();
    const auto& prev = *current;

    std::set_difference(new_nodes.begin(), new_nodes.end(), prev.nodes.begin(),
                        prev.nodes.end(),
                        std::back_inserter(next_graph->added_nodes));
    std::set_difference(new_edges.begin(), new_edges.end(), prev.edges.begin(),
                        prev.edges.end(),
                        std::back_inserter(next_graph->added_edges));

    next_graph->nodes.reserve(prev.nodes.size() +
                              next_graph->added_nodes.size());
    std::merge(prev.nodes.begin(), prev.nodes.end(),
               next_graph->added_nodes.begin(), next_graph->added_nodes.end(),
               std::back_inserter(next_graph->nodes));
    next_graph->edges.reserve(prev.edges.size() +
                              next_graph->added_edges.size());
    std::merge(prev.edges.begin(), prev.edges.end(),
               next_graph->added_edges.begin(), next_graph->added_edges.end(),
               std::back_inserter(next_graph->edges));

    // Carry degrees forward, then bump endpoints of the added edges.
    next_graph->degrees.assign(next_graph->nodes.size(), 0);
    {
      std::size_t j = 0;
      for (std::size_t p = 0; p < prev.nodes.size(); ++p) {
        while (next_graph->nodes[j] != prev.nodes[p]) ++j;
        next_graph->degrees[j] = prev.degrees[p];
      }
    }
    auto bump = [&](NodeId id) {
      auto it = std::lower_bound(next_graph->nodes.begin(),
                                 next_graph->nodes.end(), id);
      ++next_graph->degrees[static_cast<std::size_t>(
          it - next_graph->nodes.begin())];
    };
    for (const auto& e : next_graph->added_edges) {
      bump(e.u);
      bump(e.v);
    }

    current = std::move(next_graph);
    out.emplace_back(when, current);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Grid

std::array<double, 2> grid_features(NodeId src, NodeId dst, double t) {
  return {static_cast<double>(src) * t, static_cast<double>(dst) + t};
}

Ctdg generate_grid(const GridSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1 || spec.rows * spec.cols < 2) {
    throw std::invalid_argument("grid needs at least two nodes");
  }
  if (spec.num_events < 1) throw std::invalid_argument("num_events must be positive");
  if (!(spec.interval > 0.0)) throw std::invalid_argument("interval must be positive");

  std::vector<std::pair<NodeId, NodeId>> lattice;
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      const NodeId id = r * spec.cols + c;
      if (c + 1 < spec.cols) lattice.emplace_back(id, id + 1);
      if (r + 1 < spec.rows) lattice.emplace_back(id, id + spec.cols);
    }
  }

  Rng rng(derive_seed(spec.seed, "grid"));
  EventTable table;
  table.feature_dim = 2;
  table.reserve(spec.num_events);
  for (std::size_t i = 0; i < spec.num_events; ++i) {
    auto [a, b] = lattice[i % lattice.size()];
    if (rng.uniform() < 0.5) std::swap(a, b);
    const double t = static_cast<double>(i + 1) * spec.interval;
    const auto f = grid_features(a, b, t);
    table.push_back(a, b, t, f);
  }
  return Ctdg(std::move(table));
}

Ctdg generate_grid(std::size_t side, std::size_t num_events, double interval,
                   std::uint64_t seed) {
  if (side < 2) throw std::invalid_argument("grid side must be >= 2");
  return generate_grid(GridSpec{side, side, num_events, interval, seed});
}

}  // namespace jlm
