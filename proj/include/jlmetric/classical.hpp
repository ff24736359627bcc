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

#ifndef JLMETRIC_CLASSICAL_HPP_
#define JLMETRIC_CLASSICAL_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "jlmetric/ctdg.hpp"

namespace jlm {

enum class Descriptor { mean_degree, lcc, nc, ple, activity_rate };

std::string_view descriptor_name(Descriptor d);

/// Throws std::invalid_argument for an unknown name.
Descriptor parse_descriptor(std::string_view name);

/// Statistics computed per snapshot, as opposed to per node.
constexpr bool is_snapshot_descriptor(Descriptor d) {
  return d != Descriptor::activity_rate;
}

/// Returned by ple() when every positive degree equals the minimum, where the
/// estimator diverges.
inline constexpr double kPleCap = 1.0 + 1e6;

double mean_degree(const Snapshot& s);
double lcc(const Snapshot& s);
double num_components(const Snapshot& s);

struct PleResult {
  double value = 0.0;
  bool capped = false;
};

/// Hill estimator over nodes of positive degree. nullopt when no node has a
/// positive degree.
std::optional<PleResult> ple(const Snapshot& s);

/// Per-node event participation counts, aligned with g.nodes(). A self-loop
/// counts twice for its node.
std::vector<double> activity_rate(const Ctdg& g);

/// Values of one descriptor. `defined[i]` is false for entries with no value
/// (PLE of a snapshot without edges); such entries hold NaN.
struct DescriptorSeries {
  Descriptor descriptor = Descriptor::mean_degree;
  std::vector<double> values;
  std::vector<bool> defined;
  /// Entries that hit kPleCap.
  std::size_t capped = 0;

  std::vector<double> defined_values() const;
};

/// Maps discretize(g, phi) through `d`, keeping degree and component state
/// incrementally across snapshots. Throws std::invalid_argument for
/// activity_rate, which is not a snapshot statistic.
DescriptorSeries snapshot_series(const Ctdg& g, Descriptor d, double phi);

/// snapshot_series for snapshot statistics, per-node counts for
/// activity_rate (phi unused).
DescriptorSeries descriptor_series(const Ctdg& g, Descriptor d, double phi);

/// One value per line; undefined entries are written as "nan".
void write_series_csv(const DescriptorSeries& s, std::ostream& out);

}  // namespace jlm

#endif  // JLMETRIC_CLASSICAL_HPP_
