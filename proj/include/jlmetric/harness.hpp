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

#ifndef JLMETRIC_HARNESS_HPP_
#define JLMETRIC_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jlmetric/classical.hpp"
#include "jlmetric/ctdg.hpp"
#include "jlmetric/distances.hpp"
#include "jlmetric/jl_metric.hpp"
#include "jlmetric/perturb.hpp"
#include "json.hpp"

namespace jlm {

// ---------------------------------------------------------------------------
// Metrics

/// A scoring rule rho(G_r, G_g): the JL metric, a descriptor series compared
/// by an estimator, or the per-event feature sample compared by an estimator.
struct Metric {
  enum class Family { jl, descriptor, feature };

  Family family = Family::jl;
  Descriptor descriptor = Descriptor::mean_degree;
  Estimator estimator = Estimator::ks;

  std::string name() const;
  bool uses_snapshots() const {
    return family == Family::descriptor && is_snapshot_descriptor(descriptor);
  }

  friend bool operator==(const Metric&, const Metric&) = default;
};

/// "jl", "<descriptor>:<ks|mmd>" or "feature:<kl|js|ks|mmd>".
Metric parse_metric(std::string_view name);

/// All 15 metrics in reporting order.
std::vector<Metric> all_metrics();

struct ScoreOptions {
  JlConfig jl;
  NormalizationMode normalization = NormalizationMode::per_graph;
  std::optional<double> mmd_bandwidth;
  std::size_t bins = 32;
};

/// Caches the reference side of a comparison so many generated graphs can be
/// scored against it. Snapshot metrics discretize both graphs at the
/// reference graph's Nyquist resolution. Undefined scores come back as NaN
/// (degenerate descriptor, empty series).
class MetricEvaluator {
 public:
  /// `shape` must cover the reference and every graph later scored.
  MetricEvaluator(const Ctdg& reference, std::vector<Metric> metrics,
                  const ScoreOptions& options, JlShape shape);

  const std::vector<Metric>& metrics() const { return metrics_; }

  /// One score per metric, in metrics() order.
  std::vector<double> score(const Ctdg& generated) const;

 private:
  const Ctdg& reference_;
  std::vector<Metric> metrics_;
  ScoreOptions options_;
  std::optional<double> phi_;
  std::optional<JlEmbedder> embedder_;
  std::optional<GraphDescriptor> reference_descriptor_;
  NormStats reference_stats_;
  std::vector<std::vector<double>> reference_series_;  // by Descriptor
};

/// Scores one pair from scratch, both sides included. Throws on undefined
/// scores instead of returning NaN.
double score_pair(const Ctdg& reference, const Ctdg& generated,
                  const Metric& metric, const ScoreOptions& options);

// ---------------------------------------------------------------------------
// Configuration

struct DatasetSpec {
  std::string name;
  std::optional<GridSpec> grid;
  std::filesystem::path path;
  CsvFormat format = CsvFormat::events;
  bool truncate = false;  // keep the first 1000 events
};

/// Loads or generates the dataset. Relative paths resolve against
/// `base_dir`. Featureless data gets a constant feature of 1.
Ctdg load_dataset(const DatasetSpec& spec,
                  const std::filesystem::path& base_dir = {});

struct SampleEfficiencyConfig {
  /// Dataset sampled for the two real windows; empty means the first
  /// configured dataset.
  std::string real;
  /// Dataset sampled for the generated window; empty means the real dataset
  /// after edge rewiring with p = 1.
  std::string generated;
  std::size_t lambda_min = 3;
  std::size_t lambda_max = 64;
  /// Seeds that must pass at a given lambda; 0 means ceil(0.6 * seeds).
  std::size_t min_passing = 0;
};

struct ExperimentConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<Metric> metrics = all_metrics();
  std::vector<PerturbKind> perturbations = {PerturbKind::edge_rewiring,
                                            PerturbKind::time_perturbation,
                                            PerturbKind::event_permutation};
  std::vector<double> p_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                0.6, 0.7, 0.8, 0.9, 1.0};
  std::size_t seeds = 10;
  std::uint64_t seed = 0;
  ScoreOptions scoring;
  PermuteMode permute_mode = PermuteMode::replace;
  std::filesystem::path output_dir = "results";
  std::size_t threads = 0;  // 0 = hardware concurrency
  SampleEfficiencyConfig sample_efficiency;
  std::size_t bench_repeats = 3;
  std::filesystem::path base_dir;

  /// Throws std::invalid_argument describing the first violated rule.
  void validate() const;
};

/// Parses and validates; unknown keys are rejected.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Seed of run `index` (0-based) under the global seed.
std::uint64_t run_seed(std::uint64_t global, std::size_t index);

// ---------------------------------------------------------------------------
// Sensitivity

struct CurvePoint {
  std::string dataset;
  std::string perturbation;
  std::string metric;
  std::size_t seed_index = 0;
  double p = 0.0;
  double score = 0.0;  // NaN when undefined
};

struct SensitivityRow {
  std::string dataset;
  std::string metric;
  std::string perturbation;
  std::vector<std::optional<double>> per_seed;
  std::optional<double> median;
  std::optional<double> iqr;
  bool no_response() const { return !median.has_value(); }
};

struct SensitivityResult {
  std::vector<SensitivityRow> rows;
  std::vector<CurvePoint> curves;
};

SensitivityResult run_sensitivity(const ExperimentConfig& cfg);

/// sensitivity.csv, sensitivity.json, sensitivity.txt and curves.csv.
void write_sensitivity(const SensitivityResult& r,
                       const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Sample efficiency

struct EfficiencyRow {
  std::string metric;
  /// False when the metric cannot compare the two datasets (feature metrics
  /// across different feature dimensions).
  bool applicable = true;
  std::optional<std::size_t> lambda;  // nullopt = not reached
  std::size_t passing_seeds = 0;      // at lambda, or at lambda_max
  std::size_t seeds = 0;
};

std::vector<EfficiencyRow> run_sample_efficiency(const ExperimentConfig& cfg);
void write_sample_efficiency(const std::vector<EfficiencyRow>& rows,
                             const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Benchmark

struct BenchRow {
  std::string dataset;
  std::string metric;
  std::size_t events = 0;
  double median_seconds = 0.0;
  double seconds_per_100_events = 0.0;
};

/// Times score_pair(G, edge_rewire(G, 0.5)) per metric and dataset; file
/// loading and the perturbation itself are outside the timed region.
std::vector<BenchRow> run_bench(const ExperimentConfig& cfg);
void write_bench(const std::vector<BenchRow>& rows,
                 const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Statistics helpers

/// Linear-interpolation quantile of a non-empty sample.
double quantile(std::vector<double> x, double q);

}  // namespace jlm

#endif  // JLMETRIC_HARNESS_HPP_
