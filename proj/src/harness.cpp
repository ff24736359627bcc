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

#include "jlmetric/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "jlmetric/format.hpp"
#include "jlmetric/rng.hpp"

namespace jlm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr Descriptor kDescriptors[] = {
    Descriptor::mean_degree, Descriptor::lcc, Descriptor::nc, Descriptor::ple,
    Descriptor::activity_rate};

std::size_t slot(Descriptor d) { return static_cast<std::size_t>(d); }

}  // namespace

// ---------------------------------------------------------------------------
// Metrics

std::string Metric::name() const {
  switch (family) {
    case Family::jl:
      return "jl";
    case Family::descriptor:
      return std::string(descriptor_name(descriptor)) + ":" +
             std::string(estimator_name(estimator));
    case Family::feature:
      return "feature:" + std::string(estimator_name(estimator));
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  if (name == "jl") return Metric{};
  const auto colon = name.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("unknown metric: " + std::string(name));
  }
  const auto head = name.substr(0, colon);
  Metric m;
  m.estimator = parse_estimator(name.substr(colon + 1));
  if (head == "feature") {
    m.family = Metric::Family::feature;
    return m;
  }
  m.family = Metric::Family::descriptor;
  m.descriptor = parse_descriptor(head);
  if (m.estimator != Estimator::ks && m.estimator != Estimator::mmd) {
    throw std::invalid_argument("descriptor metrics take ks or mmd: " +
                                std::string(name));
  }
  return m;
}

std::vector<Metric> all_metrics() {
  std::vector<Metric> out{Metric{}};
  for (Descriptor d : kDescriptors) {
    for (Estimator e : {Estimator::ks, Estimator::mmd}) {
      out.push_back({Metric::Family::descriptor, d, e});
    }
  }
  for (Estimator e : {Estimator::kl, Estimator::js, Estimator::ks, Estimator::mmd}) {
    out.push_back({Metric::Family::feature, Descriptor::mean_degree, e});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scoring

MetricEvaluator::MetricEvaluator(const Ctdg& reference,
                                 std::vector<Metric> metrics,
                                 const ScoreOptions& options, JlShape shape)
    : reference_(reference),
      metrics_(std::move(metrics)),
      options_(options),
      reference_series_(std::size(kDescriptors)) {
  bool need_jl = false;
  bool need_phi = false;
  std::vector<bool> need(std::size(kDescriptors), false);
  for (const auto& m : metrics_) {
    need_jl = need_jl || m.family == Metric::Family::jl;
    need_phi = need_phi || m.uses_snapshots();
    if (m.family == Metric::Family::descriptor) need[slot(m.descriptor)] = true;
  }
  if (need_phi) {
    try {
      phi_ = nyquist_resolution(reference);
    } catch (const std::domain_error&) {
      phi_.reset();
    }
  }
  for (Descriptor d : kDescriptors) {
    if (!need[slot(d)]) continue;
    if (is_snapshot_descriptor(d) && !phi_) continue;
    reference_series_[slot(d)] =
        descriptor_series(reference, d, phi_.value_or(1.0)).defined_values();
  }
  if (need_jl) {
    embedder_.emplace(options.jl, shape);
    reference_stats_ = NormStats::of(reference);
    reference_descriptor_ = embedder_->embed(reference, reference_stats_);
  }
}

std::vector<double> MetricEvaluator::score(const Ctdg& generated) const {
  std::vector<std::vector<double>> series(std::size(kDescriptors));
  std::vector<bool> have(std::size(kDescriptors), false);
  auto generated_series = [&](Descriptor d) -> const std::vector<double>& {
    if (!have[slot(d)]) {
      series[slot(d)] =
          descriptor_series(generated, d, phi_.value_or(1.0)).defined_values();
      have[slot(d)] = true;
    }
    return series[slot(d)];
  };

  const FeatureView ref_features{reference_.table().features,
                                 reference_.feature_dim()};
  const FeatureView gen_features{generated.table().features,
                                 generated.feature_dim()};

  std::vector<double> out;
  out.reserve(metrics_.size());
  for (const auto& m : metrics_) {
    double value = kNaN;
    switch (m.family) {
      case Metric::Family::jl: {
        const auto d = options_.normalization == NormalizationMode::reference
                           ? embedder_->embed(generated, reference_stats_)
                           : embedder_->embed(generated);
        try {
          value = jl_distance(*reference_descriptor_, d);
        } catch (const std::domain_error&) {
          value = kNaN;
        }
        break;
      }
      case Metric::Family::descriptor: {
        if (m.uses_snapshots() && !phi_) break;
        const auto& a = reference_series_[slot(m.descriptor)];
        const auto& b = generated_series(m.descriptor);
        if (a.empty() || b.empty()) break;
        value = m.estimator == Estimator::ks
                    ? ks_distance(a, b)
                    : mmd_distance(a, b, options_.mmd_bandwidth);
        break;
      }
      case Metric::Family::feature: {
        if (ref_features.rows() == 0 || gen_features.rows() == 0) break;
        switch (m.estimator) {
          case Estimator::kl:
            value = kl_divergence(ref_features, gen_features, options_.bins);
            break;
          case Estimator::js:
            value = js_divergence(ref_features, gen_features, options_.bins);
            break;
          case Estimator::ks:
            value = feature_ks(ref_features, gen_features);
            break;
          case Estimator::mmd:
            value = feature_mmd(ref_features, gen_features, options_.mmd_bandwidth);
            break;
        }
        break;
      }
    }
    out.push_back(value);
  }
  return out;
}

double score_pair(const Ctdg& reference, const Ctdg& generated,
                  const Metric& metric, const ScoreOptions& options) {
  const Ctdg* pair[] = {&reference, &generated};
  const MetricEvaluator eval(reference, {metric}, options, JlShape::covering(pair));
  const double v = eval.score(generated).front();
  if (std::isnan(v)) {
    throw std::domain_error("score of " + metric.name() + " is undefined for this pair");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Configuration

Ctdg load_dataset(const DatasetSpec& spec, const std::filesystem::path& base_dir) {
  Ctdg g;
  if (spec.grid) {
    g = generate_grid(*spec.grid);
  } else {
    auto path = spec.path;
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    g = load_ctdg(path, spec.format);
  }
  if (spec.truncate) g = truncate(g, 1000);
  if (g.feature_dim() == 0) g = with_constant_feature(g, 1.0);
  return g;
}

void ExperimentConfig::validate() const {
  if (p_grid.size() < 2) throw std::invalid_argument("at least 2 grid points required");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 0.0 && p_grid[i] <= 1.0)) {
      throw std::invalid_argument("p_grid values must lie in [0, 1]");
    }
    if (i > 0 && !(p_grid[i - 1] < p_grid[i])) {
      throw std::invalid_argument("p_grid must be strictly increasing");
    }
  }
  if (p_grid.front() != 0.0) throw std::invalid_argument("p_grid must contain 0");
  if (seeds < 1) throw std::invalid_argument("at least 1 seed required");
  if (metrics.empty()) throw std::invalid_argument("no metrics configured");
  if (scoring.jl.n < 1 || scoring.jl.o < 1) {
    throw std::invalid_argument("jl.n and jl.o must be positive");
  }
  if (scoring.bins < 1) throw std::invalid_argument("estimators.bins must be positive");
  if (scoring.mmd_bandwidth && !(*scoring.mmd_bandwidth > 0.0)) {
    throw std::invalid_argument("estimators.mmd_bandwidth must be positive");
  }
  if (bench_repeats < 3) throw std::invalid_argument("bench.repeats must be at least 3");
  if (sample_efficiency.lambda_min < 1 ||
      sample_efficiency.lambda_max < sample_efficiency.lambda_min) {
    throw std::invalid_argument("sample_efficiency lambda range is empty");
  }
  if (sample_efficiency.min_passing > seeds) {
    throw std::invalid_argument("sample_efficiency.min_passing exceeds seeds");
  }
  std::set<std::string> names;
  for (const auto& d : datasets) {
    if (d.name.empty()) throw std::invalid_argument("dataset without a name");
    if (!names.insert(d.name).second) {
      throw std::invalid_argument("duplicate dataset name: " + d.name);
    }
  }
}

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<std::string_view> keys,
                    std::string_view where) {
  if (!j.is_object()) {
    throw std::invalid_argument(std::string(where) + " must be an object");
  }
  for (const auto& [k, v] : j.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw std::invalid_argument("unknown key '" + k + "' in " + std::string(where));
    }
  }
}

DatasetSpec parse_dataset(const json& j) {
  reject_unknown(j, {"name", "generator", "path", "format", "truncate"}, "dataset");
  DatasetSpec d;
  d.name = j.at("name").get<std::string>();
  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    reject_unknown(g, {"rows", "cols", "events", "interval", "seed"}, "generator");
    GridSpec s;
    s.rows = g.value("rows", s.rows);
    s.cols = g.value("cols", s.cols);
    s.num_events = g.value("events", s.num_events);
    s.interval = g.value("interval", s.interval);
    s.seed = g.value("seed", s.seed);
    d.grid = s;
  } else if (j.contains("path")) {
    d.path = j.at("path").get<std::string>();
    const auto format = j.value("format", std::string("events"));
    if (format == "events") {
      d.format = CsvFormat::events;
    } else if (format == "jodie") {
      d.format = CsvFormat::jodie;
    } else {
      throw std::invalid_argument("unknown dataset format: " + format);
    }
  } else {
    throw std::invalid_argument("dataset '" + d.name + "' needs a generator or a path");
  }
  d.truncate = j.value("truncate", false);
  return d;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j) {
  reject_unknown(j,
                 {"datasets", "metrics", "perturbations", "p_grid", "seeds", "seed",
                  "jl", "estimators", "permute_mode", "output_dir", "threads",
                  "sample_efficiency", "bench"},
                 "config");
  ExperimentConfig c;
  if (j.contains("datasets")) {
    for (const auto& d : j.at("datasets")) c.datasets.push_back(parse_dataset(d));
  }
  if (j.contains("metrics")) {
    const auto& m = j.at("metrics");
    if (!(m.is_string() && m.get<std::string>() == "all")) {
      c.metrics.clear();
      for (const auto& name : m) c.metrics.push_back(parse_metric(name.get<std::string>()));
    }
  }
  if (j.contains("perturbations")) {
    c.perturbations.clear();
    for (const auto& name : j.at("perturbations")) {
      c.perturbations.push_back(parse_perturb(name.get<std::string>()));
    }
  }
  if (j.contains("p_grid")) c.p_grid = j.at("p_grid").get<std::vector<double>>();
  c.seeds = j.value("seeds", c.seeds);
  c.seed = j.value("seed", c.seed);
  if (j.contains("jl")) {
    const auto& k = j.at("jl");
    reject_unknown(k, {"n", "o", "matrix", "normalization"}, "jl");
    c.scoring.jl.n = k.value("n", c.scoring.jl.n);
    c.scoring.jl.o = k.value("o", c.scoring.jl.o);
    const auto matrix = k.value("matrix", std::string("structured"));
    if (matrix == "structured") {
      c.scoring.jl.matrix_kind = srm::MatrixKind::structured;
    } else if (matrix == "dense") {
      c.scoring.jl.matrix_kind = srm::MatrixKind::dense;
    } else {
      throw std::invalid_argument("unknown jl.matrix: " + matrix);
    }
    const auto norm = k.value("normalization", std::string("per_graph"));
    if (norm == "per_graph") {
      c.scoring.normalization = NormalizationMode::per_graph;
    } else if (norm == "reference") {
      c.scoring.normalization = NormalizationMode::reference;
    } else {
      throw std::invalid_argument("unknown jl.normalization: " + norm);
    }
  }
  if (j.contains("estimators")) {
    const auto& e = j.at("estimators");
    reject_unknown(e, {"mmd_bandwidth", "bins"}, "estimators");
    if (e.contains("mmd_bandwidth")) {
      const auto& bw = e.at("mmd_bandwidth");
      if (bw.is_string()) {
        if (bw.get<std::string>() != "auto") {
          throw std::invalid_argument("estimators.mmd_bandwidth must be a number or \"auto\"");
        }
      } else {
        c.scoring.mmd_bandwidth = bw.get<double>();
      }
    }
    c.scoring.bins = e.value("bins", c.scoring.bins);
  }
  if (j.contains("permute_mode")) {
    const auto mode = j.at("permute_mode").get<std::string>();
    if (mode == "replace") {
      c.permute_mode = PermuteMode::replace;
    } else if (mode == "swap") {
      c.permute_mode = PermuteMode::swap;
    } else {
      throw std::invalid_argument("unknown permute_mode: " + mode);
    }
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  c.threads = j.value("threads", c.threads);
  if (j.contains("sample_efficiency")) {
    const auto& s = j.at("sample_efficiency");
    reject_unknown(s, {"real", "generated", "lambda_min", "lambda_max", "min_passing"},
                   "sample_efficiency");
    auto& se = c.sample_efficiency;
    se.real = s.value("real", se.real);
    se.generated = s.value("generated", se.generated);
    se.lambda_min = s.value("lambda_min", se.lambda_min);
    se.lambda_max = s.value("lambda_max", se.lambda_max);
    se.min_passing = s.value("min_passing", se.min_passing);
  }
  if (j.contains("bench")) {
    const auto& b = j.at("bench");
    reject_unknown(b, {"repeats"}, "bench");
    c.bench_repeats = b.value("repeats", c.bench_repeats);
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed config " + path.string() + ": " + e.what());
  }
  auto cfg = parse_experiment_config(j);
  cfg.base_dir = path.parent_path();
  return cfg;
}

std::uint64_t run_seed(std::uint64_t global, std::size_t index) {
  return derive_seed(global, static_cast<std::uint64_t>(index));
}

// ---------------------------------------------------------------------------
// Execution helpers

namespace {

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<Ctdg> load_all(const ExperimentConfig& cfg) {
  if (cfg.datasets.empty()) throw std::invalid_argument("no datasets configured");
  std::vector<Ctdg> out;
  out.reserve(cfg.datasets.size());
  for (const auto& d : cfg.datasets) out.push_back(load_dataset(d, cfg.base_dir));
  return out;
}

bool needs_modes(PerturbKind k) {
  return k == PerturbKind::mode_dropping || k == PerturbKind::mode_collapse;
}

std::string cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("nan");
}

std::string cell(double v) { return std::isnan(v) ? std::string("nan") : format_double(v); }

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

}  // namespace

double quantile(std::vector<double> x, double q) {
  if (x.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(x.begin(), x.end());
  const double h = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

// ---------------------------------------------------------------------------
// Sensitivity

SensitivityResult run_sensitivity(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto data = load_all(cfg);
  const std::size_t nd = data.size();
  const std::size_t nk = cfg.perturbations.size();
  const std::size_t ns = cfg.seeds;
  const std::size_t np = cfg.p_grid.size();
  const std::size_t nm = cfg.metrics.size();

  // scores[task][p][metric], task = (d * nk + k) * ns + s.
  std::vector<std::vector<std::vector<double>>> scores(nd * nk * ns);
  parallel_for(scores.size(), cfg.threads, [&](std::size_t task) {
    const std::size_t s = task % ns;
    const std::size_t k = (task / ns) % nk;
    const std::size_t d = task / (ns * nk);
    const Ctdg& ref = data[d];
    const PerturbKind kind = cfg.perturbations[k];
    const std::uint64_t seed = run_seed(cfg.seed, s);

    ScoreOptions opt = cfg.scoring;
    opt.jl.seed = seed;
    std::optional<ModeAssignment> modes;
    if (needs_modes(kind)) modes = cluster_modes(ref, opt.jl, derive_seed(seed, "modes"));
    PerturbOptions popt{cfg.permute_mode, modes ? &*modes : nullptr};

    std::vector<Ctdg> generated;
    generated.reserve(np);
    for (double p : cfg.p_grid) {
      generated.push_back(perturb(ref, kind, p, derive_seed(seed, "perturb"), popt));
    }
    std::vector<const Ctdg*> all{&ref};
    for (const auto& g : generated) all.push_back(&g);
    const MetricEvaluator eval(ref, cfg.metrics, opt, JlShape::covering(all));

    auto& out = scores[task];
    out.reserve(np);
    for (const auto& g : generated) out.push_back(eval.score(g));
  });

  SensitivityResult r;
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t m = 0; m < nm; ++m) {
      for (std::size_t k = 0; k < nk; ++k) {
        SensitivityRow row;
        row.dataset = cfg.datasets[d].name;
        row.metric = cfg.metrics[m].name();
        row.perturbation = std::string(perturb_name(cfg.perturbations[k]));
        std::vector<double> defined;
        for (std::size_t s = 0; s < ns; ++s) {
          const auto& task = scores[(d * nk + k) * ns + s];
          std::vector<double> curve(np);
          bool ok = true;
          for (std::size_t p = 0; p < np; ++p) {
            curve[p] = task[p][m];
            ok = ok && !std::isnan(curve[p]);
          }
          std::optional<double> rho;
          if (ok && np >= 3) rho = spearman(cfg.p_grid, curve);
          row.per_seed.push_back(rho);
          if (rho) defined.push_back(*rho);
        }
        if (!defined.empty()) {
          row.median = quantile(defined, 0.5);
          row.iqr = quantile(defined, 0.75) - quantile(defined, 0.25);
        }
        r.rows.push_back(std::move(row));
      }
    }
    for (std::size_t k = 0; k < nk; ++k) {
      for (std::size_t m = 0; m < nm; ++m) {
        for (std::size_t s = 0; s < ns; ++s) {
          const auto& task = scores[(d * nk + k) * ns + s];
          for (std::size_t p = 0; p < np; ++p) {
            r.curves.push_back({cfg.datasets[d].name,
                                std::string(perturb_name(cfg.perturbations[k])),
                                cfg.metrics[m].name(), s, cfg.p_grid[p], task[p][m]});
          }
        }
      }
    }
  }
  return r;
}

void write_sensitivity(const SensitivityResult& r, const std::filesystem::path& dir) {
  {
    auto out = open_output(dir, "sensitivity.csv");
    out << "dataset,metric,perturbation,median,iqr,defined_seeds,seeds,no_response,per_seed\n";
    for (const auto& row : r.rows) {
      std::size_t defined = 0;
      std::string per_seed;
      for (std::size_t i = 0; i < row.per_seed.size(); ++i) {
        if (row.per_seed[i]) ++defined;
        if (i > 0) per_seed += ';';
        per_seed += cell(row.per_seed[i]);
      }
      out << row.dataset << ',' << row.metric << ',' << row.perturbation << ','
          << cell(row.median) << ',' << cell(row.iqr) << ',' << defined << ','
          << row.per_seed.size() << ',' << (row.no_response() ? 1 : 0) << ','
          << per_seed << '\n';
    }
  }
  {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
      nlohmann::json seeds = nlohmann::json::array();
      for (const auto& v : row.per_seed) {
        seeds.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
      }
      rows.push_back({{"dataset", row.dataset},
                      {"metric", row.metric},
                      {"perturbation", row.perturbation},
                      {"median", row.median ? nlohmann::json(*row.median) : nlohmann::json(nullptr)},
                      {"iqr", row.iqr ? nlohmann::json(*row.iqr) : nlohmann::json(nullptr)},
                      {"no_response", row.no_response()},
                      {"per_seed", seeds}});
    }
    auto out = open_output(dir, "sensitivity.json");
    out << nlohmann::json{{"rows", rows}}.dump(2) << '\n';
  }
  {
    // Human-readable: one block per dataset, metrics down, perturbations across.
    auto out = open_output(dir, "sensitivity.txt");
    std::vector<std::string> datasets, metrics, perturbations;
    auto remember = [](std::vector<std::string>& v, const std::string& s) {
      if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
    };
    for (const auto& row : r.rows) {
      remember(datasets, row.dataset);
      remember(metrics, row.metric);
      remember(perturbations, row.perturbation);
    }
    auto find = [&](const std::string& d, const std::string& m,
                    const std::string& k) -> const SensitivityRow* {
      for (const auto& row : r.rows) {
        if (row.dataset == d && row.metric == m && row.perturbation == k) return &row;
      }
      return nullptr;
    };
    auto pad = [](std::string s, std::size_t w) {
      if (s.size() < w) s.append(w - s.size(), ' ');
      return s;
    };
    constexpr std::size_t kMetricWidth = 20;
    constexpr std::size_t kCellWidth = 22;
    for (const auto& d : datasets) {
      out << "dataset: " << d << "  (median Spearman rho +/- IQR over seeds; --- = no response)\n";
      out << pad("metric", kMetricWidth);
      for (const auto& k : perturbations) out << pad(k, kCellWidth);
      out << '\n';
      for (const auto& m : metrics) {
        out << pad(m, kMetricWidth);
        for (const auto& k : perturbations) {
          const auto* row = find(d, m, k);
          std::string text = "---";
          if (row && row->median) {
            text = format_fixed(*row->median, 3) + " +/- " + format_fixed(*row->iqr, 3);
          }
          out << pad(text, kCellWidth);
        }
        out << '\n';
      }
      out << '\n';
    }
  }
  {
    auto out = open_output(dir, "curves.csv");
    out << "dataset,perturbation,metric,seed,p,score\n";
    for (const auto& c : r.curves) {
      out << c.dataset << ',' << c.perturbation << ',' << c.metric << ','
          << c.seed_index << ',' << format_double(c.p) << ',' << cell(c.score) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Sample efficiency

std::vector<EfficiencyRow> run_sample_efficiency(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto data = load_all(cfg);
  auto by_name = [&](const std::string& name) -> const Ctdg& {
    for (std::size_t i = 0; i < cfg.datasets.size(); ++i) {
      if (cfg.datasets[i].name == name) return data[i];
    }
    throw std::invalid_argument("unknown dataset: " + name);
  };
  const auto& se = cfg.sample_efficiency;
  const Ctdg& real = se.real.empty() ? data.front() : by_name(se.real);
  const Ctdg generated = se.generated.empty()
                             ? edge_rewire(real, 1.0, derive_seed(cfg.seed, "generated"))
                             : by_name(se.generated);
  const std::size_t need =
      se.min_passing > 0
          ? se.min_passing
          : static_cast<std::size_t>(std::ceil(0.6 * static_cast<double>(cfg.seeds)));

  std::vector<Metric> usable;
  std::vector<EfficiencyRow> rows(cfg.metrics.size());
  for (std::size_t m = 0; m < cfg.metrics.size(); ++m) {
    rows[m].metric = cfg.metrics[m].name();
    rows[m].seeds = cfg.seeds;
    rows[m].applicable = !(cfg.metrics[m].family == Metric::Family::feature &&
                           real.feature_dim() != generated.feature_dim());
  }
  for (std::size_t m = 0; m < cfg.metrics.size(); ++m) {
    if (rows[m].applicable) usable.push_back(cfg.metrics[m]);
  }

  std::vector<std::size_t> usable_row;
  for (std::size_t m = 0; m < cfg.metrics.size(); ++m) {
    if (rows[m].applicable) usable_row.push_back(m);
  }

  for (std::size_t lambda = se.lambda_min; lambda <= se.lambda_max; ++lambda) {
    if (2 * lambda > real.num_events() || lambda > generated.num_events()) break;
    bool pending = false;
    for (std::size_t u : usable_row) pending = pending || !rows[u].lambda;
    if (!pending) break;

    // passing[seed][usable metric]
    std::vector<std::vector<bool>> passing(cfg.seeds);
    parallel_for(cfg.seeds, cfg.threads, [&](std::size_t s) {
      const std::uint64_t seed = run_seed(cfg.seed, s);
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(lambda)));
      const std::size_t n = real.num_events();
      const std::size_t first = rng.below(n - 2 * lambda + 1);
      const std::size_t second = first + lambda + rng.below(n - 2 * lambda - first + 1);
      const std::size_t gen_at = rng.below(generated.num_events() - lambda + 1);
      const Ctdg a = slice(real, first, lambda, true);
      const Ctdg b = slice(real, second, lambda, true);
      const Ctdg g = slice(generated, gen_at, lambda, true);

      ScoreOptions opt = cfg.scoring;
      opt.jl.seed = seed;
      const Ctdg* all[] = {&a, &b, &g};
      const MetricEvaluator eval(a, usable, opt, JlShape::covering(all));
      const auto real_real = eval.score(b);
      const auto real_gen = eval.score(g);
      auto& out = passing[s];
      out.resize(usable.size());
      for (std::size_t i = 0; i < usable.size(); ++i) {
        out[i] = !std::isnan(real_real[i]) && !std::isnan(real_gen[i]) &&
                 real_real[i] < real_gen[i];
      }
    });

    for (std::size_t i = 0; i < usable.size(); ++i) {
      auto& row = rows[usable_row[i]];
      if (row.lambda) continue;
      std::size_t count = 0;
      for (const auto& p : passing) count += p[i] ? 1 : 0;
      row.passing_seeds = count;
      if (count >= need) row.lambda = lambda;
    }
  }
  return rows;
}

void write_sample_efficiency(const std::vector<EfficiencyRow>& rows,
                             const std::filesystem::path& dir) {
  auto out = open_output(dir, "sample_efficiency.csv");
  out << "metric,lambda,passing_seeds,seeds\n";
  for (const auto& r : rows) {
    out << r.metric << ','
        << (!r.applicable ? std::string("n/a")
                          : r.lambda ? std::to_string(*r.lambda) : std::string("not_reached"))
        << ',' << r.passing_seeds << ',' << r.seeds << '\n';
  }
}

// ---------------------------------------------------------------------------
// Benchmark

std::vector<BenchRow> run_bench(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto data = load_all(cfg);
  std::vector<BenchRow> rows;
  for (std::size_t d = 0; d < data.size(); ++d) {
    const Ctdg& g = data[d];
    const Ctdg perturbed = edge_rewire(g, 0.5, derive_seed(cfg.seed, "bench"));
    ScoreOptions opt = cfg.scoring;
    opt.jl.seed = run_seed(cfg.seed, 0);
    for (const auto& m : cfg.metrics) {
      std::vector<double> seconds;
      for (std::size_t rep = 0; rep < cfg.bench_repeats; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        try {
          volatile double sink = score_pair(g, perturbed, m, opt);
          (void)sink;
        } catch (const std::domain_error&) {
          // Undefined scores still cost their pipeline; keep the timing.
        }
        const auto stop = std::chrono::steady_clock::now();
        seconds.push_back(std::max(
            1e-9, std::chrono::duration<double>(stop - start).count()));
      }
      BenchRow row;
      row.dataset = cfg.datasets[d].name;
      row.metric = m.name();
      row.events = g.num_events();
      row.median_seconds = quantile(seconds, 0.5);
      row.seconds_per_100_events =
          row.median_seconds / (static_cast<double>(std::max<std::size_t>(1, g.num_events())) / 100.0);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bench(const std::vector<BenchRow>& rows, const std::filesystem::path& dir) {
  auto out = open_output(dir, "bench.csv");
  out << "dataset,metric,events,median_seconds,seconds_per_100_events\n";
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.metric << ',' << r.events << ','
        << format_double(r.median_seconds) << ',' << format_double(r.seconds_per_100_events)
        << '\n';
  }
}

}  // namespace jlm
