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

// Command-line front end: dataset generation, pairwise scoring and the
// experiment runners.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "jlmetric/classical.hpp"
#include "jlmetric/ctdg.hpp"
#include "jlmetric/format.hpp"
#include "jlmetric/harness.hpp"
#include "jlmetric/jl_metric.hpp"
#include "jlmetric/perturb.hpp"
#include "json.hpp"

namespace {

using jlm::Ctdg;

jlm::CsvFormat parse_format(const std::string& s) {
  if (s == "events") return jlm::CsvFormat::events;
  if (s == "jodie") return jlm::CsvFormat::jodie;
  throw std::invalid_argument("unknown format: " + s);
}

Ctdg load_input(const std::string& path, const std::string& format) {
  Ctdg g = jlm::load_ctdg(path, parse_format(format));
  if (g.feature_dim() == 0) g = jlm::with_constant_feature(g, 1.0);
  return g;
}

void write_graph(const Ctdg& g, const std::string& out) {
  if (out.empty() || out == "-") {
    jlm::write_event_csv(g, std::cout);
  } else {
    jlm::save_ctdg(g, out);
  }
}

// Options shared by subcommands that score with the JL metric.
struct JlFlags {
  std::size_t n = 100;
  std::size_t o = 100;
  std::string matrix = "structured";
  std::string normalization = "per_graph";
  std::optional<double> bandwidth;
  std::size_t bins = 32;

  void add_to(CLI::App* app) {
    app->add_option("--n", n, "node embedding dimension")->check(CLI::PositiveNumber);
    app->add_option("--o", o, "descriptor count")->check(CLI::PositiveNumber);
    app->add_option("--matrix", matrix, "random matrix kind")
        ->check(CLI::IsMember({"structured", "dense"}));
    app->add_option("--normalization", normalization, "min-max statistics source")
        ->check(CLI::IsMember({"per_graph", "reference"}));
    app->add_option("--bandwidth", bandwidth, "MMD kernel bandwidth (default: median heuristic)");
    app->add_option("--bins", bins, "histogram bins for KL/JS")->check(CLI::PositiveNumber);
  }

  jlm::ScoreOptions options(std::uint64_t seed) const {
    jlm::ScoreOptions o_;
    o_.jl.n = n;
    o_.jl.o = o;
    o_.jl.seed = seed;
    o_.jl.matrix_kind =
        matrix == "dense" ? jlm::srm::MatrixKind::dense : jlm::srm::MatrixKind::structured;
    o_.normalization = normalization == "reference" ? jlm::NormalizationMode::reference
                                                    : jlm::NormalizationMode::per_graph;
    o_.mmd_bandwidth = bandwidth;
    o_.bins = bins;
    return o_;
  }
};

// Overrides from the command line applied on top of a config file.
struct RunFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;

  void add_to(CLI::App* app) {
    app->add_option("--config", config, "experiment JSON")->required()->check(CLI::ExistingFile);
    app->add_option("--out", out, "output directory (overrides config)");
    app->add_option("--seed", seed, "global seed (overrides config)");
    app->add_option("--threads", threads, "worker threads, 0 = all cores");
  }

  jlm::ExperimentConfig load() const {
    auto cfg = jlm::load_experiment_config(config);
    if (!out.empty()) cfg.output_dir = out;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Similarity metrics for continuous-time dynamic graphs"};
  app.require_subcommand(1);

  // gen-grid
  jlm::GridSpec grid;
  std::string grid_out;
  auto* gen = app.add_subcommand("gen-grid", "write the synthetic lattice dataset as event CSV");
  gen->add_option("--rows", grid.rows, "lattice rows")->check(CLI::PositiveNumber);
  gen->add_option("--cols", grid.cols, "lattice columns")->check(CLI::PositiveNumber);
  gen->add_option("--events", grid.num_events, "number of events");
  gen->add_option("--interval", grid.interval, "time between events")->check(CLI::PositiveNumber);
  gen->add_option("--seed", grid.seed, "direction seed");
  gen->add_option("--out", grid_out, "output CSV (default stdout)");

  // metric
  std::string ref_path, gen_path, metric_name = "jl", format = "events";
  std::uint64_t seed = 0;
  JlFlags metric_flags;
  auto* metric = app.add_subcommand("metric", "score one pair of event CSVs");
  metric->add_option("--reference", ref_path, "reference CTDG")->required()->check(CLI::ExistingFile);
  metric->add_option("--generated", gen_path, "generated CTDG")->required()->check(CLI::ExistingFile);
  metric->add_option("--metric", metric_name, "jl, <descriptor>:<ks|mmd> or feature:<kl|js|ks|mmd>");
  metric->add_option("--format", format, "CSV layout")->check(CLI::IsMember({"events", "jodie"}));
  metric->add_option("--seed", seed, "random matrix seed");
  metric_flags.add_to(metric);

  // experiment / sample-efficiency / bench
  RunFlags experiment_flags, efficiency_flags, bench_flags;
  std::optional<std::size_t> repeats;
  auto* experiment = app.add_subcommand("experiment", "sensitivity study from a config");
  experiment_flags.add_to(experiment);
  auto* efficiency = app.add_subcommand("sample-efficiency", "minimum events to tell data apart");
  efficiency_flags.add_to(efficiency);
  auto* bench = app.add_subcommand("bench", "time every metric");
  bench_flags.add_to(bench);
  bench->add_option("--repeats", repeats, "timed repetitions (>= 3)");

  // perturb
  std::string perturb_in, perturb_out, kind = "edge_rewiring", permute_mode = "replace";
  double p = 0.5;
  std::uint64_t perturb_seed = 0;
  auto* pert = app.add_subcommand("perturb", "apply one perturbation to an event CSV");
  pert->add_option("--in", perturb_in, "input CTDG")->required()->check(CLI::ExistingFile);
  pert->add_option("--kind", kind, "perturbation")
      ->check(CLI::IsMember({"edge_rewiring", "time_perturbation", "event_permutation",
                             "mode_dropping", "mode_collapse"}));
  pert->add_option("--p", p, "probability")->check(CLI::Range(0.0, 1.0));
  pert->add_option("--seed", perturb_seed, "seed");
  pert->add_option("--permute-mode", permute_mode, "event permutation mode")
      ->check(CLI::IsMember({"replace", "swap"}));
  pert->add_option("--format", format, "CSV layout")->check(CLI::IsMember({"events", "jodie"}));
  pert->add_option("--out", perturb_out, "output CSV (default stdout)");

  // embed
  std::string embed_in;
  std::uint64_t embed_seed = 0;
  std::size_t m_rows = 0, z_rows = 0;
  JlFlags embed_flags;
  auto* embed = app.add_subcommand("embed", "print a graph's JL descriptor as JSON");
  embed->add_option("--in", embed_in, "input CTDG")->required()->check(CLI::ExistingFile);
  embed->add_option("--seed", embed_seed, "random matrix seed");
  embed->add_option("--m", m_rows, "stage-1 rows (default: this graph's longest payload)");
  embed->add_option("--z", z_rows, "stage-2 rows (default: this graph's node count)");
  embed->add_option("--format", format, "CSV layout")->check(CLI::IsMember({"events", "jodie"}));
  embed_flags.add_to(embed);

  // info
  std::string info_in;
  auto* info = app.add_subcommand("info", "print manifest and time-axis summary as JSON");
  info->add_option("--in", info_in, "input CTDG")->required()->check(CLI::ExistingFile);
  info->add_option("--format", format, "CSV layout")->check(CLI::IsMember({"events", "jodie"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      write_graph(jlm::generate_grid(grid), grid_out);
    } else if (*metric) {
      const Ctdg r = load_input(ref_path, format);
      const Ctdg g = load_input(gen_path, format);
      const double v = jlm::score_pair(r, g, jlm::parse_metric(metric_name),
                                       metric_flags.options(seed));
      std::cout << jlm::format_double(v) << '\n';
    } else if (*experiment) {
      const auto cfg = experiment_flags.load();
      jlm::write_sensitivity(jlm::run_sensitivity(cfg), cfg.output_dir);
      std::cout << "wrote " << (cfg.output_dir / "sensitivity.csv").string() << '\n';
    } else if (*efficiency) {
      const auto cfg = efficiency_flags.load();
      jlm::write_sample_efficiency(jlm::run_sample_efficiency(cfg), cfg.output_dir);
      std::cout << "wrote " << (cfg.output_dir / "sample_efficiency.csv").string() << '\n';
    } else if (*bench) {
      auto cfg = bench_flags.load();
      if (repeats) cfg.bench_repeats = *repeats;
      cfg.validate();
      jlm::write_bench(jlm::run_bench(cfg), cfg.output_dir);
      std::cout << "wrote " << (cfg.output_dir / "bench.csv").string() << '\n';
    } else if (*pert) {
      const Ctdg g = load_input(perturb_in, format);
      const auto k = jlm::parse_perturb(kind);
      std::optional<jlm::ModeAssignment> modes;
      if (k == jlm::PerturbKind::mode_dropping || k == jlm::PerturbKind::mode_collapse) {
        jlm::JlConfig jl;
        jl.seed = perturb_seed;
        modes = jlm::cluster_modes(g, jl, perturb_seed);
      }
      jlm::PerturbOptions opt;
      opt.permute_mode =
          permute_mode == "swap" ? jlm::PermuteMode::swap : jlm::PermuteMode::replace;
      opt.modes = modes ? &*modes : nullptr;
      write_graph(jlm::perturb(g, k, p, perturb_seed, opt), perturb_out);
    } else if (*embed) {
      const Ctdg g = load_input(embed_in, format);
      const Ctdg* self[] = {&g};
      auto shape = jlm::JlShape::covering(self);
      if (m_rows > 0) shape.m = m_rows;
      if (z_rows > 0) shape.z = z_rows;
      const auto d = jlm::embed_graph(g, embed_flags.options(embed_seed).jl, shape);
      std::cout << nlohmann::json(d).dump() << '\n';
    } else if (*info) {
      const Ctdg g = jlm::load_ctdg(info_in, parse_format(format));
      nlohmann::json j = jlm::manifest(g);
      if (!g.empty()) {
        j["t_min"] = g.t_min();
        j["t_max"] = g.t_max();
      }
      try {
        const double phi = jlm::nyquist_resolution(g);
        j["nyquist_resolution"] = phi;
        j["snapshot_count"] = jlm::snapshot_count(g.t_max(), phi);
      } catch (const std::domain_error&) {
        j["nyquist_resolution"] = nullptr;
      }
      std::cout << j.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
