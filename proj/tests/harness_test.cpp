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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace jlm {
namespace {

using nlohmann::json;

json small_config() {
  return json::parse(R"({
    "datasets": [{"name": "grid", "generator": {"rows": 4, "cols": 5, "events": 80}}],
    "metrics": ["jl", "mean_degree:ks", "activity_rate:mmd", "feature:js"],
    "perturbations": ["edge_rewiring", "event_permutation"],
    "p_grid": [0, 0.5, 1],
    "seeds": 2,
    "seed": 3,
    "jl": {"n": 16, "o": 16},
    "sample_efficiency": {"lambda_min": 3, "lambda_max": 6},
    "threads": 1
  })");
}

std::string invalid_message(const json& j) {
  try {
    parse_experiment_config(j);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(MetricTest, NamesRoundTrip) {
  const auto all = all_metrics();
  ASSERT_EQ(all.size(), 15u);
  std::set<std::string> names;
  for (const Metric& m : all) {
    EXPECT_EQ(parse_metric(m.name()), m);
    names.insert(m.name());
  }
  EXPECT_EQ(names.size(), 15u);
  EXPECT_EQ(all.front().name(), "jl");
  EXPECT_TRUE(parse_metric("lcc:mmd").uses_snapshots());
  EXPECT_FALSE(parse_metric("activity_rate:ks").uses_snapshots());
  EXPECT_THROW(parse_metric("lcc:js"), std::invalid_argument);
  EXPECT_THROW(parse_metric("feature:emd"), std::invalid_argument);
  EXPECT_THROW(parse_metric("nope"), std::invalid_argument);
}

TEST(ConfigTest, ParsesSmallConfig) {
  const ExperimentConfig cfg = parse_experiment_config(small_config());
  ASSERT_EQ(cfg.datasets.size(), 1u);
  EXPECT_EQ(cfg.datasets[0].grid->rows, 4u);
  EXPECT_EQ(cfg.metrics.size(), 4u);
  EXPECT_EQ(cfg.seeds, 2u);
  EXPECT_EQ(cfg.scoring.jl.n, 16u);
  EXPECT_EQ(cfg.p_grid, (std::vector<double>{0, 0.5, 1}));
}

TEST(ConfigTest, Defaults) {
  const ExperimentConfig cfg = parse_experiment_config(
      json::parse(R"({"datasets": [{"name": "g", "generator": {}}]})"));
  EXPECT_EQ(cfg.metrics.size(), 15u);
  EXPECT_EQ(cfg.p_grid.size(), 11u);
  EXPECT_EQ(cfg.seeds, 10u);
  EXPECT_EQ(cfg.scoring.jl.n, 100u);
  EXPECT_EQ(cfg.scoring.bins, 32u);
  EXPECT_EQ(cfg.perturbations.size(), 3u);
}

TEST(ConfigTest, RejectsInvalidValues) {
  json j = small_config();
  j["p_grid"] = {0.5};
  EXPECT_EQ(invalid_message(j), "at least 2 grid points required");
  j["p_grid"] = {0.1, 0.5};
  EXPECT_EQ(invalid_message(j), "p_grid must contain 0");
  j["p_grid"] = {0, 0.5, 0.5};
  EXPECT_EQ(invalid_message(j), "p_grid must be strictly increasing");
  j = small_config();
  j["bench"] = {{"repeats", 2}};
  EXPECT_EQ(invalid_message(j), "bench.repeats must be at least 3");
  j = small_config();
  j["colour"] = "blue";
  EXPECT_NE(invalid_message(j).find("unknown key 'colour'"), std::string::npos);
  j = small_config();
  j["jl"]["matrix"] = "sparse";
  EXPECT_EQ(invalid_message(j), "unknown jl.matrix: sparse");
}

TEST(ConfigTest, RunSeedsAreDistinct) {
  std::set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < 100; ++i) seeds.insert(run_seed(7, i));
  EXPECT_EQ(seeds.size(), 100u);
  EXPECT_EQ(run_seed(7, 3), run_seed(7, 3));
}

TEST(QuantileTest, LinearInterpolation) {
  EXPECT_EQ(quantile({3, 1, 2}, 0.5), 2.0);
  EXPECT_EQ(quantile({1, 2, 3, 4}, 0.25), 1.75);
  EXPECT_EQ(quantile({5}, 0.75), 5.0);
  EXPECT_THROW(quantile({}, 0.5), std::invalid_argument);
}

TEST(ScoreTest, IdenticalGraphsScoreZeroOnEveryMetric) {
  const Ctdg g = generate_grid(GridSpec{4, 5, 60, 1.0, 0});
  ScoreOptions opt;
  opt.jl.n = opt.jl.o = 16;
  const Ctdg* graphs[] = {&g};
  const MetricEvaluator eval(g, all_metrics(), opt, JlShape::covering(graphs));
  for (double s : eval.score(g)) EXPECT_NEAR(s, 0.0, 1e-12);
}

TEST(ScoreTest, EvaluatorAgreesWithScorePair) {
  const Ctdg g = generate_grid(GridSpec{4, 5, 60, 1.0, 0});
  const Ctdg h = edge_rewire(g, 0.5, 1);
  ScoreOptions opt;
  opt.jl.n = opt.jl.o = 16;
  const Ctdg* graphs[] = {&g, &h};
  const auto metrics = all_metrics();
  const MetricEvaluator eval(g, metrics, opt, JlShape::covering(graphs));
  const auto scores = eval.score(h);
  for (std::size_t i = 1; i < metrics.size(); ++i) {
    EXPECT_NEAR(scores[i], score_pair(g, h, metrics[i], opt), 1e-12) << metrics[i].name();
  }
  EXPECT_GT(scores[0], 0.0);
}

TEST(ScoreTest, UndefinedScoreThrowsFromScorePair) {
  std::istringstream in("0,1,0\n");
  const Ctdg g = with_constant_feature(parse_ctdg(in));
  EXPECT_THROW(score_pair(g, g, parse_metric("jl"), ScoreOptions{}), std::domain_error);
}

TEST(SensitivityTest, TableShapeAndDeterminism) {
  const ExperimentConfig cfg = parse_experiment_config(small_config());
  const SensitivityResult a = run_sensitivity(cfg);
  EXPECT_EQ(a.rows.size(), 4u * 2u);
  EXPECT_EQ(a.curves.size(), 4u * 2u * 2u * 3u);
  for (const CurvePoint& c : a.curves) {
    if (c.p == 0.0) EXPECT_NEAR(c.score, 0.0, 1e-12) << c.metric;
  }
  const SensitivityResult b = run_sensitivity(cfg);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].per_seed, b.rows[i].per_seed);
  }
  // Topology metrics cannot see feature permutation.
  for (const SensitivityRow& r : a.rows) {
    if (r.perturbation == "event_permutation" && r.metric == "mean_degree:ks") {
      EXPECT_TRUE(r.no_response());
    }
  }

  const auto dir = std::filesystem::temp_directory_path() / "jlmetric_harness_test";
  std::filesystem::remove_all(dir);
  write_sensitivity(a, dir);
  const std::string csv = read_file(dir / "sensitivity.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "dataset,metric,perturbation,median,iqr,defined_seeds,seeds,no_response,per_seed");
  EXPECT_TRUE(std::filesystem::exists(dir / "curves.csv"));
  EXPECT_TRUE(json::parse(read_file(dir / "sensitivity.json")).is_array() ||
              json::parse(read_file(dir / "sensitivity.json")).is_object());
  std::filesystem::remove_all(dir);
}

TEST(SensitivityTest, EmptyResultWritesHeaderOnly) {
  const auto dir = std::filesystem::temp_directory_path() / "jlmetric_empty_test";
  std::filesystem::remove_all(dir);
  write_sensitivity(SensitivityResult{}, dir);
  EXPECT_EQ(read_file(dir / "sensitivity.csv"),
            "dataset,metric,perturbation,median,iqr,defined_seeds,seeds,no_response,per_seed\n");
  std::filesystem::remove_all(dir);
}

TEST(SampleEfficiencyTest, RunsOverLambdaRange) {
  ExperimentConfig cfg = parse_experiment_config(small_config());
  const auto rows = run_sample_efficiency(cfg);
  ASSERT_EQ(rows.size(), cfg.metrics.size());
  for (const EfficiencyRow& r : rows) {
    EXPECT_EQ(r.seeds, 2u);
    if (r.lambda) {
      EXPECT_GE(*r.lambda, 3u);
      EXPECT_LE(*r.lambda, 6u);
    }
  }
}

TEST(BenchTest, TimesArePositive) {
  ExperimentConfig cfg = parse_experiment_config(small_config());
  const auto rows = run_bench(cfg);
  ASSERT_EQ(rows.size(), cfg.metrics.size());
  for (const BenchRow& r : rows) {
    EXPECT_EQ(r.events, 80u);
    EXPECT_GT(r.median_seconds, 0.0);
    EXPECT_TRUE(std::isfinite(r.seconds_per_100_events));
    EXPECT_DOUBLE_EQ(r.seconds_per_100_events, r.median_seconds * 100.0 / 80.0);
  }
}

}  // namespace
}  // namespace jlm
