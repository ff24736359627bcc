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

#include "jlmetric/srm.hpp"

#include <gtest/gtest.h>

#include "jlmetric/rng.hpp"
#include "oracles.hpp"

namespace jlm::srm {
namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

TEST(HadamardTest, MatchesSylvesterConstruction) {
  for (std::size_t order = 1; order <= 256; order *= 2) {
    const Eigen::MatrixXd h = oracle::hadamard(order);
    for (std::size_t i = 0; i < order; ++i) {
      std::vector<double> e(order, 0.0);
      e[i] = 1.0;
      hadamard_transform(e);
      for (std::size_t k = 0; k < order; ++k) {
        EXPECT_NEAR(e[k], h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)), 1e-12);
      }
    }
  }
}

TEST(HadamardTest, IsInvolution) {
  Rng rng(5);
  auto v = random_vector(rng, 512);
  auto w = v;
  hadamard_transform(w);
  hadamard_transform(w);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(w[i], v[i], 1e-12);
}

TEST(HadamardTest, RejectsNonPowerOfTwo) {
  std::vector<double> v(6, 1.0);
  EXPECT_THROW(hadamard_transform(v), std::invalid_argument);
  std::vector<double> empty;
  EXPECT_THROW(hadamard_transform(empty), std::invalid_argument);
}

TEST(SrmTest, PaddingRule) {
  EXPECT_EQ(StructuredRandomMatrix(5, 3, 0).padded_dim(), 8u);
  EXPECT_EQ(StructuredRandomMatrix(8, 3, 0).padded_dim(), 8u);
  EXPECT_EQ(StructuredRandomMatrix(3, 100, 0).padded_dim(), 128u);
  EXPECT_EQ(next_power_of_two(1), 1u);
  EXPECT_EQ(next_power_of_two(1025), 2048u);
}

TEST(SrmTest, MatchesExplicitProductOnAllPaths) {
  Rng rng(17);
  // (M, n) pairs exercising full transforms, folding, and sparse inputs.
  const std::pair<std::size_t, std::size_t> shapes[] = {
      {2, 1}, {2, 2}, {7, 3}, {16, 16}, {16, 5}, {33, 4}, {64, 64}, {64, 1}, {5, 40}, {100, 30}};
  for (auto [m, n] : shapes) {
    const StructuredRandomMatrix w(m, n, rng.below(1000));
    const Eigen::MatrixXd explicit_w = oracle::srm_matrix(w.rademacher(), m, n);
    for (std::size_t len : {std::size_t{1}, (m + 1) / 2, m}) {
      const auto v = random_vector(rng, len);
      const auto y = w.apply(v);
      for (std::size_t k = 0; k < n; ++k) {
        double expect = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
          expect += explicit_w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * v[i];
        }
        EXPECT_NEAR(y[k], expect, 1e-9) << "M=" << m << " n=" << n << " len=" << len;
      }
    }
  }
}

TEST(SrmTest, RejectsOversizedInput) {
  const StructuredRandomMatrix w(4, 2, 0);
  std::vector<double> v(5, 1.0);
  EXPECT_THROW(w.apply(v), std::invalid_argument);
  EXPECT_THROW(StructuredRandomMatrix(0, 2, 0), std::invalid_argument);
}

TEST(SrmTest, DeterministicGivenSeed) {
  const StructuredRandomMatrix a(50, 20, 9);
  const StructuredRandomMatrix b(50, 20, 9);
  const StructuredRandomMatrix c(50, 20, 10);
  EXPECT_TRUE(std::equal(a.rademacher().begin(), a.rademacher().end(), b.rademacher().begin()));
  EXPECT_FALSE(std::equal(a.rademacher().begin(), a.rademacher().end(), c.rademacher().begin()));
}

TEST(SrmTest, SquaredNormUnbiasedOnAverage) {
  // E ||f(x)||^2 = ||x||^2 over the random sign diagonal.
  Rng rng(23);
  const auto v = random_vector(rng, 200);
  double norm = 0.0;
  for (double x : v) norm += x * x;
  double total = 0.0;
  const int trials = 400;
  for (int s = 0; s < trials; ++s) {
    const auto y = StructuredRandomMatrix(256, 64, static_cast<std::uint64_t>(s)).apply(v);
    for (double x : y) total += x * x;
  }
  EXPECT_NEAR(total / trials / norm, 1.0, 0.05);
}

TEST(DenseTest, OrthonormalColumnsWhenTall) {
  const DenseRandomMatrix w(40, 12, 3);
  const Eigen::MatrixXd g = w.matrix().transpose() * w.matrix();
  EXPECT_TRUE(g.isApprox(Eigen::MatrixXd::Identity(12, 12), 1e-12));
  EXPECT_DOUBLE_EQ(w.scale(), std::sqrt(40.0 / 12.0));
}

TEST(DenseTest, OrthonormalRowsWhenWide) {
  const DenseRandomMatrix w(6, 20, 3);
  const Eigen::MatrixXd g = w.matrix() * w.matrix().transpose();
  EXPECT_TRUE(g.isApprox(Eigen::MatrixXd::Identity(6, 6), 1e-12));
  EXPECT_EQ(w.scale(), 1.0);
}

TEST(DenseTest, ApplyUsesLeadingRows) {
  const DenseRandomMatrix w(10, 4, 1);
  const std::vector<double> v = {1.0, -2.0, 0.5};
  const auto y = w.apply(v);
  for (std::size_t k = 0; k < 4; ++k) {
    double expect = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      expect += w.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * v[i];
    }
    EXPECT_NEAR(y[k], w.scale() * expect, 1e-12);
  }
}

TEST(RandomProjectionTest, ExplicitMatrixReproducesApply) {
  Rng rng(2);
  for (MatrixKind kind : {MatrixKind::structured, MatrixKind::dense}) {
    const RandomProjection p(kind, 12, 5, 44);
    EXPECT_EQ(p.kind(), kind);
    EXPECT_EQ(p.rows(), 12u);
    EXPECT_EQ(p.cols(), 5u);
    const Eigen::MatrixXd w = p.explicit_matrix();
    const auto v = random_vector(rng, 12);
    const auto y = p.apply(v);
    const Eigen::VectorXd expect =
        w.transpose() * Eigen::Map<const Eigen::VectorXd>(v.data(), 12);
    for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(y[k], expect(static_cast<Eigen::Index>(k)), 1e-12);
  }
}

}  // namespace
}  // namespace jlm::srm
