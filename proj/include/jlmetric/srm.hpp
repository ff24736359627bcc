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

#ifndef JLMETRIC_SRM_HPP_
#define JLMETRIC_SRM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace jlm::srm {

constexpr bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::size_t next_power_of_two(std::size_t x);

/// In-place normalized Walsh-Hadamard transform, v <- H_L v, where
/// H_1 = (1) and H_L = 2^{-1/2} [[H_{L/2}, H_{L/2}], [H_{L/2}, -H_{L/2}]].
/// O(L log L). Throws std::invalid_argument unless |v| is a power of two.
void hadamard_transform(std::span<double> v);

/// Implicit W = (H D)[:, :n] of logical size M x n, where D is a random
/// +/-1 diagonal and H the normalized Hadamard matrix of order L, the next
/// power of two >= max(M, n). Only the diagonal is stored.
///
/// apply() returns sqrt(L / n) * W[:|v|, :]^T v, i.e. the unused rows are
/// ignored, with the scale making squared norms unbiased.
class StructuredRandomMatrix {
 public:
  StructuredRandomMatrix(std::size_t logical_rows, std::size_t cols,
                         std::uint64_t seed);

  std::size_t logical_rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t padded_dim() const { return diag_.size(); }
  std::uint64_t seed() const { return seed_; }
  std::span<const double> rademacher() const { return diag_; }
  double scale() const { return scale_; }

  std::vector<double> apply(std::span<const double> v) const;

  /// Allocation-free variant; `scratch` is resized as needed.
  void apply(std::span<const double> v, std::span<double> out,
             std::vector<double>& scratch) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::uint64_t seed_;
  double scale_;
  std::vector<double> diag_;
};

/// Explicit M x n random matrix. For M >= n the columns are orthonormal
/// (Gaussian draw followed by QR with sign correction); for M < n the rows
/// are. apply() scales by sqrt(M / n) when M > n so squared norms are
/// unbiased, and by 1 otherwise.
class DenseRandomMatrix {
 public:
  DenseRandomMatrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

  std::size_t rows() const { return static_cast<std::size_t>(w_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(w_.cols()); }
  const Eigen::MatrixXd& matrix() const { return w_; }
  double scale() const { return scale_; }

  std::vector<double> apply(std::span<const double> v) const;
  void apply(std::span<const double> v, std::span<double> out) const;

 private:
  Eigen::MatrixXd w_;
  double scale_;
};

enum class MatrixKind { structured, dense };

/// Either random matrix behind one interface.
class RandomProjection {
 public:
  RandomProjection(MatrixKind kind, std::size_t rows, std::size_t cols,
                   std::uint64_t seed);

  MatrixKind kind() const;
  std::size_t rows() const;
  std::size_t cols() const;

  std::vector<double> apply(std::span<const double> v) const;
  void apply(std::span<const double> v, std::span<double> out,
             std::vector<double>& scratch) const;

  /// The effective rows x cols map including scaling, materialized. Intended
  /// for tests and small shapes.
  Eigen::MatrixXd explicit_matrix() const;

 private:
  std::variant<StructuredRandomMatrix, DenseRandomMatrix> impl_;
};

}  // namespace jlm::srm

#endif  // JLMETRIC_SRM_HPP_
