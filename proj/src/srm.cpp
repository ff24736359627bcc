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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "jlmetric/rng.hpp"

namespace jlm::srm {

std::size_t next_power_of_two(std::size_t x) {
  std::size_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

namespace {

// Unnormalized butterflies; caller applies the 1/sqrt(L) factor.
void fwht_raw(double* v, std::size_t n) {
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

}  // namespace

void hadamard_transform(std::span<double> v) {
  if (!is_power_of_two(v.size())) {
    throw std::invalid_argument("Hadamard transform needs power-of-two length, got " +
                                std::to_string(v.size()));
  }
  fwht_raw(v.data(), v.size());
  const double s = 1.0 / std::sqrt(static_cast<double>(v.size()));
  for (double& x : v) x *= s;
}

// ---------------------------------------------------------------------------

StructuredRandomMatrix::StructuredRandomMatrix(std::size_t logical_rows,
                                               std::size_t cols,
                                               std::uint64_t seed)
    : rows_(logical_rows), cols_(cols), seed_(seed) {
  if (logical_rows < 1 || cols < 1) {
    throw std::invalid_argument("random matrix dimensions must be positive");
  }
  const std::size_t padded = next_power_of_two(std::max(logical_rows, cols));
  Rng rng(derive_seed(seed, "rademacher"));
  diag_.resize(padded);
  for (double& d : diag_) d = rng.rademacher();
  scale_ = std::sqrt(static_cast<double>(padded) / static_cast<double>(cols));
}

std::vector<double> StructuredRandomMatrix::apply(
    std::span<const double> v) const {
  std::vector<double> out(cols_);
  std::vector<double> scratch;
  apply(v, out, scratch);
  return out;
}

void StructuredRandomMatrix::apply(std::span<const double> v,
                                   std::span<double> out,
                                   std::vector<double>& scratch) const {
  if (v.size() > rows_) {
    throw std::invalid_argument("input length " + std::to_string(v.size()) +
                                " exceeds matrix rows " + std::to_string(rows_));
  }
  if (out.size() != cols_) throw std::invalid_argument("output length mismatch");

  const std::size_t padded = diag_.size();
  const std::size_t support = next_power_of_two(std::max<std::size_t>(v.size(), 1));

  if (support < padded) {
    // Input lives in the first `support` coordinates. For i < support,
    // (H_L)_{k,i} = sqrt(support / L) (H_support)_{k mod support, i}, so the
    // output is a periodic extension of a small transform.
    scratch.assign(support, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) scratch[i] = diag_[i] * v[i];
    fwht_raw(scratch.data(), support);
    const double s = scale_ / std::sqrt(static_cast<double>(padded));
    for (std::size_t k = 0; k < cols_; ++k) out[k] = s * scratch[k & (support - 1)];
    return;
  }

  scratch.assign(padded, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) scratch[i] = diag_[i] * v[i];

  // Only the first n outputs are needed: the top half of H_L x equals
  // H_{L/2} (x_lo + x_hi) / sqrt(2), so fold while n fits in half.
  std::size_t width = padded;
  while (cols_ <= width / 2) {
    const std::size_t half = width / 2;
    for (std::size_t i = 0; i < half; ++i) scratch[i] += scratch[i + half];
    width = half;
  }
  fwht_raw(scratch.data(), width);
  const double s = scale_ / std::sqrt(static_cast<double>(padded));
  for (std::size_t k = 0; k < cols_; ++k) out[k] = s * scratch[k];
}

// ---------------------------------------------------------------------------

DenseRandomMatrix::DenseRandomMatrix(std::size_t rows, std::size_t cols,
                                     std::uint64_t seed) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("random matrix dimensions must be positive");
  }
  Rng rng(derive_seed(seed, "dense"));
  const bool tall = rows >= cols;
  const auto big = static_cast<Eigen::Index>(tall ? rows : cols);
  const auto small = static_cast<Eigen::Index>(tall ? cols : rows);

  Eigen::MatrixXd a(big, small);
  for (Eigen::Index j = 0; j < small; ++j) {
    for (Eigen::Index i = 0; i < big; ++i) a(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < small; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  w_ = tall ? q : Eigen::MatrixXd(q.transpose());
  scale_ = tall ? std::sqrt(static_cast<double>(rows) / static_cast<double>(cols))
                : 1.0;
}

std::vector<double> DenseRandomMatrix::apply(std::span<const double> v) const {
  std::vector<double> out(cols());
  apply(v, out);
  return out;
}

void DenseRandomMatrix::apply(std::span<const double> v,
                              std::span<double> out) const {
  if (v.size() > rows()) {
    throw std::invalid_argument("input length " + std::to_string(v.size()) +
                                " exceeds matrix rows " + std::to_string(rows()));
  }
  if (out.size() != cols()) throw std::invalid_argument("output length mismatch");
  Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
  Eigen::Map<Eigen::VectorXd> y(out.data(), static_cast<Eigen::Index>(out.size()));
  y.noalias() = scale_ * (w_.topRows(x.size()).transpose() * x);
}

// ---------------------------------------------------------------------------

namespace {

std::variant<StructuredRandomMatrix, DenseRandomMatrix> make_impl(
    MatrixKind kind, std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (kind == MatrixKind::dense) return DenseRandomMatrix(rows, cols, seed);
  return StructuredRandomMatrix(rows, cols, seed);
}

}  // namespace

RandomProjection::RandomProjection(MatrixKind kind, std::size_t rows,
                                   std::size_t cols, std::uint64_t seed)
    : impl_(make_impl(kind, rows, cols, seed)) {}

MatrixKind RandomProjection::kind() const {
  return std::holds_alternative<DenseRandomMatrix>(impl_) ? MatrixKind::dense
                                                          : MatrixKind::structured;
}

std::size_t RandomProjection::rows() const {
  return std::visit(
      [](const auto& m) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>,
                                     StructuredRandomMatrix>) {
          return m.logical_rows();
        } else {
          return m.rows();
        }
      },
      impl_);
}

std::size_t RandomProjection::cols() const {
  return std::visit([](const auto& m) { return m.cols(); }, impl_);
}

std::vector<double> RandomProjection::apply(std::span<const double> v) const {
  return std::visit([&](const auto& m) { return m.apply(v); }, impl_);
}

void RandomProjection::apply(std::span<const double> v, std::span<double> out,
                             std::vector<double>& scratch) const {
  if (const auto* s = std::get_if<StructuredRandomMatrix>(&impl_)) {
    s->apply(v, out, scratch);
  } else {
    std::get<DenseRandomMatrix>(impl_).apply(v, out);
  }
}

Eigen::MatrixXd RandomProjection::explicit_matrix() const {
  const auto m = static_cast<Eigen::Index>(rows());
  const auto n = static_cast<Eigen::Index>(cols());
  Eigen::MatrixXd w(m, n);
  std::vector<double> e(static_cast<std::size_t>(m), 0.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    e.assign(static_cast<std::size_t>(i) + 1, 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    auto row = apply(e);
    for (Eigen::Index j = 0; j < n; ++j) w(i, j) = row[static_cast<std::size_t>(j)];
  }
  return w;
}

}  // namespace jlm::srm
