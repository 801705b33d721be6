// Copyright 2026 The mtkrr Authors. All Rights Reserved.
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
// =============================================================================
//
// Spectral representation of a fixed-design multi-task problem: the kernel
// eigendecomposition K = Q^T diag(gamma) Q, the coordinates h^j = Q f^j of each
// task signal in that basis, and the mean/variance profile of the tasks.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mtkrr/error.hpp"

namespace mtkrr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace detail {

inline std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace detail

/// Eigenvalues (descending, nonnegative) and orthonormal eigenbasis of a
/// kernel matrix. Rows of `basis()` are eigenvectors, so K = Q^T diag(gamma) Q.
class KernelSpectrum {
 public:
  static constexpr double kOrthogonalityTolerance = 1e-10;

  KernelSpectrum(Vector gamma, Matrix basis) : KernelSpectrum(std::move(gamma), std::move(basis), true) {}

  /// Spectrum with the identity as eigenbasis.
  static KernelSpectrum diagonal(Vector gamma) {
    const auto n = gamma.size();
    return KernelSpectrum(std::move(gamma), Matrix::Identity(n, n), false);
  }

  Eigen::Index n() const { return gamma_.size(); }
  const Vector& gamma() const { return gamma_; }
  const Matrix& basis() const { return basis_; }

  /// Q^T diag(gamma) Q.
  Matrix kernel() const { return basis_.transpose() * gamma_.asDiagonal() * basis_; }

 private:
  KernelSpectrum(Vector gamma, Matrix basis, bool check_basis)
      : gamma_(std::move(gamma)), basis_(std::move(basis)) {
    const auto n = gamma_.size();
    if (n == 0) throw DimensionError("kernel spectrum must be non-empty");
    if (basis_.rows() != n || basis_.cols() != n) {
      throw DimensionError("basis is " + detail::shape(basis_) + ", expected " +
                           std::to_string(n) + "x" + std::to_string(n));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::isfinite(gamma_[i]) || gamma_[i] < 0.0) {
        throw NotPsdError("eigenvalue " + std::to_string(i) + " is negative or not finite");
      }
      if (i > 0 && gamma_[i] > gamma_[i - 1]) {
        throw DomainError("eigenvalues must be sorted in descending order");
      }
    }
    if (!check_basis) return;
    const double defect =
        (basis_ * basis_.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(defect <= kOrthogonalityTolerance)) {
      throw DomainError("basis is not orthogonal (max defect " + std::to_string(defect) + ")");
    }
  }

  Vector gamma_;
  Matrix basis_;
};

/// Spectral coefficients h (n x p): column j holds the coordinates of task j
/// on the kernel eigenbasis.
class TaskEnsemble {
 public:
  explicit TaskEnsemble(Matrix h) : h_(std::move(h)) {
    if (h_.rows() == 0 || h_.cols() == 0) throw DimensionError("task ensemble must be non-empty");
    if (!detail::all_finite(h_)) throw DomainError("task coefficients must be finite");
  }

  Eigen::Index n() const { return h_.rows(); }
  Eigen::Index p() const { return h_.cols(); }
  const Matrix& h() const { return h_; }
  auto task(Eigen::Index j) const { return h_.col(j); }

 private:
  Matrix h_;
};

/// Per-index mean component mu_i = sum_j h_i^j / sqrt(p) and between-task
/// variance varsigma_i^2 = (1/p) sum_j (h_i^j - mu_i / sqrt(p))^2.
struct MeanVarianceProfile {
  Vector mu;
  Vector varsigma2;

  Eigen::Index n() const { return mu.size(); }
};

/// Symmetric eigendecomposition of a PSD kernel matrix.
///
/// Eigenvalues come back in descending order (ties keep the solver's order).
/// Values in [-1e-8, 0) are rounding noise and are clamped to zero; anything
/// more negative raises NotPsdError.
inline KernelSpectrum eigendecompose_kernel(const Matrix& k) {
  constexpr double kSymmetryTolerance = 1e-10;
  constexpr double kNegativeTolerance = 1e-8;
  if (k.rows() != k.cols() || k.rows() == 0) {
    throw DimensionError("kernel matrix must be square and non-empty, got " + detail::shape(k));
  }
  if (!detail::all_finite(k)) throw DomainError("kernel matrix has non-finite entries");
  const double asym = (k - k.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance) {
    throw DimensionError("kernel matrix is not symmetric (max |K - K^T| = " +
                         std::to_string(asym) + ")");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(k);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  const Vector& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();

  const auto n = k.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values[a] > values[b]; });

  Vector gamma(n);
  Matrix basis(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto src = order[static_cast<std::size_t>(r)];
    double value = values[src];
    if (value < -kNegativeTolerance) {
      throw NotPsdError("kernel matrix has eigenvalue " + std::to_string(value));
    }
    gamma[r] = std::max(value, 0.0);
    basis.row(r) = vectors.col(src).transpose();
  }
  return KernelSpectrum(std::move(gamma), std::move(basis));
}

/// h = Q F, column by column. `values` holds f^j(X_i) in column j.
inline TaskEnsemble project_tasks(const KernelSpectrum& spectrum, const Matrix& values) {
  if (values.rows() != spectrum.n()) {
    throw DimensionError("task values have " + std::to_string(values.rows()) +
                         " rows, spectrum has n = " + std::to_string(spectrum.n()));
  }
  return TaskEnsemble(spectrum.basis() * values);
}

/// Inverse of project_tasks: F = Q^T h.
inline Matrix reconstruct_tasks(const KernelSpectrum& spectrum, const TaskEnsemble& tasks) {
  if (tasks.n() != spectrum.n()) throw DimensionError("task ensemble and spectrum disagree on n");
  return spectrum.basis().transpose() * tasks.h();
}

inline MeanVarianceProfile mean_variance_profile(const TaskEnsemble& tasks) {
  const auto n = tasks.n();
  const auto p = static_cast<double>(tasks.p());
  MeanVarianceProfile profile{Vector(n), Vector(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = tasks.h().row(i);
    const double mean = row.sum() / p;
    profile.mu[i] = row.sum() / std::sqrt(p);
    profile.varsigma2[i] = (row.array() - mean).square().sum() / p;
  }
  return profile;
}

}  // namespace mtkrr
