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
// Multi-task ridge estimators: the regularization matrices M_AV / M_SD, the
// dense smoothing operator A_M, and the two ways of computing its fixed-design
// risk (dense matrix algebra and the separable spectral form).
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <string>

#include "mtkrr/error.hpp"
#include "mtkrr/shrinkage.hpp"
#include "mtkrr/spectral.hpp"

namespace mtkrr {

/// M_AV(lambda, mu) = (lambda/p) J + (mu/p) (I - J), J = 11^T / p.
struct RegularizerAV {
  int p = 1;
  double lambda = 0.0;
  double mu = 0.0;

  RegularizerAV() = default;
  RegularizerAV(int p_, double lambda_, double mu_) : p(p_), lambda(lambda_), mu(mu_) {
    if (p < 1) throw DomainError("regularizer: p must be >= 1");
    if (!(lambda >= 0.0) || !(mu >= 0.0)) throw DomainError("regularizer: lambda, mu must be >= 0");
  }

  Matrix materialize() const {
    const Matrix j = Matrix::Constant(p, p, 1.0 / p);
    return (lambda / p) * j + (mu / p) * (Matrix::Identity(p, p) - j);
  }
};

/// M_SD(alpha, beta): penalizes squared norms (alpha) and pairwise differences (beta).
struct RegularizerSD {
  int p = 1;
  double alpha = 0.0;
  double beta_pen = 0.0;

  RegularizerSD() = default;
  RegularizerSD(int p_, double alpha_, double beta_) : p(p_), alpha(alpha_), beta_pen(beta_) {
    if (p < 1) throw DomainError("regularizer: p must be >= 1");
    if (!(alpha >= 0.0) || !(beta_pen >= 0.0))
      throw DomainError("regularizer: alpha, beta must be >= 0");
  }

  /// Built from the penalty itself: (alpha/p) I + (beta/p) (p I - 11^T).
  Matrix materialize() const {
    const Matrix ones = Matrix::Ones(p, p);
    const Matrix eye = Matrix::Identity(p, p);
    return (alpha / p) * eye + (beta_pen / p) * (p * eye - ones);
  }

  RegularizerAV to_av() const { return {p, alpha, alpha + p * beta_pen}; }
};

struct RiskBreakdown {
  double bias = 0.0;
  double variance = 0.0;
  double total = 0.0;

  static RiskBreakdown of(double bias, double variance) { return {bias, variance, bias + variance}; }
};

inline constexpr Eigen::Index kDefaultDenseRowCap = 512;

/// Dense smoothing operator A_M = (M^-1 (x) K)((M^-1 (x) K) + np I)^-1 on
/// task-stacked vectors. Cubic in n p; intended for validation only.
inline Matrix build_operator(const KernelSpectrum& spectrum, const RegularizerAV& reg,
                             Eigen::Index max_rows = kDefaultDenseRowCap) {
  if (!(reg.lambda > 0.0) || !(reg.mu > 0.0)) {
    throw SingularRegularizerError("dense operator needs lambda > 0 and mu > 0 (got lambda = " +
                                   std::to_string(reg.lambda) + ", mu = " +
                                   std::to_string(reg.mu) + ")");
  }
  const Eigen::Index n = spectrum.n();
  const Eigen::Index rows = n * reg.p;
  if (rows > max_rows) {
    throw DimensionError("dense operator has " + std::to_string(rows) + " rows, cap is " +
                         std::to_string(max_rows));
  }
  const Matrix m = reg.materialize();
  const Matrix m_inv = m.ldlt().solve(Matrix::Identity(reg.p, reg.p));
  const Matrix k = spectrum.kernel();
  const Matrix kt = Eigen::kroneckerProduct(m_inv, k).eval();
  const Matrix shifted = kt + static_cast<double>(rows) * Matrix::Identity(rows, rows);
  // kt and shifted commute, so kt * shifted^-1 = shifted^-1 * kt.
  Matrix a = shifted.ldlt().solve(kt);
  return 0.5 * (a + a.transpose());
}

/// Sum_{j,l} M_jl <g^j, g^l> from the Gram matrix of the p functions.
inline double penalty_value(const Matrix& m, const Matrix& gram) {
  if (gram.rows() != gram.cols() || gram.rows() != m.rows()) {
    throw DimensionError("penalty: Gram matrix is " + detail::shape(gram) + ", regularizer is " +
                         detail::shape(m));
  }
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw NotPsdError("penalty: Gram matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw NotPsdError("penalty: Gram matrix is not positive semidefinite");
  }
  return (m.cwiseProduct(gram)).sum();
}

inline double penalty_value(const RegularizerAV& reg, const Matrix& gram) {
  return penalty_value(reg.materialize(), gram);
}

inline double penalty_value(const RegularizerSD& reg, const Matrix& gram) {
  return penalty_value(reg.materialize(), gram);
}

/// Risk through the dense operator: ||(A - I) f||^2 / (np) + sigma2 tr(A^T A) / (np).
inline RiskBreakdown risk_direct(const KernelSpectrum& spectrum, const TaskEnsemble& tasks,
                                 const RegularizerAV& reg, double sigma2,
                                 Eigen::Index max_rows = kDefaultDenseRowCap) {
  if (tasks.p() != reg.p) throw DimensionError("risk_direct: tasks and regularizer disagree on p");
  if (!(sigma2 > 0.0)) throw DomainError("risk_direct: sigma2 must be > 0");
  const Matrix a = build_operator(spectrum, reg, max_rows);
  const Matrix values = reconstruct_tasks(spectrum, tasks);
  const Vector f = Eigen::Map<const Vector>(values.data(), values.size());
  const double np = static_cast<double>(f.size());
  const Vector resid = a * f - f;
  return RiskBreakdown::of(resid.squaredNorm() / np, sigma2 * a.squaredNorm() / np);
}

namespace detail {
inline Vector effective_eigenvalues(const KernelSpectrum& spectrum) {
  return spectrum.gamma() / static_cast<double>(spectrum.n());
}
}  // namespace detail

/// Mean part of the multi-task risk as a function of lambda (global 1/np normalization).
inline ShrinkageRisk mean_part(const KernelSpectrum& spectrum, const MeanVarianceProfile& profile,
                               double sigma2, int p) {
  if (profile.n() != spectrum.n()) throw DimensionError("profile and spectrum disagree on n");
  const double n = static_cast<double>(spectrum.n());
  return ShrinkageRisk(detail::effective_eigenvalues(spectrum),
                       profile.mu.array().square() / (n * p), sigma2 / (n * p));
}

/// Variance part of the multi-task risk as a function of mu.
inline ShrinkageRisk variance_part(const KernelSpectrum& spectrum,
                                   const MeanVarianceProfile& profile, double sigma2, int p) {
  if (profile.n() != spectrum.n()) throw DimensionError("profile and spectrum disagree on n");
  const double n = static_cast<double>(spectrum.n());
  return ShrinkageRisk(detail::effective_eigenvalues(spectrum), profile.varsigma2 / n,
                       sigma2 * (p - 1) / (n * p));
}

/// Per-task risk of the single-task ridge estimator (1/n normalization).
inline ShrinkageRisk single_task_part(const KernelSpectrum& spectrum, const Vector& h_j,
                                      double sigma2) {
  if (h_j.size() != spectrum.n()) throw DimensionError("task vector and spectrum disagree on n");
  const double n = static_cast<double>(spectrum.n());
  return ShrinkageRisk(detail::effective_eigenvalues(spectrum), h_j.array().square() / n,
                       sigma2 / n);
}

/// Separable spectral risk of the M_AV(lambda, mu) estimator.
inline RiskBreakdown risk_spectral(const KernelSpectrum& spectrum,
                                   const MeanVarianceProfile& profile, double lambda, double mu,
                                   double sigma2, int p) {
  if (p < 1) throw DomainError("risk_spectral: p must be >= 1");
  const auto mean = mean_part(spectrum, profile, sigma2, p);
  const auto var = variance_part(spectrum, profile, sigma2, p);
  return RiskBreakdown::of(mean.bias(lambda) + var.bias(mu),
                           mean.variance(lambda) + var.variance(mu));
}

inline RiskBreakdown risk_single_task(const KernelSpectrum& spectrum, const Vector& h_j,
                                      double lambda, double sigma2) {
  const auto part = single_task_part(spectrum, h_j, sigma2);
  return RiskBreakdown::of(part.bias(lambda), part.variance(lambda));
}

}  // namespace mtkrr
