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
// Reference implementations used only by the tests. They deliberately avoid
// the library's code paths: plain loops, std::vector storage, closed forms.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<double>>;

inline Grid to_grid(const Eigen::MatrixXd& m) {
  Grid g(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
  return g;
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix, sorted descending.
inline std::vector<double> jacobi_eigenvalues(Grid a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

/// Eigenvalues of the n x n matrix min(i, l) / n, in closed form, descending.
inline std::vector<double> min_kernel_eigenvalues(int n) {
  std::vector<double> ev;
  for (int k = 1; k <= n; ++k) {
    const double s = std::sin((2.0 * k - 1.0) * std::numbers::pi / (2.0 * (2.0 * n + 1.0)));
    ev.push_back(1.0 / (4.0 * s * s) / n);
  }
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

/// int_0^inf u^(a-1) / (1+u)^2 du = Gamma(a) Gamma(2-a) = (1-a) pi / sin(pi a).
inline double gamma_integral(double a) {
  if (a == 1.0) return 1.0;
  return (1.0 - a) * std::numbers::pi / std::sin(std::numbers::pi * a);
}

inline double i1_gamma(double beta, double delta) { return gamma_integral((1.0 - 2.0 * delta) / (2.0 * beta) + 2.0); }
inline double i2_gamma(double beta) { return gamma_integral(1.0 / (2.0 * beta)); }

inline double kappa_gamma(double beta, double delta) {
  const double inv = 1.0 / (2.0 * delta);
  return std::pow(i1_gamma(beta, delta), inv) * std::pow(i2_gamma(beta), 1.0 - inv) *
         std::pow(2.0 * delta - 1.0, inv) * delta / (beta * (2.0 * delta - 1.0));
}

/// Four-term spectral risk written straight from the formula.
inline double spectral_risk(const std::vector<double>& gamma, const std::vector<double>& mu,
                            const std::vector<double>& vs2, double lambda, double muu, double sigma2,
                            int p) {
  const double n = static_cast<double>(gamma.size());
  double t1 = 0, t2 = 0, t3 = 0, t4 = 0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const double g = gamma[i];
    t1 += (mu[i] * mu[i] / p) / ((g + n * lambda) * (g + n * lambda));
    t2 += (g / (g + n * lambda)) * (g / (g + n * lambda));
    t3 += vs2[i] / ((g + n * muu) * (g + n * muu));
    t4 += (g / (g + n * muu)) * (g / (g + n * muu));
  }
  return n * lambda * lambda * t1 + sigma2 / (n * p) * t2 + n * muu * muu * t3 +
         sigma2 * (p - 1) / (n * p) * t4;
}

/// Template risk R written straight from the two sums.
inline double risk_r(long n, long p, double sigma2, double lambda, double beta, double delta, double c) {
  double s1 = 0, s2 = 0;
  for (long i = 1; i <= n; ++i) {
    const double d = 1.0 + lambda * std::pow(i, 2.0 * beta);
    s1 += std::pow(i, 4.0 * beta - 2.0 * delta) / (d * d);
    s2 += 1.0 / (d * d);
  }
  return c * lambda * lambda * s1 + sigma2 / (n * p) * s2;
}

/// Penalty of M_SD from its two sums, given the Gram matrix.
inline double penalty_sd(const Grid& g, double alpha, double beta) {
  const std::size_t p = g.size();
  double norms = 0, diffs = 0;
  for (std::size_t j = 0; j < p; ++j) {
    norms += g[j][j];
    for (std::size_t k = 0; k < p; ++k) diffs += g[j][j] + g[k][k] - 2.0 * g[j][k];
  }
  return alpha / p * norms + beta / (2.0 * p) * diffs;
}

/// Penalty of M_AV from the mean and variance terms, given the Gram matrix.
inline double penalty_av(const Grid& g, double lambda, double mu) {
  const double p = static_cast<double>(g.size());
  double mean_sq = 0, norms = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    norms += g[j][j];
    for (std::size_t k = 0; k < g.size(); ++k) mean_sq += g[j][k];
  }
  mean_sq /= p * p;
  return lambda * mean_sq + mu * (norms / p - mean_sq);
}

/// 2 sum_{k=1}^{terms} cos(k theta) / k^(2m).
inline double spline_series(double theta, int m, long terms) {
  double acc = 0;
  for (long k = terms; k >= 1; --k) acc += std::cos(k * theta) / std::pow(static_cast<double>(k), 2.0 * m);
  return 2.0 * acc;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int k = 0; k < points; ++k) g.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1)));
  return g;
}

inline Eigen::MatrixXd random_psd(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = nd(gen);
  Eigen::MatrixXd k = b * b.transpose() / n;
  return 0.5 * (k + k.transpose());
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = nd(gen);
  return m;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
