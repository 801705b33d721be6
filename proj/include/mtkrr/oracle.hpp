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
// Multi-task and single-task oracle risks, their ratio, the closed-form
// approximations for the two-cluster and one-outlier configurations, and the
// quantities entering the data-driven oracle inequality.
#pragma once

#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "mtkrr/error.hpp"
#include "mtkrr/estimators.hpp"
#include "mtkrr/risk_function.hpp"
#include "mtkrr/shrinkage.hpp"
#include "mtkrr/spectral.hpp"

namespace mtkrr {

struct MultiTaskOracle {
  double lambda_star = 0.0;
  double mu_star = 0.0;
  double mt_risk = 0.0;
  Minimum1D mean_min;
  Minimum1D variance_min;
};

struct SingleTaskOracle {
  std::vector<double> st_lambdas;
  std::vector<double> per_task_risks;  ///< 1/n normalized risk of each task at its oracle.
  std::vector<Minimum1D> per_task_min;
  double st_risk = 0.0;
};

struct OracleResult {
  double mt_risk = 0.0;
  double st_risk = 0.0;
  double lambda_star = 0.0;
  double mu_star = 0.0;
  std::vector<double> st_lambdas;
  double rho = 0.0;
  std::vector<double> per_task_risks;
  double mean_part_risk = 0.0;
  double variance_part_risk = 0.0;
};

enum class TaskSetting { TwoPoints, OneOut };

struct RatioTheory {
  double r = 0.0;
  double rho_formula = 0.0;
  TaskSetting setting = TaskSetting::TwoPoints;
};

/// Minimizes the mean part over lambda and the variance part over mu separately.
inline MultiTaskOracle oracle_multitask(const KernelSpectrum& spectrum,
                                        const MeanVarianceProfile& profile, double sigma2, int p,
                                        const MinimizeOptions& opt = {}) {
  if (!(sigma2 > 0.0)) throw DomainError("oracle_multitask: sigma2 must be > 0");
  MultiTaskOracle out;
  out.mean_min = minimize_shrinkage(mean_part(spectrum, profile, sigma2, p), opt);
  out.variance_min = minimize_shrinkage(variance_part(spectrum, profile, sigma2, p), opt);
  out.lambda_star = out.mean_min.argmin;
  out.mu_star = out.variance_min.argmin;
  out.mt_risk = out.mean_min.value + out.variance_min.value;
  return out;
}

inline SingleTaskOracle oracle_singletask(const KernelSpectrum& spectrum, const TaskEnsemble& tasks,
                                          double sigma2, const MinimizeOptions& opt = {}) {
  if (!(sigma2 > 0.0)) throw DomainError("oracle_singletask: sigma2 must be > 0");
  if (tasks.n() != spectrum.n()) throw DimensionError("oracle_singletask: tasks and spectrum disagree on n");
  SingleTaskOracle out;
  const auto p = tasks.p();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const Vector h = tasks.task(j);
    auto m = minimize_shrinkage(single_task_part(spectrum, h, sigma2), opt);
    out.st_lambdas.push_back(m.argmin);
    out.per_task_risks.push_back(m.value);
    acc += m.value;
    out.per_task_min.push_back(std::move(m));
  }
  out.st_risk = acc / static_cast<double>(p);
  return out;
}

inline OracleResult compare_oracles(const KernelSpectrum& spectrum, const TaskEnsemble& tasks,
                                    double sigma2, const MinimizeOptions& opt = {}) {
  const auto profile = mean_variance_profile(tasks);
  const int p = static_cast<int>(tasks.p());
  const auto mt = oracle_multitask(spectrum, profile, sigma2, p, opt);
  auto st = oracle_singletask(spectrum, tasks, sigma2, opt);
  OracleResult r;
  r.mt_risk = mt.mt_risk;
  r.st_risk = st.st_risk;
  r.lambda_star = mt.lambda_star;
  r.mu_star = mt.mu_star;
  r.st_lambdas = std::move(st.st_lambdas);
  r.per_task_risks = std::move(st.per_task_risks);
  r.mean_part_risk = mt.mean_min.value;
  r.variance_part_risk = mt.variance_min.value;
  if (!(r.st_risk > 0.0)) throw NumericalError("single-task oracle risk is zero; ratio undefined");
  r.rho = r.mt_risk / r.st_risk;
  return r;
}

namespace detail {
inline double rho_numerator(double p, double delta, double r) {
  const double inv = 1.0 / (2.0 * delta);
  return std::pow(p, inv - 1.0) + std::pow((p - 1.0) / p, 1.0 - inv) * std::pow(r, inv);
}
inline void check_rho_args(double delta, double r) {
  if (!(delta > 0.0)) throw DomainError("rho: delta must be > 0");
  if (!(r >= 0.0)) throw DomainError("rho: r must be >= 0");
}
}  // namespace detail

inline double rho_formula_2points(int p, double delta, double r) {
  if (p < 2 || p % 2 != 0) throw DomainError("rho_formula_2points: p must be even and >= 2");
  detail::check_rho_args(delta, r);
  const double sr = std::sqrt(r);
  const double den = std::pow(1.0 + sr, 1.0 / delta) + std::pow(std::abs(1.0 - sr), 1.0 / delta);
  return detail::rho_numerator(p, delta, r) / den;
}

inline double rho_formula_1out(int p, double delta, double r) {
  if (p < 2) throw DomainError("rho_formula_1out: p must be >= 2");
  detail::check_rho_args(delta, r);
  const double pd = p;
  const double den = (pd - 1.0) / pd * std::pow(1.0 + std::sqrt(r / (pd - 1.0)), 1.0 / delta) +
                     std::pow(std::abs(1.0 - std::sqrt(r * (pd - 1.0))), 1.0 / delta) / pd;
  return detail::rho_numerator(pd, delta, r) / den;
}

inline RatioTheory ratio_theory(TaskSetting setting, int p, double delta, double r) {
  return {r,
          setting == TaskSetting::TwoPoints ? rho_formula_2points(p, delta, r)
                                            : rho_formula_1out(p, delta, r),
          setting};
}

/// Signal amplitude C^j of each task: (h_i^j)^2 = n C^j i^-2delta.
inline std::vector<double> task_amplitudes(TaskSetting setting, int p, double c1, double c2) {
  std::vector<double> c(static_cast<std::size_t>(p));
  const double a = std::sqrt(c1);
  for (int j = 0; j < p; ++j) {
    double h = 0.0;
    if (setting == TaskSetting::TwoPoints) {
      h = j < p / 2 ? a + std::sqrt(c2) : a - std::sqrt(c2);
    } else {
      h = j < p - 1 ? a + std::sqrt(c2 / (p - 1)) : a - std::sqrt((p - 1) * c2);
    }
    c[static_cast<std::size_t>(j)] = h * h;
  }
  return c;
}

namespace detail {
inline double mt_bracket(int p, double delta, double c1, double c2) {
  const double inv = 1.0 / (2.0 * delta);
  return std::pow(c1, inv) + std::pow(p - 1.0, 1.0 - inv) * std::pow(c2, inv);
}
}  // namespace detail

/// Upper bound on the multi-task oracle risk under the mean/variance decay assumption.
inline double mt_theory_upper(long n, int p, double sigma2, double beta, double delta, double c1,
                              double c2) {
  const double inv = 1.0 / (2.0 * delta);
  const double x = static_cast<double>(n) * p / sigma2;
  return std::pow(2.0, inv) * std::pow(x, inv - 1.0) * kappa(beta, delta) *
         detail::mt_bracket(p, delta, c1, c2);
}

/// Lower bound counterpart, using alpha_constant.
inline double mt_theory_lower(long n, int p, double sigma2, double beta, double delta, double c1,
                              double c2) {
  const double inv = 1.0 / (2.0 * delta);
  const double x = static_cast<double>(n) * p / sigma2;
  return alpha_constant(beta, delta) * std::pow(x, inv - 1.0) * kappa(beta, delta) *
         detail::mt_bracket(p, delta, c1, c2);
}

/// Order-of-magnitude approximation of the single-task oracle risk.
inline double st_theory_approx(TaskSetting setting, long n, int p, double sigma2, double beta,
                               double delta, double c1, double c2) {
  const double inv = 1.0 / (2.0 * delta);
  const double pd = p;
  const double base = std::pow(static_cast<double>(n) * pd / sigma2, inv - 1.0) *
                      kappa(beta, delta) * std::pow(pd, 1.0 - inv);
  const double a = std::sqrt(c1);
  if (setting == TaskSetting::TwoPoints) {
    const double b = std::sqrt(c2);
    return base / 2.0 * (std::pow(a + b, 1.0 / delta) + std::pow(std::abs(a - b), 1.0 / delta));
  }
  return base * ((pd - 1.0) / pd * std::pow(a + std::sqrt(c2 / (pd - 1.0)), 1.0 / delta) +
                 std::pow(std::abs(a - std::sqrt((pd - 1.0) * c2)), 1.0 / delta) / pd);
}

struct DfBias {
  double df = 0.0;
  double b = 0.0;
};

/// df(lambda) = tr K (K + n lambda)^-1 and b(lambda) = ||(A_lambda - I) f||^2 / n.
inline DfBias df_and_bias(const KernelSpectrum& spectrum, const Vector& h_j, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("df_and_bias: lambda must be >= 0");
  if (h_j.size() != spectrum.n()) throw DimensionError("df_and_bias: task vector and spectrum disagree on n");
  const double n = static_cast<double>(spectrum.n());
  DfBias out;
  for (Eigen::Index i = 0; i < h_j.size(); ++i) {
    const double g = spectrum.gamma()[i];
    out.df += ShrinkageRisk::keep(g, n * lambda);
    const double s = ShrinkageRisk::shrink(g, n * lambda);
    out.b += s * s * h_j[i] * h_j[i];
  }
  out.b /= n;
  return out;
}

struct HdfWitness {
  bool found = false;
  double lambda = 0.0;
  double df = 0.0;
  double b = 0.0;
  double df_limit = 0.0;
  double b_limit = 0.0;
};

/// Looks for lambda with df(lambda) <= sqrt(n) and b(lambda) <= sigma2 sqrt(ln n / n).
///
/// df decreases and b increases in lambda, so the smallest lambda meeting the
/// df condition is the best candidate for the b condition; it is located by
/// bisection in log(lambda).
inline HdfWitness hdf_witness(const KernelSpectrum& spectrum, const Vector& h_j, double sigma2) {
  const double n = static_cast<double>(spectrum.n());
  if (spectrum.n() < 2) throw DomainError("hdf_witness: need n >= 2");
  HdfWitness w;
  w.df_limit = std::sqrt(n);
  w.b_limit = sigma2 * std::sqrt(std::log(n) / n);
  const double scale = std::max(spectrum.gamma()[0] / n, 1e-300);
  double lo = std::log(1e-300 + 1e-16 * scale);
  double hi = std::log(1e16 * scale);
  if (df_and_bias(spectrum, h_j, std::exp(lo)).df <= w.df_limit) {
    hi = lo;
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (df_and_bias(spectrum, h_j, std::exp(mid)).df <= w.df_limit) hi = mid;
      else lo = mid;
    }
  }
  w.lambda = std::exp(hi);
  const auto db = df_and_bias(spectrum, h_j, w.lambda);
  w.df = db.df;
  w.b = db.b;
  w.found = w.df <= w.df_limit && w.b <= w.b_limit;
  return w;
}

/// Right-hand side of the oracle inequality for the data-driven multi-task estimator.
inline double hm_bound_rhs(long n, int p, double sigma2, double theta, double mt_oracle_risk,
                           double f_sqnorm, double l_const = 1.0) {
  if (n < 3) throw DomainError("hm_bound_rhs: need n >= 3");
  if (!(theta >= 2.0)) throw DomainError("hm_bound_rhs: need theta >= 2");
  const double nd = static_cast<double>(n);
  const double ln = std::log(nd);
  const double lead = (1.0 + 1.0 / ln) * (1.0 + 1.0 / ln);
  return lead * mt_oracle_risk + l_const * sigma2 * (2.0 + theta) * (2.0 + theta) * p * ln * ln * ln / nd +
         p / std::pow(nd, theta / 2.0) * f_sqnorm / (nd * p);
}

/// Upper bound on risk(data-driven MT) / single-task oracle risk given rho and
/// the per-task amplitudes C^j.
inline double plugin_ratio_bound(double n, double sigma2, double beta, double delta, double theta,
                                 double rho, const std::vector<double>& c_per_task,
                                 double l_const = 1.0) {
  if (!(n >= 3.0)) throw DomainError("plugin_ratio_bound: need n >= 3");
  if (c_per_task.empty()) throw DomainError("plugin_ratio_bound: need at least one task");
  const double nd = n;
  const double p = static_cast<double>(c_per_task.size());
  const double ln = std::log(nd);
  const double inv = 1.0 / (2.0 * delta);
  double mean_c = 0.0;
  double mean_root = 0.0;
  for (double c : c_per_task) {
    mean_c += c / p;
    mean_root += std::pow(c, inv) / p;
  }
  const double num = l_const * sigma2 * (2.0 + theta) * (2.0 + theta) * p * ln * ln * ln / nd +
                     p * boost::math::zeta(2.0 * delta) / std::pow(nd, theta / 2.0) * mean_c;
  const double den = std::pow(nd / sigma2, inv - 1.0) * kappa(beta, delta) * mean_root;
  return (1.0 + 1.0 / ln) * (1.0 + 1.0 / ln) * rho + num / den;
}

}  // namespace mtkrr
