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
// The scalar template risk R(n, p, sigma2, lambda, beta, delta, C) for
// polynomially decaying spectra and signals, its optimizer, and the
// closed-form upper/lower bounds on its minimum.
#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "mtkrr/error.hpp"
#include "mtkrr/shrinkage.hpp"

namespace mtkrr {

struct RiskParams {
  long n = 1;
  long p = 1;
  double sigma2 = 1.0;
  double beta = 2.0;
  double delta = 2.0;
  double c = 1.0;

  void validate() const {
    if (n < 1) throw DomainError("risk params: n must be >= 1");
    if (p < 1) throw DomainError("risk params: p must be >= 1");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("risk params: sigma2 must be > 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("risk params: beta must be > 0");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("risk params: delta must be > 0");
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("risk params: C must be >= 0");
  }

  /// 1 < 2 delta < 4 beta + 1: the minimax regime.
  bool satisfies_hm() const { return 1.0 < 2.0 * delta && 2.0 * delta < 4.0 * beta + 1.0; }
  /// 1 < 2 delta < 4 beta: needed for the lower bound.
  bool satisfies_lb() const { return 1.0 < 2.0 * delta && 2.0 * delta < 4.0 * beta; }

  /// n p / sigma2.
  double snr_scale() const { return static_cast<double>(n) * static_cast<double>(p) / sigma2; }
};

enum class Regime { Regularize, TrivialNoise, Undetermined };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Regularize: return "REGULARIZE";
    case Regime::TrivialNoise: return "TRIVIAL_NOISE";
    case Regime::Undetermined: return "UNDETERMINED";
  }
  return "UNKNOWN";
}

struct BoundReport {
  RiskParams params;
  double r_star = 0.0;
  double lambda_star = 0.0;
  double upper = 0.0;
  bool upper_from_theory = false;  ///< false when only the trivial sigma2/p bound applies.
  std::optional<double> lower;
  std::optional<double> epsilon_cap;
  std::optional<double> kappa;
  std::optional<double> alpha;
  Regime regime = Regime::Undetermined;
  Minimum1D optimizer;
};

struct QuadratureOptions {
  double tolerance = 1e-8;
};

/// Template risk as a shrinkage problem: e_i = i^-2beta, w_i = C i^-2delta, v = sigma2/(np).
inline ShrinkageRisk template_risk(const RiskParams& params) {
  params.validate();
  Eigen::VectorXd e(params.n);
  Eigen::VectorXd w(params.n);
  for (long i = 1; i <= params.n; ++i) {
    const double di = static_cast<double>(i);
    e[i - 1] = std::pow(di, -2.0 * params.beta);
    w[i - 1] = params.c * std::pow(di, -2.0 * params.delta);
  }
  return ShrinkageRisk(std::move(e), std::move(w), 1.0 / params.snr_scale());
}

/// S1(n, lambda) = sum_i i^(4beta - 2delta) / (1 + lambda i^2beta)^2.
inline double s1(const RiskParams& params, double lambda) {
  params.validate();
  double acc = 0.0;
  for (long i = 1; i <= params.n; ++i) {
    const double di = static_cast<double>(i);
    const double d = 1.0 + lambda * std::pow(di, 2.0 * params.beta);
    acc += std::pow(di, 4.0 * params.beta - 2.0 * params.delta) / (d * d);
  }
  return acc;
}

/// S2(n, lambda) = sum_i 1 / (1 + lambda i^2beta)^2.
inline double s2(const RiskParams& params, double lambda) {
  params.validate();
  double acc = 0.0;
  for (long i = 1; i <= params.n; ++i) {
    const double d = 1.0 + lambda * std::pow(static_cast<double>(i), 2.0 * params.beta);
    acc += 1.0 / (d * d);
  }
  return acc;
}

inline double risk_r(const RiskParams& params, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("risk_r: lambda must be >= 0");
  return template_risk(params).value(lambda);
}

namespace detail {

// Integral of u^(a-1) / (1+u)^2 over u in [0, upper_u] (upper_u = inf allowed),
// after u = v / (1 - v): the integrand becomes v^(a-1) (1-v)^(1-a) on [0, v_max].
inline double power_ratio_integral(double a, double upper_u, const QuadratureOptions& q) {
  if (!(a > 0.0 && a < 2.0)) {
    throw DomainError("integral diverges: exponent a = " + std::to_string(a) +
                      " is outside (0, 2)");
  }
  const double v_max = std::isinf(upper_u) ? 1.0 : upper_u / (1.0 + upper_u);
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto integrand = [a, v_max](double x, double xc) {
    // xc is the signed distance to the nearest endpoint of [0, v_max].
    const double v = x;
    const double one_minus_v = (x > 0.5 * v_max && v_max == 1.0) ? xc : 1.0 - x;
    if (v <= 0.0 || one_minus_v <= 0.0) return 0.0;
    return std::pow(v, a - 1.0) * std::pow(one_minus_v, 1.0 - a);
  };
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double value = integrator.integrate(integrand, 0.0, v_max, q.tolerance, &error, &l1, &levels);
  if (!std::isfinite(value)) throw NumericalError("quadrature returned a non-finite value");
  return value;
}

inline double i1_exponent(double beta, double delta) { return (1.0 - 2.0 * delta) / (2.0 * beta) + 2.0; }
inline double i2_exponent(double beta) { return 1.0 / (2.0 * beta); }

}  // namespace detail

/// I1(beta, delta) = int_0^inf u^((1-2delta)/(2beta) + 1) / (1+u)^2 du.
inline double integral_i1(double beta, double delta, const QuadratureOptions& q = {}) {
  if (!(beta > 0.0)) throw DomainError("integral_i1: beta must be > 0");
  return detail::power_ratio_integral(detail::i1_exponent(beta, delta), kInf, q);
}

/// I2(beta) = int_0^inf u^(1/(2beta) - 1) / (1+u)^2 du, which is I1(beta, 2 beta).
/// I1(beta, 0) has exponent 1/(2beta) + 1 and diverges.
inline double integral_i2(double beta, const QuadratureOptions& q = {}) {
  if (!(beta > 0.0)) throw DomainError("integral_i2: beta must be > 0");
  return detail::power_ratio_integral(detail::i2_exponent(beta), kInf, q);
}

inline double kappa(double beta, double delta, const QuadratureOptions& q = {}) {
  if (!(1.0 < 2.0 * delta && 2.0 * delta < 4.0 * beta + 1.0)) {
    throw DomainError("kappa: need 1 < 2 delta < 4 beta + 1 (beta = " + std::to_string(beta) +
                      ", delta = " + std::to_string(delta) + ")");
  }
  const double i1 = integral_i1(beta, delta, q);
  const double i2 = integral_i2(beta, q);
  const double inv = 1.0 / (2.0 * delta);
  return std::pow(i1, inv) * std::pow(i2, 1.0 - inv) * std::pow(2.0 * delta - 1.0, inv) * delta /
         (beta * (2.0 * delta - 1.0));
}

/// Maximizer of t -> t^(4beta - 2delta) / (1 + lambda t^2beta)^2.
inline double t_star(double beta, double delta, double lambda) {
  if (!(4.0 * beta > 2.0 * delta)) throw DomainError("t_star: need 4 beta > 2 delta");
  if (!(lambda > 0.0)) throw DomainError("t_star: lambda must be > 0");
  return std::pow((4.0 * beta - 2.0 * delta) / (2.0 * delta * lambda), 1.0 / (2.0 * beta));
}

/// Upper end of the interval that contains the minimizer of R.
inline double epsilon_cap(const RiskParams& params, const QuadratureOptions& q = {}) {
  params.validate();
  if (!params.satisfies_hm()) throw DomainError("epsilon_cap: need 1 < 2 delta < 4 beta + 1");
  if (params.c == 0.0) throw NoCapError("epsilon_cap: C = 0, the risk decreases without bound");
  const double inv = 1.0 / (2.0 * params.delta);
  const double a = std::pow(params.c, inv - 1.0) * std::pow(2.0, inv) * kappa(params.beta, params.delta, q);
  const double x = std::sqrt(a) * std::pow(params.snr_scale(), 0.5 * inv - 0.5);
  if (!(x < 1.0)) {
    throw NoCapError("epsilon_cap: solvability condition fails (" + std::to_string(x) + " >= 1)");
  }
  return x / (1.0 - x);
}

/// min of the two sub-integral ratios int_0^1 / int_0^inf for I2 and I1.
inline double alpha_constant(double beta, double delta, const QuadratureOptions& q = {}) {
  if (!(1.0 < 2.0 * delta && 2.0 * delta < 4.0 * beta)) {
    throw DomainError("alpha_constant: need 1 < 2 delta < 4 beta");
  }
  const double a2 = detail::i2_exponent(beta);
  const double a1 = detail::i1_exponent(beta, delta);
  const double r2 = detail::power_ratio_integral(a2, 1.0, q) / detail::power_ratio_integral(a2, kInf, q);
  const double r1 = detail::power_ratio_integral(a1, 1.0, q) / detail::power_ratio_integral(a1, kInf, q);
  return std::min(r1, r2);
}

/// (np/sigma2)^(1/2delta - 1) C^(1/2delta) kappa: the common rate of the bounds.
inline double rate_term(const RiskParams& params, double kappa_value) {
  const double inv = 1.0 / (2.0 * params.delta);
  return std::pow(params.snr_scale(), inv - 1.0) * std::pow(params.c, inv) * kappa_value;
}

inline Regime classify_regime(const RiskParams& params, double r_star, double lambda_star,
                              std::optional<double> kappa_value) {
  const double threshold = std::pow(static_cast<double>(params.n), -2.0 * params.beta);
  if (lambda_star >= threshold && kappa_value && params.c > 0.0) {
    const double ref = rate_term(params, *kappa_value);
    if (r_star >= ref / 4.0 && r_star <= 4.0 * ref) return Regime::Regularize;
  }
  const double p = static_cast<double>(params.p);
  if (lambda_star <= threshold && r_star >= params.sigma2 / (4.0 * p) &&
      r_star <= params.sigma2 / p * (1.0 + 1e-12)) {
    return Regime::TrivialNoise;
  }
  return Regime::Undetermined;
}

inline BoundReport minimize_risk(const RiskParams& params, const QuadratureOptions& q = {},
                                 MinimizeOptions opt = {}) {
  params.validate();
  BoundReport report;
  report.params = params;
  const bool hm = params.satisfies_hm();
  if (hm) {
    report.kappa = kappa(params.beta, params.delta, q);
    try {
      report.epsilon_cap = epsilon_cap(params, q);
    } catch (const NoCapError&) {
    }
  }
  if (params.satisfies_lb()) report.alpha = alpha_constant(params.beta, params.delta, q);

  opt.lo = 1e-12;
  opt.hi = std::max(10.0, report.epsilon_cap ? 2.0 * *report.epsilon_cap : 0.0);
  const auto f = template_risk(params);
  report.optimizer = minimize_shrinkage(f, opt);
  report.r_star = report.optimizer.value;
  report.lambda_star = report.optimizer.argmin;

  const double p = static_cast<double>(params.p);
  const double trivial = params.sigma2 / p;
  const double inv = 1.0 / (2.0 * params.delta);
  if (hm) {
    report.upper = std::min(std::pow(2.0, inv) * rate_term(params, *report.kappa), trivial);
    report.upper_from_theory = true;
  } else {
    report.upper = trivial;
  }
  if (report.alpha && report.kappa) {
    report.lower = std::min(*report.alpha * rate_term(params, *report.kappa), params.sigma2 / (4.0 * p));
  }
  report.regime = classify_regime(params, report.r_star, report.lambda_star, report.kappa);
  return report;
}

inline Regime classify_regime(const RiskParams& params) { return minimize_risk(params).regime; }

}  // namespace mtkrr
