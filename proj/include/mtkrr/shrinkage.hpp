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
// One-dimensional ridge shrinkage risks of the form
//
//   F(lambda) = sum_i w_i (lambda / (e_i + lambda))^2 + v sum_i (e_i / (e_i + lambda))^2
//
// and a bracketing, safeguarded Newton minimizer for them. Every risk in the
// library (mean part, variance part, single task, template risk R) reduces to
// this shape with a different choice of (e, w, v).
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mtkrr/error.hpp"

namespace mtkrr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Separable shrinkage risk. `e` are the effective eigenvalues (gamma / n for
/// kernel problems), `w` the squared signal weights and `v` the noise weight.
class ShrinkageRisk {
 public:
  ShrinkageRisk(Eigen::VectorXd e, Eigen::VectorXd w, double v)
      : e_(std::move(e)), w_(std::move(w)), v_(v) {
    if (e_.size() != w_.size()) {
      throw DimensionError("shrinkage risk: e has " + std::to_string(e_.size()) +
                           " entries, w has " + std::to_string(w_.size()));
    }
    if (!(v_ >= 0.0) || !std::isfinite(v_)) throw DomainError("shrinkage risk: v must be >= 0");
    for (Eigen::Index i = 0; i < e_.size(); ++i) {
      if (!(e_[i] >= 0.0) || !std::isfinite(e_[i]))
        throw DomainError("shrinkage risk: e must be finite and >= 0");
      if (!(w_[i] >= 0.0) || !std::isfinite(w_[i]))
        throw DomainError("shrinkage risk: w must be finite and >= 0");
    }
  }

  const Eigen::VectorXd& e() const { return e_; }
  const Eigen::VectorXd& w() const { return w_; }
  double v() const { return v_; }

  /// Largest effective eigenvalue, used to scale search ranges.
  double scale() const { return e_.size() ? e_.maxCoeff() : 0.0; }

  double bias(double lambda) const {
    check(lambda);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e_.size(); ++i) {
      const double s = shrink(e_[i], lambda);
      acc += w_[i] * s * s;
    }
    return acc;
  }

  double variance(double lambda) const {
    check(lambda);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e_.size(); ++i) {
      const double t = keep(e_[i], lambda);
      acc += t * t;
    }
    return v_ * acc;
  }

  double value(double lambda) const { return bias(lambda) + variance(lambda); }

  /// dF/dlambda for finite lambda > 0.
  double derivative(double lambda) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e_.size(); ++i) {
      const double e = e_[i];
      if (e == 0.0) continue;
      const double d = e + lambda;
      acc += 2.0 * e * (w_[i] * lambda - v_ * e) / (d * d * d);
    }
    return acc;
  }

  /// d2F/dlambda2 for finite lambda > 0.
  double second_derivative(double lambda) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e_.size(); ++i) {
      const double e = e_[i];
      if (e == 0.0) continue;
      const double d = e + lambda;
      const double d2 = d * d;
      acc += 2.0 * e * (w_[i] * (e - 2.0 * lambda) + 3.0 * v_ * e) / (d2 * d2);
    }
    return acc;
  }

  /// Shrinkage factor lambda / (e + lambda). Zero eigenvalues are never fitted.
  static double shrink(double e, double lambda) {
    if (e == 0.0 || std::isinf(lambda)) return 1.0;
    return lambda / (e + lambda);
  }

  /// Smoothing factor e / (e + lambda).
  static double keep(double e, double lambda) {
    if (e == 0.0 || std::isinf(lambda)) return 0.0;
    return e / (e + lambda);
  }

 private:
  static void check(double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("regularization parameter must be >= 0");
  }

  Eigen::VectorXd e_;
  Eigen::VectorXd w_;
  double v_;
};

struct MinimizeOptions {
  double lo = 0.0;  ///< 0 means "pick from the spectrum scale".
  double hi = 0.0;
  int bracket_points = 64;
  int max_iter = 100;
  double grad_tol = 1e-5;
  bool include_zero = true;
  bool include_infinity = true;
};

enum class MinimumLocation { Interior, Zero, Infinity, RangeEdge };

inline const char* to_string(MinimumLocation loc) {
  switch (loc) {
    case MinimumLocation::Interior: return "interior";
    case MinimumLocation::Zero: return "zero";
    case MinimumLocation::Infinity: return "infinity";
    case MinimumLocation::RangeEdge: return "range_edge";
  }
  return "unknown";
}

struct Minimum1D {
  double argmin = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double derivative = 0.0;  ///< dF/dlambda at argmin (0 at the boundary candidates).
  bool gradient_small = false;  ///< |dF/dlambda| below grad_tol.
  MinimumLocation location = MinimumLocation::Interior;
  double range_lo = 0.0;
  double range_hi = 0.0;
};

/// Default search range [1e-14, 1e8] times the largest effective eigenvalue.
inline std::pair<double, double> default_range(const ShrinkageRisk& f) {
  const double s = f.scale() > 0.0 ? f.scale() : 1.0;
  return {1e-14 * s, 1e8 * s};
}

namespace detail {

// Log-parametrized objective g(t) = F(exp(t)) with g' = lambda F', g'' = lambda F' + lambda^2 F''.
struct LogObjective {
  const ShrinkageRisk& f;
  double value(double t) const { return f.value(std::exp(t)); }
  double d1(double t) const {
    const double l = std::exp(t);
    return l * f.derivative(l);
  }
  double d2(double t) const {
    const double l = std::exp(t);
    return l * f.derivative(l) + l * l * f.second_derivative(l);
  }
};

inline void require_finite(double value, double lambda) {
  if (!std::isfinite(value)) {
    throw NumericalError("risk evaluation is not finite at lambda = " + std::to_string(lambda));
  }
}

}  // namespace detail

/// Minimizes F over [lo, hi] (log scale) plus the optional candidates 0 and +inf.
///
/// A log-spaced grid picks the best basin; inside the bracket around the best
/// grid point, Newton steps on g'(t) are taken when they stay inside the
/// current sign-change interval and bisection is used otherwise. Brackets
/// without a sign change fall back to golden-section search.
inline Minimum1D minimize_shrinkage(const ShrinkageRisk& f, MinimizeOptions opt = {}) {
  if (opt.lo <= 0.0 || opt.hi <= 0.0) {
    const auto [lo, hi] = default_range(f);
    if (opt.lo <= 0.0) opt.lo = lo;
    if (opt.hi <= 0.0) opt.hi = hi;
  }
  if (!(opt.lo < opt.hi)) throw DomainError("minimizer: empty search range");
  if (opt.bracket_points < 3) throw DomainError("minimizer: need at least 3 grid points");

  const detail::LogObjective g{f};
  const double t_lo = std::log(opt.lo);
  const double t_hi = std::log(opt.hi);
  const int m = opt.bracket_points;

  std::vector<double> ts(static_cast<std::size_t>(m));
  std::vector<double> gs(static_cast<std::size_t>(m));
  int best = 0;
  for (int k = 0; k < m; ++k) {
    const double t = (k == m - 1) ? t_hi : t_lo + (t_hi - t_lo) * k / (m - 1);
    ts[static_cast<std::size_t>(k)] = t;
    const double val = g.value(t);
    detail::require_finite(val, std::exp(t));
    gs[static_cast<std::size_t>(k)] = val;
    if (val < gs[static_cast<std::size_t>(best)]) best = k;
  }

  double a = ts[static_cast<std::size_t>(std::max(best - 1, 0))];
  double b = ts[static_cast<std::size_t>(std::min(best + 1, m - 1))];
  double t_best = ts[static_cast<std::size_t>(best)];
  double g_best = gs[static_cast<std::size_t>(best)];
  int iterations = 0;
  bool converged = false;
  constexpr double kStepTol = 1e-13;

  double ga = g.d1(a);
  double gb = g.d1(b);
  if (ga < 0.0 && gb > 0.0) {
    // Safeguarded Newton on g' with a shrinking sign-change bracket.
    double t = t_best;
    double dx_old = b - a;
    double dx = dx_old;
    double d = g.d1(t);
    double dd = g.d2(t);
    for (iterations = 1; iterations <= opt.max_iter; ++iterations) {
      const bool newton_ok = dd > 0.0 && ((t - b) * dd - d) * ((t - a) * dd - d) < 0.0 &&
                             std::abs(2.0 * d) <= std::abs(dx_old * dd);
      dx_old = dx;
      if (newton_ok) {
        dx = d / dd;
        t -= dx;
      } else {
        dx = 0.5 * (b - a);
        t = a + dx;
      }
      if (std::abs(dx) < kStepTol * std::max(1.0, std::abs(t))) {
        converged = true;
        break;
      }
      d = g.d1(t);
      dd = g.d2(t);
      detail::require_finite(d, std::exp(t));
      if (d == 0.0) {
        converged = true;
        break;
      }
      if (d < 0.0) a = t;
      else b = t;
    }
    const double val = g.value(t);
    detail::require_finite(val, std::exp(t));
    if (val <= g_best) {
      g_best = val;
      t_best = t;
    }
  } else {
    // No interior stationary point in the bracket: golden section on g.
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = g.value(x1);
    double f2 = g.value(x2);
    for (iterations = 1; iterations <= opt.max_iter; ++iterations) {
      if (b - a < kStepTol * std::max(1.0, std::abs(a))) {
        converged = true;
        break;
      }
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = g.value(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = g.value(x2);
      }
    }
    const double t = f1 <= f2 ? x1 : x2;
    const double val = std::min(f1, f2);
    if (val <= g_best) {
      g_best = val;
      t_best = t;
    }
  }

  Minimum1D out;
  out.argmin = std::exp(t_best);
  out.value = g_best;
  out.iterations = iterations;
  out.converged = converged;
  out.derivative = f.derivative(out.argmin);
  out.gradient_small = std::abs(out.derivative) < opt.grad_tol;
  const double width = (t_hi - t_lo) / (m - 1);
  out.location = (t_best - t_lo < 1e-9 * width || t_hi - t_best < 1e-9 * width)
                     ? MinimumLocation::RangeEdge
                     : MinimumLocation::Interior;
  out.range_lo = opt.lo;
  out.range_hi = opt.hi;

  if (opt.include_zero) {
    const double z = f.value(0.0);
    if (z < out.value) {
      out.argmin = 0.0;
      out.value = z;
      out.derivative = 0.0;
      out.gradient_small = true;
      out.location = MinimumLocation::Zero;
    }
  }
  if (opt.include_infinity) {
    const double z = f.value(kInf);
    if (z < out.value) {
      out.argmin = kInf;
      out.value = z;
      out.derivative = 0.0;
      out.gradient_small = true;
      out.location = MinimumLocation::Infinity;
    }
  }
  return out;
}

}  // namespace mtkrr
