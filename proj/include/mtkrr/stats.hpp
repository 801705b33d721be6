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
// Test statistics used to summarize replicate ratios.
#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "mtkrr/error.hpp"

namespace mtkrr {

inline constexpr double kZ975 = 1.959963984540054;

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Hoeffding p-value for P(MT < ST) >= 1/2.
inline double pvalue_pi1(double b_bar, long n_rep) {
  if (!(b_bar >= 0.0 && b_bar <= 1.0)) throw DomainError("pvalue_pi1: b_bar must be in [0, 1]");
  if (n_rep < 1) throw DomainError("pvalue_pi1: need at least one replicate");
  if (b_bar < 0.5) return 0.0;
  const double d = b_bar - 0.5;
  return std::exp(-2.0 * static_cast<double>(n_rep) * d * d);
}

/// Asymptotic p-value Phi(sqrt(scale) (mean - 1) / std).
inline double pvalue_pi2(double mean_ratio, double std_ratio, double scale) {
  if (!(std_ratio > 0.0)) throw DomainError("pvalue_pi2: degenerate distribution (std = 0)");
  if (!(scale > 0.0)) throw DomainError("pvalue_pi2: scale must be > 0");
  return normal_cdf(std::sqrt(scale) * (mean_ratio - 1.0) / std_ratio);
}

struct Summary {
  double mean = 0.0;
  double std = std::numeric_limits<double>::quiet_NaN();  ///< sample std (N - 1); NaN for N = 1.
};

/// Two-pass mean and sample standard deviation, summed in index order.
inline Summary summarize(const std::vector<double>& xs) {
  if (xs.empty()) throw DomainError("summarize: empty sample");
  Summary s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

/// mean -/+ z_0.975 std / sqrt(N); empty when std is undefined.
inline std::optional<std::pair<double, double>> ci95(const Summary& s, long n_rep) {
  if (!std::isfinite(s.std)) return std::nullopt;
  const double half = kZ975 / std::sqrt(static_cast<double>(n_rep)) * s.std;
  return std::make_pair(s.mean - half, s.mean + half);
}

}  // namespace mtkrr
