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
// Task configurations: the deterministic two-cluster and one-outlier
// ensembles, and the four seeded simulation settings (A-D), including the
// periodic spline kernel used by setting B.
#pragma once

#include <Eigen/Dense>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtkrr/error.hpp"
#include "mtkrr/format.hpp"
#include "mtkrr/rng.hpp"
#include "mtkrr/spectral.hpp"

namespace mtkrr {

enum class ScenarioKind { H2Points, H1Out, SettingA, SettingB, SettingC, SettingD };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::H2Points: return "H2POINTS";
    case ScenarioKind::H1Out: return "H1OUT";
    case ScenarioKind::SettingA: return "SETTING_A";
    case ScenarioKind::SettingB: return "SETTING_B";
    case ScenarioKind::SettingC: return "SETTING_C";
    case ScenarioKind::SettingD: return "SETTING_D";
  }
  return "UNKNOWN";
}

inline std::optional<ScenarioKind> parse_scenario_kind(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (auto k : {ScenarioKind::H2Points, ScenarioKind::H1Out, ScenarioKind::SettingA,
                 ScenarioKind::SettingB, ScenarioKind::SettingC, ScenarioKind::SettingD}) {
    if (s == to_string(k)) return k;
  }
  if (s == "A") return ScenarioKind::SettingA;
  if (s == "B") return ScenarioKind::SettingB;
  if (s == "C") return ScenarioKind::SettingC;
  if (s == "D") return ScenarioKind::SettingD;
  return std::nullopt;
}

inline bool is_seeded(ScenarioKind k) {
  return k != ScenarioKind::H2Points && k != ScenarioKind::H1Out;
}

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::SettingA;
  long n = 50;
  long p = 5;
  double c1 = 1.0;
  double c2 = 0.0;
  double delta1 = 2.0;
  std::optional<double> delta2;
  double beta_or_m = 2.0;  ///< spectral decay beta, or the spline order m for setting B.
  std::uint64_t seed = 0;
  double kernel_offset = 0.0;      ///< constant added to the setting B kernel.
  double cluster_amplitude = 1.0;  ///< multiplier on the setting D cluster.

  /// Names (as config keys) of every field that violates its constraint.
  std::vector<std::string> validate() const {
    std::vector<std::string> bad;
    if (n < 1) bad.push_back("n");
    if (p < 1 || (kind == ScenarioKind::H2Points && p % 2 != 0) ||
        ((kind == ScenarioKind::H1Out || kind == ScenarioKind::SettingD) && p < 2)) {
      bad.push_back("p");
    }
    if (!(c1 >= 0.0) || !std::isfinite(c1)) bad.push_back("c1");
    if (!(c2 >= 0.0) || !std::isfinite(c2)) bad.push_back("c2");
    if (!(delta1 > 0.0) || !std::isfinite(delta1)) bad.push_back("delta");
    const bool needs_delta2 = kind == ScenarioKind::SettingC || kind == ScenarioKind::SettingD;
    if (needs_delta2 != delta2.has_value() || (delta2 && !(*delta2 > 0.0 && std::isfinite(*delta2)))) {
      bad.push_back("delta2");
    }
    if (kind == ScenarioKind::SettingB) {
      if (!(beta_or_m >= 1.0) || beta_or_m != std::floor(beta_or_m) || beta_or_m > 64) {
        bad.push_back("beta-or-m");
      }
    } else if (!(beta_or_m >= 0.0) || !std::isfinite(beta_or_m)) {
      bad.push_back("beta-or-m");
    }
    if (!std::isfinite(kernel_offset) || kernel_offset < 0.0) bad.push_back("kernel-offset");
    if (!std::isfinite(cluster_amplitude)) bad.push_back("cluster-amplitude");
    return bad;
  }

  void require_valid() const {
    const auto bad = validate();
    if (bad.empty()) return;
    std::string msg = "invalid scenario parameters:";
    for (const auto& k : bad) msg += " " + k;
    throw ConfigError(msg);
  }

  /// Flat key/value form, keys matching the command-line flag names.
  std::vector<std::pair<std::string, std::string>> to_key_values() const {
    std::vector<std::pair<std::string, std::string>> kv = {
        {"scenario", to_string(kind)},
        {"n", std::to_string(n)},
        {"p", std::to_string(p)},
        {"c1", format_number(c1)},
        {"c2", format_number(c2)},
        {"delta", format_number(delta1)},
    };
    if (delta2) kv.emplace_back("delta2", format_number(*delta2));
    kv.emplace_back("beta-or-m", format_number(beta_or_m));
    kv.emplace_back("seed", std::to_string(seed));
    kv.emplace_back("kernel-offset", format_number(kernel_offset));
    kv.emplace_back("cluster-amplitude", format_number(cluster_amplitude));
    return kv;
  }

  static ScenarioSpec from_key_values(const std::map<std::string, std::string>& kv) {
    ScenarioSpec s;
    std::vector<std::string> bad;
    auto num = [&](const char* key, double& out) {
      const auto it = kv.find(key);
      if (it == kv.end()) return;
      if (!parse_number(it->second, out)) bad.push_back(key);
    };
    auto integer = [&](const char* key, auto& out) {
      const auto it = kv.find(key);
      if (it == kv.end()) return;
      try {
        std::size_t pos = 0;
        const auto v = std::stoull(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(key);
        out = static_cast<std::remove_reference_t<decltype(out)>>(v);
      } catch (const std::exception&) {
        bad.push_back(key);
      }
    };
    for (const auto& [key, value] : kv) {
      static const char* known[] = {"scenario", "n", "p", "c1", "c2", "delta", "delta2",
                                    "beta-or-m", "seed", "kernel-offset", "cluster-amplitude"};
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) bad.push_back(key);
    }
    if (const auto it = kv.find("scenario"); it != kv.end()) {
      if (auto k = parse_scenario_kind(it->second)) s.kind = *k;
      else bad.push_back("scenario");
    }
    integer("n", s.n);
    integer("p", s.p);
    integer("seed", s.seed);
    num("c1", s.c1);
    num("c2", s.c2);
    num("delta", s.delta1);
    if (kv.count("delta2")) {
      double d = 0.0;
      num("delta2", d);
      s.delta2 = d;
    }
    num("beta-or-m", s.beta_or_m);
    num("kernel-offset", s.kernel_offset);
    num("cluster-amplitude", s.cluster_amplitude);
    for (const auto& k : s.validate()) bad.push_back(k);
    if (!bad.empty()) {
      std::string msg = "invalid scenario parameters:";
      for (const auto& k : bad) msg += " " + k;
      throw ConfigError(msg);
    }
    return s;
  }
};

struct Instance {
  KernelSpectrum spectrum;
  TaskEnsemble tasks;
};

/// gamma_i = n i^-2beta (1-indexed), identity eigenbasis.
inline KernelSpectrum synth_spectrum(long n, double beta) {
  if (n < 1) throw DomainError("synth_spectrum: n must be >= 1");
  Vector g(n);
  for (long i = 0; i < n; ++i) g[i] = static_cast<double>(n) * std::pow(i + 1.0, -2.0 * beta);
  return KernelSpectrum::diagonal(std::move(g));
}

namespace detail {

inline double decay(long i, double exponent) { return std::pow(static_cast<double>(i + 1), -exponent); }

// Rademacher signs, row index outer and task index inner.
inline Matrix rademacher_matrix(Rng& rng, long n, long p) {
  Matrix eps(n, p);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < p; ++j) eps(i, j) = rng.rademacher();
  return eps;
}

}  // namespace detail

inline TaskEnsemble gen_h2points(const ScenarioSpec& spec) {
  if (spec.p < 2 || spec.p % 2 != 0) throw DomainError("two-point ensemble needs an even p");
  spec.require_valid();
  Matrix h(spec.n, spec.p);
  const double plus = std::sqrt(spec.c1) + std::sqrt(spec.c2);
  const double minus = std::sqrt(spec.c1) - std::sqrt(spec.c2);
  const double rn = std::sqrt(static_cast<double>(spec.n));
  for (long i = 0; i < spec.n; ++i) {
    const double base = rn * detail::decay(i, spec.delta1);
    for (long j = 0; j < spec.p; ++j) h(i, j) = base * (j < spec.p / 2 ? plus : minus);
  }
  return TaskEnsemble(std::move(h));
}

inline TaskEnsemble gen_h1out(const ScenarioSpec& spec) {
  if (spec.p < 2) throw DomainError("one-outlier ensemble needs p >= 2");
  spec.require_valid();
  Matrix h(spec.n, spec.p);
  const double pm1 = static_cast<double>(spec.p - 1);
  const double cluster = std::sqrt(spec.c1) + std::sqrt(spec.c2 / pm1);
  const double outlier = std::sqrt(spec.c1) - std::sqrt(pm1 * spec.c2);
  const double rn = std::sqrt(static_cast<double>(spec.n));
  for (long i = 0; i < spec.n; ++i) {
    const double base = rn * detail::decay(i, spec.delta1);
    for (long j = 0; j < spec.p; ++j) h(i, j) = base * (j < spec.p - 1 ? cluster : outlier);
  }
  return TaskEnsemble(std::move(h));
}

/// h_i^j = sqrt(n) i^-delta (sqrt(C1) + eps_ij sqrt(C2)).
inline TaskEnsemble gen_setting_a(const ScenarioSpec& spec) {
  spec.require_valid();
  Rng rng(spec.seed);
  const Matrix eps = detail::rademacher_matrix(rng, spec.n, spec.p);
  Matrix h(spec.n, spec.p);
  const double rn = std::sqrt(static_cast<double>(spec.n));
  for (long i = 0; i < spec.n; ++i) {
    const double base = rn * detail::decay(i, spec.delta1);
    for (long j = 0; j < spec.p; ++j)
      h(i, j) = base * (std::sqrt(spec.c1) + eps(i, j) * std::sqrt(spec.c2));
  }
  return TaskEnsemble(std::move(h));
}

inline constexpr long kSplineSeriesTerms = 10000;

/// sum_{k>=1} cos(k theta) / k^(2m) for theta in [0, 2 pi].
inline double spline_series(double theta, int m) {
  constexpr double pi = std::numbers::pi;
  if (m < 1) throw DomainError("spline kernel: m must be >= 1");
  if (m == 1) return pi * pi / 6.0 - pi * theta / 2.0 + theta * theta / 4.0;
  if (m == 2) {
    const double t2 = theta * theta;
    return std::pow(pi, 4) / 90.0 - pi * pi * t2 / 12.0 + pi * t2 * theta / 12.0 - t2 * t2 / 48.0;
  }
  // Truncated series; the tail is below 2 T^(1-2m) / (2m-1) <= 2e-20 for m >= 3.
  const double c1 = std::cos(theta);
  double prev = 1.0;  // cos(0)
  double cur = c1;    // cos(theta)
  double acc = 0.0;
  for (long k = 1; k <= kSplineSeriesTerms; ++k) {
    acc += cur * std::pow(static_cast<double>(k), -2.0 * m);
    const double next = 2.0 * c1 * cur - prev;
    prev = cur;
    cur = next;
  }
  return acc;
}

/// Upper bound on the truncation error of spline_series for m >= 3.
inline double spline_tail_bound(int m) {
  return 2.0 * std::pow(static_cast<double>(kSplineSeriesTerms), 1.0 - 2.0 * m) / (2.0 * m - 1.0);
}

/// Periodic spline kernel 2 sum_k cos(k (x - y)) / k^(2m), plus a constant offset.
inline double spline_kernel(double x, double y, int m, double offset = 0.0) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double theta = std::fabs(x - y);
  theta = std::fmod(theta, two_pi);
  return 2.0 * spline_series(theta, m) + offset;
}

inline Matrix periodic_spline_kernel(const Vector& x, int m, double offset = 0.0) {
  const auto n = x.size();
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index l = i; l < n; ++l) {
      k(i, l) = spline_kernel(x[i], x[l], m, offset);
      k(l, i) = k(i, l);
    }
  }
  return k;
}

/// X_i uniform on [-pi, pi]; f^j(X_i) = (sqrt(C1) + eps_ij sqrt(C2)) |X_i|; spline kernel of order m.
inline Instance gen_setting_b(const ScenarioSpec& spec) {
  spec.require_valid();
  const int m = static_cast<int>(spec.beta_or_m);
  Rng rng(spec.seed);
  Vector x(spec.n);
  for (long i = 0; i < spec.n; ++i) x[i] = rng.uniform(-std::numbers::pi, std::numbers::pi);
  const Matrix eps = detail::rademacher_matrix(rng, spec.n, spec.p);
  Matrix f(spec.n, spec.p);
  for (long i = 0; i < spec.n; ++i)
    for (long j = 0; j < spec.p; ++j)
      f(i, j) = (std::sqrt(spec.c1) + eps(i, j) * std::sqrt(spec.c2)) * std::fabs(x[i]);
  auto spectrum = eigendecompose_kernel(periodic_spline_kernel(x, m, spec.kernel_offset));
  auto tasks = project_tasks(spectrum, f);
  return {std::move(spectrum), std::move(tasks)};
}

/// h_i^j = sqrt(n) (sqrt(C1) i^-delta1 + eps_ij sqrt(C2) i^-delta2).
inline TaskEnsemble gen_setting_c(const ScenarioSpec& spec) {
  if (!spec.delta2) throw ConfigError("setting C needs delta2");
  spec.require_valid();
  Rng rng(spec.seed);
  const Matrix eps = detail::rademacher_matrix(rng, spec.n, spec.p);
  Matrix h(spec.n, spec.p);
  const double rn = std::sqrt(static_cast<double>(spec.n));
  for (long i = 0; i < spec.n; ++i) {
    const double mean = std::sqrt(spec.c1) * detail::decay(i, spec.delta1);
    const double spread = std::sqrt(spec.c2) * detail::decay(i, *spec.delta2);
    for (long j = 0; j < spec.p; ++j) h(i, j) = rn * (mean + eps(i, j) * spread);
  }
  return TaskEnsemble(std::move(h));
}

/// Cluster j < p: sqrt(n) eps_ij i^-2 (times cluster_amplitude); outlier: sqrt(n C2) eps_ip i^-delta2.
inline TaskEnsemble gen_setting_d(const ScenarioSpec& spec) {
  if (!spec.delta2) throw ConfigError("setting D needs delta2");
  spec.require_valid();
  Rng rng(spec.seed);
  const Matrix eps = detail::rademacher_matrix(rng, spec.n, spec.p);
  Matrix h(spec.n, spec.p);
  const double rn = std::sqrt(static_cast<double>(spec.n));
  for (long i = 0; i < spec.n; ++i) {
    const double cluster = rn * spec.cluster_amplitude * detail::decay(i, 2.0);
    const double outlier = rn * std::sqrt(spec.c2) * detail::decay(i, *spec.delta2);
    for (long j = 0; j < spec.p; ++j) h(i, j) = eps(i, j) * (j < spec.p - 1 ? cluster : outlier);
  }
  return TaskEnsemble(std::move(h));
}

inline Instance generate(const ScenarioSpec& spec) {
  spec.require_valid();
  switch (spec.kind) {
    case ScenarioKind::H2Points: return {synth_spectrum(spec.n, spec.beta_or_m), gen_h2points(spec)};
    case ScenarioKind::H1Out: return {synth_spectrum(spec.n, spec.beta_or_m), gen_h1out(spec)};
    case ScenarioKind::SettingA: return {synth_spectrum(spec.n, spec.beta_or_m), gen_setting_a(spec)};
    case ScenarioKind::SettingB: return gen_setting_b(spec);
    case ScenarioKind::SettingC: return {synth_spectrum(spec.n, spec.beta_or_m), gen_setting_c(spec)};
    case ScenarioKind::SettingD: return {synth_spectrum(spec.n, spec.beta_or_m), gen_setting_d(spec)};
  }
  throw ConfigError("unknown scenario kind");
}

}  // namespace mtkrr
