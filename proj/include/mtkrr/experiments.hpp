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
// Monte Carlo comparison of the multi-task and single-task oracles over
// seeded replicates of a scenario, and the table / heatmap sweeps built on it.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtkrr/error.hpp"
#include "mtkrr/oracle.hpp"
#include "mtkrr/parallel.hpp"
#include "mtkrr/rng.hpp"
#include "mtkrr/scenarios.hpp"
#include "mtkrr/stats.hpp"

namespace mtkrr {

/// Which count goes under the square root in pi2: replicates (N) or sample size (n).
enum class Pi2Scale { Replicates, SampleSize };

inline const char* to_string(Pi2Scale s) { return s == Pi2Scale::Replicates ? "N" : "n"; }

struct ExperimentOptions {
  unsigned jobs = default_jobs();
  Pi2Scale pi2_scale = Pi2Scale::Replicates;
  MinimizeOptions minimize;
};

struct ExperimentReport {
  ScenarioSpec spec;
  double sigma2 = 1.0;
  long n_rep = 0;
  std::vector<std::uint64_t> replicate_seeds;
  std::vector<double> ratios;
  std::vector<double> mt_risks;
  std::vector<double> st_risks;
  double b_bar = 0.0;
  double pi1 = 0.0;
  double mean_ratio = 0.0;
  double std_ratio = 0.0;  ///< NaN when n_rep = 1.
  std::optional<double> pi2;  ///< empty when std_ratio is 0 or undefined.
  std::optional<std::pair<double, double>> ci95;
  Pi2Scale pi2_scale = Pi2Scale::Replicates;
};

/// Fills the summary statistics of a report from its ratios.
inline void summarize_report(ExperimentReport& r) {
  const auto n = static_cast<long>(r.ratios.size());
  if (n == 0) throw DomainError("experiment report has no replicates");
  long below = 0;
  for (double x : r.ratios) below += x < 1.0 ? 1 : 0;
  r.b_bar = static_cast<double>(below) / static_cast<double>(n);
  r.pi1 = pvalue_pi1(r.b_bar, n);
  const auto s = summarize(r.ratios);
  r.mean_ratio = s.mean;
  r.std_ratio = s.std;
  r.ci95 = ci95(s, n);
  r.pi2.reset();
  if (std::isfinite(s.std) && s.std > 0.0) {
    const double scale = r.pi2_scale == Pi2Scale::Replicates ? static_cast<double>(n)
                                                             : static_cast<double>(r.spec.n);
    r.pi2 = pvalue_pi2(s.mean, s.std, scale);
  }
}

inline ExperimentReport run_experiment(const ScenarioSpec& spec, double sigma2, long n_rep,
                                       const ExperimentOptions& opt = {}) {
  spec.require_valid();
  if (!(sigma2 > 0.0)) throw ConfigError("invalid experiment parameters: sigma2");
  if (n_rep < 1) throw ConfigError("invalid experiment parameters: replicates");

  struct Replicate {
    std::uint64_t seed;
    double mt;
    double st;
  };
  auto results = parallel_map(static_cast<std::size_t>(n_rep), opt.jobs, [&](std::size_t i) {
    ScenarioSpec rep = spec;
    rep.seed = derive_seed(spec.seed, i);
    try {
      const auto inst = generate(rep);
      const auto res = compare_oracles(inst.spectrum, inst.tasks, sigma2, opt.minimize);
      return Replicate{rep.seed, res.mt_risk, res.st_risk};
    } catch (const std::exception& e) {
      throw Error("replicate " + std::to_string(i) + " failed: " + e.what());
    }
  });

  ExperimentReport r;
  r.spec = spec;
  r.sigma2 = sigma2;
  r.n_rep = n_rep;
  r.pi2_scale = opt.pi2_scale;
  for (const auto& x : results) {
    r.replicate_seeds.push_back(x.seed);
    r.mt_risks.push_back(x.mt);
    r.st_risks.push_back(x.st);
    r.ratios.push_back(x.mt / x.st);
  }
  summarize_report(r);
  return r;
}

/// One experiment per (beta_or_m, C2), beta_or_m outer, C2 inner.
inline std::vector<ExperimentReport> run_table(const ScenarioSpec& base, const std::vector<double>& c2_values,
                                               const std::vector<double>& beta_values, double sigma2,
                                               long n_rep, const ExperimentOptions& opt = {}) {
  if (c2_values.empty() || beta_values.empty()) throw ConfigError("invalid table parameters: empty grid");
  std::vector<ExperimentReport> rows;
  for (double b : beta_values) {
    for (double c2 : c2_values) {
      ScenarioSpec s = base;
      s.beta_or_m = b;
      s.c2 = c2;
      rows.push_back(run_experiment(s, sigma2, n_rep, opt));
    }
  }
  return rows;
}

struct HeatmapGrid {
  std::vector<double> c2_values;      ///< rows
  std::vector<double> delta2_values;  ///< columns
  std::vector<ExperimentReport> cells;  ///< row-major
};

inline HeatmapGrid run_heatmap(const ScenarioSpec& base, const std::vector<double>& c2_values,
                               const std::vector<double>& delta2_values, double sigma2, long n_rep,
                               const ExperimentOptions& opt = {}) {
  if (c2_values.empty() || delta2_values.empty()) throw ConfigError("invalid heatmap parameters: empty grid");
  HeatmapGrid g{c2_values, delta2_values, {}};
  for (double c2 : c2_values) {
    for (double d2 : delta2_values) {
      ScenarioSpec s = base;
      s.c2 = c2;
      s.delta2 = d2;
      g.cells.push_back(run_experiment(s, sigma2, n_rep, opt));
    }
  }
  return g;
}

}  // namespace mtkrr
