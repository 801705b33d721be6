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
#include <gtest/gtest.h>

#include <random>

#include "mtkrr/oracle.hpp"
#include "mtkrr/scenarios.hpp"
#include "oracles.hpp"

namespace mtkrr {
namespace {

ScenarioSpec cluster_spec(ScenarioKind kind, long n, long p, double c1, double c2, double beta = 2.0,
                          double delta = 2.0) {
  ScenarioSpec s;
  s.kind = kind;
  s.n = n;
  s.p = p;
  s.c1 = c1;
  s.c2 = c2;
  s.beta_or_m = beta;
  s.delta1 = delta;
  return s;
}

std::vector<double> to_vec(const Vector& v) { return {v.data(), v.data() + v.size()}; }

TEST(OracleMultitask, EqualTasksNeedNoVarianceTerm) {
  const auto inst = generate(cluster_spec(ScenarioKind::H2Points, 40, 4, 1.0, 0.0));
  const auto prof = mean_variance_profile(inst.tasks);
  const auto mt = oracle_multitask(inst.spectrum, prof, 1.0, 4);
  EXPECT_TRUE(std::isinf(mt.mu_star));
  EXPECT_EQ(mt.variance_min.value, 0.0);
  EXPECT_DOUBLE_EQ(mt.mt_risk, minimize_shrinkage(mean_part(inst.spectrum, prof, 1.0, 4)).value);
}

TEST(OracleMultitask, RiskEqualsSpectralRiskAtOptimum) {
  const auto inst = generate(cluster_spec(ScenarioKind::H1Out, 30, 5, 1.0, 0.3));
  const auto prof = mean_variance_profile(inst.tasks);
  const auto mt = oracle_multitask(inst.spectrum, prof, 1.0, 5);
  EXPECT_NEAR(mt.mt_risk, risk_spectral(inst.spectrum, prof, mt.lambda_star, mt.mu_star, 1.0, 5).total, 1e-10);
}

TEST(OracleMultitask, WithinRateBounds) {
  for (long n : {50L, 200L, 800L}) {
    const auto inst = generate(cluster_spec(ScenarioKind::H2Points, n, 2, 1.0, 1.0));
    const auto mt = oracle_multitask(inst.spectrum, mean_variance_profile(inst.tasks), 1.0, 2);
    EXPECT_LE(mt.mt_risk, mt_theory_upper(n, 2, 1.0, 2.0, 2.0, 1.0, 1.0));
    EXPECT_GE(mt.mt_risk, mt_theory_lower(n, 2, 1.0, 2.0, 2.0, 1.0, 1.0));
  }
}

TEST(OracleMultitask, NoGridPointDoesBetter) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 6; ++rep) {
    const auto kind = rep % 2 ? ScenarioKind::H1Out : ScenarioKind::H2Points;
    const auto inst = generate(cluster_spec(kind, 20 + 10 * rep, 2 + 2 * (rep % 3), 0.2 + u(gen), 2 * u(gen),
                                            1.0 + 2 * u(gen), 0.8 + u(gen)));
    const int p = static_cast<int>(inst.tasks.p());
    const auto prof = mean_variance_profile(inst.tasks);
    const auto mt = oracle_multitask(inst.spectrum, prof, 1.0, p);
    const auto g = to_vec(inst.spectrum.gamma()), m = to_vec(prof.mu), v = to_vec(prof.varsigma2);
    double best = kInf;
    const auto grid = oracle::log_grid(1e-10, 1e4, 200);
    for (double l : grid)
      for (double mu : grid) best = std::min(best, oracle::spectral_risk(g, m, v, l, mu, 1.0, p));
    EXPECT_LE(mt.mt_risk, best * (1 + 1e-7)) << rep;
  }
}

TEST(OracleMultitask, LambdaIgnoresVarianceProfile) {
  const auto inst = generate(cluster_spec(ScenarioKind::H2Points, 40, 4, 1.0, 0.5));
  auto prof = mean_variance_profile(inst.tasks);
  const auto a = oracle_multitask(inst.spectrum, prof, 1.0, 4);
  prof.varsigma2 *= 7.0;
  prof.varsigma2[3] += 2.0;
  const auto b = oracle_multitask(inst.spectrum, prof, 1.0, 4);
  EXPECT_EQ(a.lambda_star, b.lambda_star);
  EXPECT_NE(a.mu_star, b.mu_star);
}

TEST(OracleSingletask, SingleTaskMatchesTemplateRisk) {
  const auto inst = generate(cluster_spec(ScenarioKind::H2Points, 50, 2, 1.0, 0.0));
  const auto tasks = TaskEnsemble(inst.tasks.h().col(0));
  const auto st = oracle_singletask(inst.spectrum, tasks, 1.0);
  const auto rep = minimize_risk(RiskParams{50, 1, 1.0, 2.0, 2.0, 1.0});
  EXPECT_NEAR(st.st_risk, rep.r_star, 1e-12 * rep.r_star);
  const auto mt = oracle_multitask(inst.spectrum, mean_variance_profile(tasks), 1.0, 1);
  EXPECT_NEAR(st.st_risk, mt.mt_risk, 1e-12 * mt.mt_risk);
}

TEST(OracleSingletask, EqualTasksShareLambda) {
  const auto inst = generate(cluster_spec(ScenarioKind::H2Points, 30, 4, 2.0, 0.0));
  const auto st = oracle_singletask(inst.spectrum, inst.tasks, 1.0);
  for (double l : st.st_lambdas) EXPECT_EQ(l, st.st_lambdas.front());
  EXPECT_DOUBLE_EQ(st.st_risk, st.per_task_risks.front());
}

TEST(OracleSingletask, TwoClusterAmplitudes) {
  const auto inst = generate(cluster_spec(ScenarioKind::H2Points, 50, 4, 1.0, 0.25));
  const auto st = oracle_singletask(inst.spectrum, inst.tasks, 1.0);
  const double plus = minimize_risk(RiskParams{50, 1, 1.0, 2.0, 2.0, 1.5 * 1.5}).r_star;
  const double minus = minimize_risk(RiskParams{50, 1, 1.0, 2.0, 2.0, 0.5 * 0.5}).r_star;
  EXPECT_NEAR(st.per_task_risks[0], plus, 1e-12 * plus);
  EXPECT_NEAR(st.per_task_risks[1], plus, 1e-12 * plus);
  EXPECT_NEAR(st.per_task_risks[2], minus, 1e-12 * minus);
  EXPECT_NEAR(st.per_task_risks[3], minus, 1e-12 * minus);
  EXPECT_NEAR(st.st_risk, (plus + minus) / 2, 1e-12);
}

TEST(RhoFormula, TwoPointsAnchors) {
  EXPECT_NEAR(rho_formula_2points(4, 2.0, 0.0), std::pow(4.0, -0.75) / 2.0, 1e-15);
  EXPECT_NEAR(rho_formula_2points(4, 2.0, 0.0), 0.17678, 1e-5);
  EXPECT_THROW(rho_formula_2points(5, 2.0, 0.0), DomainError);
  const double at1 = rho_formula_2points(4, 2.0, 1.0);
  EXPECT_NEAR(at1, (std::pow(4.0, -0.75) + std::pow(0.75, 0.75)) / std::pow(2.0, 0.5), 1e-15);
  EXPECT_NEAR(rho_formula_2points(4, 2.0, 1.0 - 1e-9), at1, 1e-4);
  EXPECT_NEAR(rho_formula_2points(4, 2.0, 1.0 + 1e-9), at1, 1e-4);
}

TEST(RhoFormula, TwoPointsBelowHalfAwayFromUnitRatio) {
  for (int p : {2, 4, 10}) {
    for (double r : oracle::log_grid(1e-8, 1e6, 2000)) {
      const double v = rho_formula_2points(p, 2.0, r);
      EXPECT_LT(v, 1.0);
      if (r < 0.05 || r > 40.0) {
        EXPECT_LE(v, 0.5) << p << " " << r;
      }
    }
  }
}

TEST(RhoFormula, TwoPointsPeaksAboveHalfNearUnitRatio) {
  // The |1 - sqrt(r)| term vanishes at r = 1, which lifts the value to about 0.82.
  for (int p : {2, 4, 10}) {
    const double at1 = rho_formula_2points(p, 2.0, 1.0);
    EXPECT_GT(at1, 0.75);
    EXPECT_GT(at1, rho_formula_2points(p, 2.0, 0.9));
    EXPECT_GT(at1, rho_formula_2points(p, 2.0, 1.1));
  }
}

TEST(RhoFormula, OneOutAnchors) {
  for (int p : {2, 5, 50}) EXPECT_NEAR(rho_formula_1out(p, 2.0, 0.0), std::pow(p, -0.75), 1e-15);
  EXPECT_GT(rho_formula_1out(50, 2.0, 1e6), 1.0);
  const double r = 0.25;  // 1/(p-1) with p = 5
  const double num = std::pow(5.0, -0.75) + std::pow(0.8, 0.75) * std::pow(r, 0.25);
  const double den = 0.8 * std::pow(1.0 + std::sqrt(r / 4.0), 0.5);
  EXPECT_NEAR(rho_formula_1out(5, 2.0, r), num / den, 1e-14);
}

TEST(RhoFormula, TwoTasksSettingsCoincide) {
  for (double r : {0.0, 0.3, 1.0, 7.0})
    EXPECT_NEAR(rho_formula_1out(2, 2.0, r), 2.0 * rho_formula_2points(2, 2.0, r), 1e-14);
}

TEST(RatioConsistency, MeasuredRhoTracksFormula) {
  for (double r : {0.01, 0.1, 1.0, 10.0}) {
    const auto inst = generate(cluster_spec(ScenarioKind::H2Points, 50, 4, 1.0, r));
    const double measured = compare_oracles(inst.spectrum, inst.tasks, 1.0).rho;
    const double formula = rho_formula_2points(4, 2.0, r);
    EXPECT_LE(measured / formula, 3.0) << r;
    EXPECT_GE(measured / formula, 1.0 / 3.0) << r;
    if (r != 1.0) {
      EXPECT_LE(measured, 0.5 * 3.0) << r;
    }
  }
}

TEST(RatioConsistency, UnitRatioExceedsHalfCapSlack) {
  // At r = 1 the second cluster is identically zero, so its single-task oracle
  // risk vanishes and the measured ratio exceeds 1.5.
  const auto inst = generate(cluster_spec(ScenarioKind::H2Points, 50, 4, 1.0, 1.0));
  const auto res = compare_oracles(inst.spectrum, inst.tasks, 1.0);
  EXPECT_EQ(res.per_task_risks[3], 0.0);
  EXPECT_GT(res.rho, 1.5);
}

TEST(DfBias, Limits) {
  const auto s = synth_spectrum(20, 2.0);
  const Vector h = Vector::LinSpaced(20, 1.0, 2.0);
  const auto zero = df_and_bias(s, h, 0.0);
  EXPECT_NEAR(zero.df, 20.0, 1e-12);
  EXPECT_EQ(zero.b, 0.0);
  const auto big = df_and_bias(s, h, 1e14);
  EXPECT_LT(big.df, 1e-12);
  EXPECT_NEAR(big.b, h.squaredNorm() / 20.0, 1e-10);
  const auto mid = df_and_bias(s, h, 0.01);
  EXPECT_NEAR(mid.b, risk_single_task(s, h, 0.01, 1.0).bias, 1e-14);
}

TEST(DfBias, HdfWitnessExists) {
  for (long n : {100L, 400L}) {
    const auto inst = generate(cluster_spec(ScenarioKind::H2Points, n, 2, 1.0, 0.0));
    const Vector h = inst.tasks.task(0);
    const auto w = hdf_witness(inst.spectrum, h, 1.0);
    EXPECT_TRUE(w.found) << n;
    EXPECT_LE(w.df, std::sqrt(n));
    EXPECT_LE(w.b, std::sqrt(std::log(n) / n));
    const auto check = df_and_bias(inst.spectrum, h, w.lambda);
    EXPECT_EQ(check.df, w.df);
  }
}

TEST(HmBound, PureNoiseTermAndMonotonicity) {
  const double ln = std::log(1000.0);
  EXPECT_NEAR(hm_bound_rhs(1000, 3, 2.0, 2.0, 0.0, 0.0), 2.0 * 16.0 * 3 * ln * ln * ln / 1000.0, 1e-12);
  double prev = 0.0;
  for (double theta : {2.0, 2.5, 3.0, 5.0}) {
    const double v = hm_bound_rhs(1000, 3, 2.0, theta, 0.01, 0.0);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_THROW(hm_bound_rhs(2, 1, 1.0, 2.0, 0.0, 0.0), DomainError);
  EXPECT_THROW(hm_bound_rhs(10, 1, 1.0, 1.0, 0.0, 0.0), DomainError);
}

TEST(PluginRatio, MatchesDirectEvaluation) {
  const long n = 10000;
  const auto c = task_amplitudes(TaskSetting::TwoPoints, 2, 1.0, 0.01);
  EXPECT_NEAR(c[0], 1.21, 1e-12);
  EXPECT_NEAR(c[1], 0.81, 1e-12);
  const double rho = rho_formula_2points(2, 2.0, 0.01);
  const double ln = std::log(10000.0);
  const double zeta4 = std::pow(std::numbers::pi, 4) / 90.0;
  const double num = 16.0 * 2 * ln * ln * ln / n + 2 * zeta4 / n * (1.21 + 0.81) / 2;
  const double den = std::pow(n, -0.75) * oracle::kappa_gamma(2.0, 2.0) * (std::pow(1.21, 0.25) + std::pow(0.81, 0.25)) / 2;
  const double want = (1 + 1 / ln) * (1 + 1 / ln) * rho + num / den;
  EXPECT_LT(oracle::rel_err(plugin_ratio_bound(n, 1.0, 2.0, 2.0, 2.0, rho, c), want), 1e-9);
  // The noise term dominates at this n.
  EXPECT_GT(want, 1.0);
}

TEST(PluginRatio, DropsBelowOneForLargeN) {
  const auto c = task_amplitudes(TaskSetting::TwoPoints, 2, 1.0, 0.01);
  const double rho = rho_formula_2points(2, 2.0, 0.01);
  EXPECT_LT(plugin_ratio_bound(1e40, 1.0, 2.0, 2.0, 2.0, rho, c), 1.0);
}

TEST(TheoryApprox, SingleTaskApproximationTracksMeasured) {
  for (double r : {0.01, 0.1, 10.0}) {
    const auto inst = generate(cluster_spec(ScenarioKind::H1Out, 200, 5, 1.0, r));
    const auto res = compare_oracles(inst.spectrum, inst.tasks, 1.0);
    const double approx = st_theory_approx(TaskSetting::OneOut, 200, 5, 1.0, 2.0, 2.0, 1.0, r);
    EXPECT_LT(res.st_risk / approx, 3.0);
    EXPECT_GT(res.st_risk / approx, 1.0 / 3.0);
  }
}

}  // namespace
}  // namespace mtkrr
