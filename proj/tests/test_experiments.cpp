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

#include <boost/math/distributions/normal.hpp>
#include <sstream>

#include "mtkrr/experiments.hpp"
#include "mtkrr/report_io.hpp"

namespace mtkrr {
namespace {

ScenarioSpec setting_a(double c2, long n = 50, long p = 5) {
  ScenarioSpec s;
  s.kind = ScenarioKind::SettingA;
  s.n = n;
  s.p = p;
  s.c1 = 1.0;
  s.c2 = c2;
  s.beta_or_m = 2.0;
  s.delta1 = 2.0;
  s.seed = 2026;
  return s;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

TEST(PValues, Pi1Examples) {
  EXPECT_EQ(pvalue_pi1(0.5, 100), 1.0);
  EXPECT_NEAR(pvalue_pi1(1.0, 100), std::exp(-50.0), 1e-30);
  EXPECT_LT(pvalue_pi1(1.0, 100), 1e-15);
  EXPECT_EQ(pvalue_pi1(0.4, 100), 0.0);
  EXPECT_THROW(pvalue_pi1(1.2, 100), DomainError);
}

TEST(PValues, Pi2Examples) {
  EXPECT_EQ(pvalue_pi2(1.0, 0.3, 100), 0.5);
  EXPECT_LT(pvalue_pi2(0.434, 0.0324, 100), 1e-15);
  const double v = pvalue_pi2(1.01, 0.129, 100);
  EXPECT_NEAR(v, boost::math::cdf(boost::math::normal(), 10 * 0.01 / 0.129), 1e-12);
  EXPECT_NEAR(v, 0.773, 0.01);
  EXPECT_THROW(pvalue_pi2(0.9, 0.0, 100), DomainError);
}

TEST(Stats, SampleStdAndInterval) {
  const auto s = summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_NEAR(kZ975, boost::math::quantile(boost::math::normal(), 0.975), 1e-12);
  const auto ci = ci95(s, 4);
  ASSERT_TRUE(ci);
  EXPECT_NEAR(ci->second - s.mean, 1.959964 / 2.0 * s.std, 1e-6);
  EXPECT_NEAR(s.mean - ci->first, ci->second - s.mean, 1e-15);
  EXPECT_TRUE(std::isnan(summarize({3.0}).std));
  EXPECT_FALSE(ci95(summarize({3.0}), 1));
  EXPECT_THROW(summarize({}), DomainError);
}

TEST(Experiment, IdenticalTasksGiveConstantRatio) {
  const auto r = run_experiment(setting_a(0.0), 1.0, 8);
  for (double x : r.ratios) EXPECT_EQ(x, r.ratios.front());
  EXPECT_LT(r.mean_ratio, 1.0);
  EXPECT_EQ(r.b_bar, 1.0);
  EXPECT_EQ(r.std_ratio, 0.0);
  EXPECT_FALSE(r.pi2);
}

TEST(Experiment, SingleReplicate) {
  const auto r = run_experiment(setting_a(0.5), 1.0, 1);
  EXPECT_EQ(r.ratios.size(), 1u);
  EXPECT_TRUE(std::isnan(r.std_ratio));
  EXPECT_FALSE(r.pi2);
  EXPECT_FALSE(r.ci95);
}

TEST(Experiment, ReplicatesMatchDirectComputation) {
  const auto spec = setting_a(0.5, 30, 4);
  const auto r = run_experiment(spec, 1.0, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    ScenarioSpec rep = spec;
    rep.seed = derive_seed(spec.seed, i);
    EXPECT_EQ(r.replicate_seeds[i], rep.seed);
    const auto inst = generate(rep);
    const auto res = compare_oracles(inst.spectrum, inst.tasks, 1.0);
    EXPECT_EQ(r.mt_risks[i], res.mt_risk);
    EXPECT_EQ(r.st_risks[i], res.st_risk);
    EXPECT_EQ(r.ratios[i], res.mt_risk / res.st_risk);
  }
}

TEST(Experiment, SummaryIdentities) {
  const auto r = run_experiment(setting_a(1.0), 1.0, 20);
  double below = 0.0, mean = 0.0, ss = 0.0;
  for (double x : r.ratios) {
    below += x < 1.0;
    mean += x / 20.0;
  }
  for (double x : r.ratios) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / 19.0);
  EXPECT_EQ(r.b_bar, below / 20.0);
  EXPECT_EQ(r.pi1, r.b_bar < 0.5 ? 0.0 : std::exp(-40.0 * (r.b_bar - 0.5) * (r.b_bar - 0.5)));
  EXPECT_NEAR(r.mean_ratio, mean, 1e-14);
  EXPECT_NEAR(r.std_ratio, sd, 1e-14);
  ASSERT_TRUE(r.pi2);
  EXPECT_NEAR(*r.pi2, 0.5 * std::erfc(-std::sqrt(20.0) * (mean - 1.0) / sd / std::sqrt(2.0)), 1e-12);
  ASSERT_TRUE(r.ci95);
  EXPECT_NEAR(r.ci95->first, mean - 1.959964 * sd / std::sqrt(20.0), 1e-6);
}

TEST(Experiment, Pi2CanUseSampleSize) {
  ExperimentOptions opt;
  opt.pi2_scale = Pi2Scale::SampleSize;
  const auto r = run_experiment(setting_a(1.0), 1.0, 10, opt);
  ASSERT_TRUE(r.pi2);
  EXPECT_NEAR(*r.pi2, pvalue_pi2(r.mean_ratio, r.std_ratio, 50.0), 1e-15);
  EXPECT_EQ(to_json(r)["pi2_scale"], "n");
}

TEST(Experiment, ReproducibleAcrossThreadCounts) {
  ExperimentOptions one, many;
  one.jobs = 1;
  many.jobs = 3;
  const auto a = run_experiment(setting_a(0.1), 1.0, 7, one);
  const auto b = run_experiment(setting_a(0.1), 1.0, 7, many);
  EXPECT_EQ(a.ratios, b.ratios);
  EXPECT_EQ(dump(to_json(a)), dump(to_json(b)));
  auto other = setting_a(0.1);
  other.seed = 2027;
  EXPECT_NE(run_experiment(other, 1.0, 7, one).ratios, a.ratios);
}

TEST(Experiment, RejectsBadParameters) {
  EXPECT_THROW(run_experiment(setting_a(0.1), 0.0, 3), ConfigError);
  EXPECT_THROW(run_experiment(setting_a(0.1), 1.0, 0), ConfigError);
  EXPECT_THROW(run_experiment(setting_a(-1.0), 1.0, 3), ConfigError);
}

TEST(Table, RowsAndHeader) {
  const auto one = run_experiment(setting_a(0.5, 20, 3), 1.0, 3);
  const auto csv = lines(table_csv({one}));
  ASSERT_EQ(csv.size(), 2u);
  EXPECT_EQ(csv[0], "C2,r,beta_or_m,b_bar,pi1,mean_ratio,std_ratio,pi2");
  EXPECT_EQ(csv[1].rfind("0.5,0.5,2,", 0), 0u);
  EXPECT_THROW(table_csv({}), ConfigError);
  const auto other = run_experiment(setting_a(0.5, 20, 4), 1.0, 3);
  EXPECT_THROW(table_csv({one, other}), ConfigError);
}

TEST(Table, OrderIsBetaThenC2) {
  const auto rows = run_table(setting_a(0.0, 20, 3), {0.1, 1.0}, {2.0, 4.0}, 1.0, 2);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].spec.beta_or_m, 2.0);
  EXPECT_EQ(rows[0].spec.c2, 0.1);
  EXPECT_EQ(rows[1].spec.c2, 1.0);
  EXPECT_EQ(rows[2].spec.beta_or_m, 4.0);
  EXPECT_EQ(lines(table_csv(rows)).size(), 5u);
}

TEST(Heatmap, FiveByFiveGrid) {
  ScenarioSpec base = setting_a(1.0, 20, 3);
  base.kind = ScenarioKind::SettingC;
  base.delta2 = 2.0;
  const std::vector<double> c2 = {0.01, 0.1, 1, 10, 100}, d2 = {1, 1.5, 2, 3, 4};
  const auto g = run_heatmap(base, c2, d2, 1.0, 3);
  ASSERT_EQ(g.cells.size(), 25u);
  for (const auto& c : g.cells) {
    EXPECT_TRUE(std::isfinite(c.mean_ratio));
    ASSERT_TRUE(c.ci95);
  }
  EXPECT_EQ(g.cells[7].spec.c2, 0.1);
  EXPECT_EQ(g.cells[7].spec.delta2, 2.0);
  const auto csv = lines(heatmap_csv(g));
  ASSERT_EQ(csv.size(), 26u);
  EXPECT_EQ(csv[0], "C2,delta2,mean_ratio,std_ratio,ci_low,ci_high,ci_half_width");
  const auto svg = heatmap_svg(g, "Setting C");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t rects = 0;
  for (std::size_t pos = 0; (pos = svg.find("<rect", pos)) != std::string::npos; ++pos) ++rects;
  EXPECT_EQ(rects, 25u);
  HeatmapGrid broken = g;
  broken.cells.pop_back();
  EXPECT_THROW(heatmap_csv(broken), ConfigError);
}

TEST(ReportJson, CarriesSeedsAndNulls) {
  const auto r = run_experiment(setting_a(0.0, 20, 3), 1.0, 2);
  const auto j = to_json(r);
  EXPECT_EQ(j["replicate_seeds"][1], std::to_string(derive_seed(2026, 1)));
  EXPECT_TRUE(j["pi2"].is_null());
  EXPECT_EQ(j["ratios"].size(), 2u);
  EXPECT_EQ(j["spec"]["scenario"], "SETTING_A");
}

}  // namespace
}  // namespace mtkrr
