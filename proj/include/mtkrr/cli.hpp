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
// Command-line front end. `run` parses arguments, validates every parameter
// up front, runs one subcommand and writes its artifacts to the named files.
#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mtkrr/error.hpp"
#include "mtkrr/experiments.hpp"
#include "mtkrr/format.hpp"
#include "mtkrr/oracle.hpp"
#include "mtkrr/report_io.hpp"
#include "mtkrr/risk_function.hpp"
#include "mtkrr/scenarios.hpp"

namespace mtkrr::cli {

enum ExitCode : int { kOk = 0, kError = 1, kBoundViolation = 2 };

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << content;
  out.close();
  if (!out) throw Error("failed writing " + path);
}

/// Collects the names of offending keys so they can be reported together.
class Validator {
 public:
  void require(bool ok, const std::string& key) {
    if (!ok) bad_.push_back(key);
  }
  void add(const std::vector<std::string>& keys) { bad_.insert(bad_.end(), keys.begin(), keys.end()); }
  void throw_if_bad() const {
    if (bad_.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& k : bad_) msg += " " + k;
    throw ConfigError(msg);
  }

 private:
  std::vector<std::string> bad_;
};

struct ScenarioFlags {
  std::string scenario = "SETTING_A";
  long n = 50;
  long p = 5;
  double c1 = 1.0;
  double c2 = 0.0;
  double delta = 2.0;
  double delta2 = std::numeric_limits<double>::quiet_NaN();
  double beta_or_m = 2.0;
  std::uint64_t seed = 1;
  double kernel_offset = 0.0;
  double cluster_amplitude = 1.0;
  CLI::Option* delta2_opt = nullptr;
  bool delta2_from_grid = false;

  void add_to(CLI::App* app) {
    app->add_option("--scenario", scenario,
                    "H2POINTS, H1OUT, SETTING_A, SETTING_B, SETTING_C or SETTING_D")
        ->capture_default_str();
    app->add_option("--n", n, "sample size")->capture_default_str();
    app->add_option("--p", p, "number of tasks")->capture_default_str();
    app->add_option("--c1", c1, "mean amplitude C1")->capture_default_str();
    app->add_option("--c2", c2, "variance / outlier amplitude C2")->capture_default_str();
    app->add_option("--delta", delta, "signal decay delta (delta1 in settings C and D)")
        ->capture_default_str();
    delta2_opt = app->add_option("--delta2", delta2, "variance / outlier decay (settings C and D)");
    app->add_option("--beta-or-m", beta_or_m, "spectral decay beta, or spline order m (setting B)")
        ->capture_default_str();
    app->add_option("--seed", seed, "master seed")->capture_default_str();
    app->add_option("--kernel-offset", kernel_offset, "constant added to the setting B kernel")
        ->capture_default_str();
    app->add_option("--cluster-amplitude", cluster_amplitude, "setting D cluster multiplier")
        ->capture_default_str();
  }

  ScenarioSpec to_spec(Validator& v) const {
    ScenarioSpec s;
    const auto kind = parse_scenario_kind(scenario);
    v.require(kind.has_value(), "scenario");
    s.kind = kind.value_or(ScenarioKind::SettingA);
    s.n = n;
    s.p = p;
    s.c1 = c1;
    s.c2 = c2;
    s.delta1 = delta;
    if (delta2_from_grid || (delta2_opt && delta2_opt->count() > 0)) s.delta2 = delta2;
    s.beta_or_m = beta_or_m;
    s.seed = seed;
    s.kernel_offset = kernel_offset;
    s.cluster_amplitude = cluster_amplitude;
    if (kind) v.add(s.validate());
    return s;
  }
};

struct RiskFlags {
  long n = 50;
  long p = 1;
  double sigma2 = 1.0;
  double beta = 2.0;
  double delta = 2.0;
  double c = 1.0;

  void add_to(CLI::App* app) {
    app->add_option("--n", n, "sample size")->capture_default_str();
    app->add_option("--p", p, "number of tasks")->capture_default_str();
    app->add_option("--sigma2", sigma2, "noise variance")->capture_default_str();
    app->add_option("--beta", beta, "spectral decay beta")->capture_default_str();
    app->add_option("--delta", delta, "signal decay delta")->capture_default_str();
    app->add_option("--c", c, "signal amplitude C")->capture_default_str();
  }

  RiskParams to_params(Validator& v) const {
    v.require(n >= 1, "n");
    v.require(p >= 1, "p");
    v.require(sigma2 > 0.0 && std::isfinite(sigma2), "sigma2");
    v.require(beta > 0.0 && std::isfinite(beta), "beta");
    v.require(delta > 0.0 && std::isfinite(delta), "delta");
    v.require(c >= 0.0 && std::isfinite(c), "c");
    return {n, p, sigma2, beta, delta, c};
  }
};

/// Parses "b:d" pairs.
inline bool parse_pair(const std::string& s, double& a, double& b) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return false;
  return parse_number(s.substr(0, colon), a) && parse_number(s.substr(colon + 1), b);
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    g[static_cast<std::size_t>(k)] =
        points == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (points - 1));
  }
  return g;
}

struct VerifyCell {
  RiskParams params;
  BoundReport report;
  bool upper_ok = true;
  bool cap_ok = true;
  bool lower_checked = false;
  bool lower_ok = true;
  bool s1_ok = true;
  bool s2_ok = true;
};

/// Bound checks for one parameter cell.
inline VerifyCell verify_cell(const RiskParams& params, double lower_threshold,
                              const std::vector<double>& bound_lambdas) {
  VerifyCell cell{params, minimize_risk(params)};
  const auto& rep = cell.report;
  cell.upper_ok = rep.r_star <= rep.upper * (1.0 + 1e-8);
  if (rep.epsilon_cap) cell.cap_ok = rep.lambda_star <= *rep.epsilon_cap;
  if (rep.lower && params.snr_scale() >= lower_threshold) {
    cell.lower_checked = true;
    cell.lower_ok = rep.r_star >= *rep.lower;
  }
  const double i2 = integral_i2(params.beta);
  const bool s1_defined = 4.0 * params.beta > 2.0 * params.delta && params.satisfies_hm();
  const double i1 = s1_defined ? integral_i1(params.beta, params.delta) : 0.0;
  for (double l : bound_lambdas) {
    const double b2 = std::pow(l, -1.0 / (2.0 * params.beta)) / (2.0 * params.beta) * i2;
    cell.s2_ok = cell.s2_ok && s2(params, l) <= b2 * (1.0 + 1e-12);
    if (s1_defined) {
      const double b1 = std::pow(l, (2.0 * params.delta - 1.0) / (2.0 * params.beta)) /
                        (params.beta * l * l) * i1;
      cell.s1_ok = cell.s1_ok && s1(params, l) <= b1 * (1.0 + 1e-12);
    }
  }
  return cell;
}

inline std::string bool_cell(bool b) { return b ? "pass" : "FAIL"; }

/// Entry point shared by the binary and the tests. Logs go to `log`, errors to `err`.
inline int run(int argc, const char* const* argv, std::ostream& log = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Multi-task kernel ridge regression: oracle risks, bounds and simulations", "mtkrr"};
  app.set_config("--config", "", "INI file; one [section] per subcommand");
  app.allow_config_extras(false);
  app.require_subcommand(1);
  unsigned jobs = default_jobs();
  app.add_option("--jobs", jobs, "worker threads for replicates")->capture_default_str();

  // risk-curve
  auto* curve = app.add_subcommand("risk-curve", "tabulate R(lambda) with its bias and variance");
  RiskFlags curve_p;
  curve_p.add_to(curve);
  double lambda_min = 1e-8, lambda_max = 10.0;
  int points = 200;
  std::string curve_out;
  curve->add_option("--lambda-min", lambda_min, "smallest positive lambda")->capture_default_str();
  curve->add_option("--lambda-max", lambda_max, "largest lambda")->capture_default_str();
  curve->add_option("--points", points, "log-spaced grid size")->capture_default_str();
  curve->add_option("--out", curve_out, "CSV output path")->required();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "multi-task vs single-task oracle for one instance");
  ScenarioFlags oracle_s;
  oracle_s.add_to(oracle);
  double oracle_sigma2 = 1.0;
  std::string oracle_out;
  oracle->add_option("--sigma2", oracle_sigma2, "noise variance")->capture_default_str();
  oracle->add_option("--out", oracle_out, "JSON output path")->required();

  // verify-bounds
  auto* verify = app.add_subcommand("verify-bounds", "check the risk bounds on a parameter grid");
  std::vector<long> v_n = {50, 200, 800};
  std::vector<long> v_p = {1, 2, 5, 10};
  std::vector<double> v_c = {0.5, 1.0, 2.0};
  std::vector<std::string> v_bd = {"2:2", "4:2", "2:1.5"};
  double v_sigma2 = 1.0, v_threshold = 200.0;
  std::string verify_out;
  verify->add_option("--n-values", v_n, "sample sizes")->delimiter(',')->capture_default_str();
  verify->add_option("--p-values", v_p, "task counts")->delimiter(',')->capture_default_str();
  verify->add_option("--c-values", v_c, "signal amplitudes")->delimiter(',')->capture_default_str();
  verify->add_option("--beta-delta", v_bd, "beta:delta pairs")->delimiter(',')->capture_default_str();
  verify->add_option("--sigma2", v_sigma2, "noise variance")->capture_default_str();
  verify->add_option("--lower-threshold", v_threshold, "check the lower bound when np/sigma2 >= this")
      ->capture_default_str();
  verify->add_option("--out", verify_out, "CSV output path")->required();

  // experiment / table / heatmap share the scenario flags and Monte Carlo settings.
  struct McFlags {
    double sigma2 = 1.0;
    long replicates = 100;
    std::string pi2_scale = "N";
    void add_to(CLI::App* a) {
      a->add_option("--sigma2", sigma2, "noise variance")->capture_default_str();
      a->add_option("--replicates", replicates, "number of replicates N")->capture_default_str();
      a->add_option("--pi2-scale", pi2_scale, "sqrt(N) or sqrt(n) in pi2: N or n")->capture_default_str();
    }
  };
  auto* experiment = app.add_subcommand("experiment", "replicated oracle comparison for one scenario");
  ScenarioFlags exp_s;
  McFlags exp_mc;
  exp_s.add_to(experiment);
  exp_mc.add_to(experiment);
  std::string exp_json, exp_csv;
  experiment->add_option("--out-json", exp_json, "JSON report path");
  experiment->add_option("--out-csv", exp_csv, "one-row table CSV path");

  auto* table = app.add_subcommand("table", "grid of experiments over C2 and beta (or m)");
  ScenarioFlags tab_s;
  McFlags tab_mc;
  tab_s.add_to(table);
  tab_mc.add_to(table);
  std::vector<double> tab_c2 = {0.01, 0.1, 0.5, 1, 5, 10, 100};
  std::vector<double> tab_beta = {2, 4};
  std::string tab_csv, tab_json;
  table->add_option("--c2-values", tab_c2, "C2 values")->delimiter(',')->capture_default_str();
  table->add_option("--beta-values", tab_beta, "beta (or m) values")->delimiter(',')->capture_default_str();
  table->add_option("--out-csv", tab_csv, "table CSV path")->required();
  table->add_option("--out-json", tab_json, "JSON reports path");

  auto* heatmap = app.add_subcommand("heatmap", "grid of experiments over C2 and delta2");
  ScenarioFlags heat_s;
  McFlags heat_mc;
  heat_s.add_to(heatmap);
  heat_mc.add_to(heatmap);
  std::vector<double> heat_c2 = {0.01, 0.1, 1, 10, 100};
  std::vector<double> heat_d2 = {1, 1.5, 2, 3, 4};
  std::string heat_csv, heat_svg, heat_json;
  heatmap->add_option("--c2-values", heat_c2, "C2 values (rows)")->delimiter(',')->capture_default_str();
  heatmap->add_option("--delta2-values", heat_d2, "delta2 values (columns)")->delimiter(',')->capture_default_str();
  heatmap->add_option("--out-csv", heat_csv, "cell CSV path")->required();
  heatmap->add_option("--out-svg", heat_svg, "SVG rendering path");
  heatmap->add_option("--out-json", heat_json, "JSON reports path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out_s, err_s;
    const int code = app.exit(e, out_s, err_s);
    log << out_s.str();
    err << err_s.str();
    return code == 0 ? kOk : kError;
  }

  auto mc_options = [&](const McFlags& mc, Validator& v) {
    ExperimentOptions o;
    v.require(jobs >= 1, "jobs");
    o.jobs = std::max(1u, jobs);
    v.require(mc.sigma2 > 0.0 && std::isfinite(mc.sigma2), "sigma2");
    v.require(mc.replicates >= 1, "replicates");
    v.require(mc.pi2_scale == "N" || mc.pi2_scale == "n", "pi2-scale");
    o.pi2_scale = mc.pi2_scale == "n" ? Pi2Scale::SampleSize : Pi2Scale::Replicates;
    return o;
  };

  try {
    if (curve->parsed()) {
      Validator v;
      const auto params = curve_p.to_params(v);
      v.require(lambda_min > 0.0 && std::isfinite(lambda_min), "lambda-min");
      v.require(lambda_max > lambda_min && std::isfinite(lambda_max), "lambda-max");
      v.require(points >= 1, "points");
      v.throw_if_bad();
      const auto f = template_risk(params);
      std::ostringstream os;
      os << "lambda,R,bias,variance\n";
      auto row = [&](double l) {
        const double b = f.bias(l), var = f.variance(l);
        os << format_number(l) << ',' << format_number(b + var) << ',' << format_number(b) << ','
           << format_number(var) << '\n';
      };
      row(0.0);
      for (double l : log_grid(lambda_min, lambda_max, points)) row(l);
      write_file(curve_out, os.str());
      log << "wrote " << curve_out << " (" << points + 1 << " rows)\n";
      return kOk;
    }

    if (oracle->parsed()) {
      Validator v;
      const auto spec = oracle_s.to_spec(v);
      v.require(oracle_sigma2 > 0.0 && std::isfinite(oracle_sigma2), "sigma2");
      v.throw_if_bad();
      const auto inst = generate(spec);
      const auto res = compare_oracles(inst.spectrum, inst.tasks, oracle_sigma2);
      Json j = to_json(res);
      j["spec"] = to_json(spec);
      j["sigma2"] = json_number(oracle_sigma2);
      write_file(oracle_out, dump(j));
      log << "rho = " << format_number(res.rho) << ", wrote " << oracle_out << "\n";
      return kOk;
    }

    if (verify->parsed()) {
      Validator v;
      v.require(!v_n.empty(), "n-values");
      for (long n : v_n) v.require(n >= 1, "n-values");
      v.require(!v_p.empty(), "p-values");
      for (long p : v_p) v.require(p >= 1, "p-values");
      v.require(!v_c.empty(), "c-values");
      for (double c : v_c) v.require(c >= 0.0 && std::isfinite(c), "c-values");
      std::vector<std::pair<double, double>> bd;
      for (const auto& s : v_bd) {
        double b = 0.0, d = 0.0;
        const bool ok = parse_pair(s, b, d) && b > 0.0 && d > 0.0 && 1.0 < 2.0 * d && 2.0 * d < 4.0 * b + 1.0;
        v.require(ok, "beta-delta");
        bd.emplace_back(b, d);
      }
      v.require(v_sigma2 > 0.0 && std::isfinite(v_sigma2), "sigma2");
      v.throw_if_bad();

      const auto bound_lambdas = log_grid(1e-8, 1e2, 41);
      std::ostringstream os;
      os << "n,p,c,beta,delta,r_star,lambda_star,upper,upper_check,epsilon_cap,cap_check,lower,"
            "lower_check,regime,s1_bound,s2_bound\n";
      int failures = 0, cells = 0;
      for (const auto& [beta, delta] : bd) {
        for (long n : v_n)
          for (long p : v_p)
            for (double c : v_c) {
              const auto cell = verify_cell({n, p, v_sigma2, beta, delta, c}, v_threshold, bound_lambdas);
              const auto& r = cell.report;
              ++cells;
              const bool ok = cell.upper_ok && cell.cap_ok && cell.lower_ok && cell.s1_ok && cell.s2_ok;
              failures += ok ? 0 : 1;
              os << n << ',' << p << ',' << format_number(c) << ',' << format_number(beta) << ','
                 << format_number(delta) << ',' << format_number(r.r_star) << ','
                 << format_number(r.lambda_star) << ',' << format_number(r.upper) << ','
                 << bool_cell(cell.upper_ok) << ','
                 << (r.epsilon_cap ? format_number(*r.epsilon_cap) : "") << ','
                 << (r.epsilon_cap ? bool_cell(cell.cap_ok) : "n/a") << ','
                 << (r.lower ? format_number(*r.lower) : "") << ','
                 << (cell.lower_checked ? bool_cell(cell.lower_ok) : "n/a") << ','
                 << to_string(r.regime) << ',' << bool_cell(cell.s1_ok) << ','
                 << bool_cell(cell.s2_ok) << '\n';
            }
        if (1.0 < 2.0 * delta && 2.0 * delta < 4.0 * beta) {
          const double a = alpha_constant(beta, delta);
          const double a_fine = alpha_constant(beta, delta, QuadratureOptions{1e-12});
          const bool ok = a > 0.0 && a < 1.0 && std::abs(a - a_fine) <= 1e-6;
          failures += ok ? 0 : 1;
          log << "alpha(" << format_number(beta) << ", " << format_number(delta)
              << ") = " << format_number(a) << (ok ? " pass" : " FAIL") << "\n";
        }
      }
      write_file(verify_out, os.str());
      log << cells << " cells, " << failures << " failures, wrote " << verify_out << "\n";
      return failures == 0 ? kOk : kBoundViolation;
    }

    if (experiment->parsed()) {
      Validator v;
      const auto spec = exp_s.to_spec(v);
      const auto opt = mc_options(exp_mc, v);
      v.require(!exp_json.empty() || !exp_csv.empty(), "out-json");
      v.throw_if_bad();
      const auto rep = run_experiment(spec, exp_mc.sigma2, exp_mc.replicates, opt);
      if (!exp_json.empty()) write_file(exp_json, dump(to_json(rep)));
      if (!exp_csv.empty()) write_file(exp_csv, table_csv({rep}));
      log << "mean ratio " << format_number(rep.mean_ratio) << " over " << rep.n_rep << " replicates\n";
      return kOk;
    }

    if (table->parsed()) {
      Validator v;
      const auto spec = tab_s.to_spec(v);
      const auto opt = mc_options(tab_mc, v);
      v.require(!tab_c2.empty(), "c2-values");
      for (double c2 : tab_c2) v.require(c2 >= 0.0 && std::isfinite(c2), "c2-values");
      v.require(!tab_beta.empty(), "beta-values");
      for (double b : tab_beta) {
        ScenarioSpec s = spec;
        s.beta_or_m = b;
        v.require(s.validate().empty(), "beta-values");
      }
      v.throw_if_bad();
      const auto rows = run_table(spec, tab_c2, tab_beta, tab_mc.sigma2, tab_mc.replicates, opt);
      write_file(tab_csv, table_csv(rows));
      if (!tab_json.empty()) {
        Json arr = Json::array();
        for (const auto& r : rows) arr.push_back(to_json(r));
        write_file(tab_json, dump(arr));
      }
      log << rows.size() << " rows, wrote " << tab_csv << "\n";
      return kOk;
    }

    if (heatmap->parsed()) {
      Validator v;
      if (!heat_d2.empty()) {
        heat_s.delta2 = heat_d2.front();
        heat_s.delta2_from_grid = true;
      }
      ScenarioSpec spec = heat_s.to_spec(v);
      const auto opt = mc_options(heat_mc, v);
      v.require(spec.kind == ScenarioKind::SettingC || spec.kind == ScenarioKind::SettingD, "scenario");
      v.require(!heat_c2.empty(), "c2-values");
      for (double c2 : heat_c2) v.require(c2 >= 0.0 && std::isfinite(c2), "c2-values");
      v.require(!heat_d2.empty(), "delta2-values");
      for (double d : heat_d2) v.require(d > 0.0 && std::isfinite(d), "delta2-values");
      v.throw_if_bad();
      const auto grid = run_heatmap(spec, heat_c2, heat_d2, heat_mc.sigma2, heat_mc.replicates, opt);
      write_file(heat_csv, heatmap_csv(grid));
      if (!heat_svg.empty()) {
        write_file(heat_svg, heatmap_svg(grid, std::string("mean MT/ST oracle ratio, ") + to_string(spec.kind)));
      }
      if (!heat_json.empty()) {
        Json arr = Json::array();
        for (const auto& r : grid.cells) arr.push_back(to_json(r));
        write_file(heat_json, dump(arr));
      }
      log << grid.cells.size() << " cells, wrote " << heat_csv << "\n";
      return kOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace mtkrr::cli
