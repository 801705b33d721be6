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
// CSV, JSON and SVG serialization of experiment results. All numbers go
// through format_number so output is byte-stable.
#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "mtkrr/error.hpp"
#include "mtkrr/experiments.hpp"
#include "mtkrr/format.hpp"
#include "mtkrr/oracle.hpp"
#include "mtkrr/risk_function.hpp"

namespace mtkrr {

using Json = nlohmann::ordered_json;

/// Finite numbers as JSON numbers, non-finite ones as strings ("inf", "nan").
inline Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

inline Json json_optional(const std::optional<double>& x) { return x ? json_number(*x) : Json(nullptr); }

inline Json to_json(const ScenarioSpec& s) {
  Json j = Json::object();
  for (const auto& [k, v] : s.to_key_values()) j[k] = v;
  return j;
}

inline Json to_json(const ExperimentReport& r) {
  Json j;
  j["spec"] = to_json(r.spec);
  j["sigma2"] = json_number(r.sigma2);
  j["n_rep"] = r.n_rep;
  j["b_bar"] = json_number(r.b_bar);
  j["pi1"] = json_number(r.pi1);
  j["mean_ratio"] = json_number(r.mean_ratio);
  j["std_ratio"] = json_number(r.std_ratio);
  j["pi2"] = json_optional(r.pi2);
  j["pi2_scale"] = to_string(r.pi2_scale);
  j["ci95"] = r.ci95 ? Json::array({json_number(r.ci95->first), json_number(r.ci95->second)}) : Json(nullptr);
  Json seeds = Json::array();
  for (auto s : r.replicate_seeds) seeds.push_back(std::to_string(s));
  j["replicate_seeds"] = seeds;
  Json ratios = Json::array(), mt = Json::array(), st = Json::array();
  for (std::size_t i = 0; i < r.ratios.size(); ++i) {
    ratios.push_back(json_number(r.ratios[i]));
    mt.push_back(json_number(r.mt_risks[i]));
    st.push_back(json_number(r.st_risks[i]));
  }
  j["ratios"] = ratios;
  j["mt_risks"] = mt;
  j["st_risks"] = st;
  return j;
}

inline Json to_json(const OracleResult& r) {
  Json j;
  j["mt_risk"] = json_number(r.mt_risk);
  j["st_risk"] = json_number(r.st_risk);
  j["rho"] = json_number(r.rho);
  j["lambda_star"] = json_number(r.lambda_star);
  j["mu_star"] = json_number(r.mu_star);
  Json l = Json::array(), t = Json::array();
  for (double x : r.st_lambdas) l.push_back(json_number(x));
  for (double x : r.per_task_risks) t.push_back(json_number(x));
  j["st_lambdas"] = l;
  j["diagnostics"] = {{"per_task_risks", t},
                      {"mean_part_risk", json_number(r.mean_part_risk)},
                      {"variance_part_risk", json_number(r.variance_part_risk)}};
  return j;
}

inline Json to_json(const BoundReport& b) {
  Json j;
  j["n"] = b.params.n;
  j["p"] = b.params.p;
  j["sigma2"] = json_number(b.params.sigma2);
  j["beta"] = json_number(b.params.beta);
  j["delta"] = json_number(b.params.delta);
  j["c"] = json_number(b.params.c);
  j["r_star"] = json_number(b.r_star);
  j["lambda_star"] = json_number(b.lambda_star);
  j["upper"] = json_number(b.upper);
  j["upper_from_theory"] = b.upper_from_theory;
  j["lower"] = json_optional(b.lower);
  j["epsilon_cap"] = json_optional(b.epsilon_cap);
  j["kappa"] = json_optional(b.kappa);
  j["alpha"] = json_optional(b.alpha);
  j["regime"] = to_string(b.regime);
  j["optimizer"] = {{"iterations", b.optimizer.iterations},
                    {"converged", b.optimizer.converged},
                    {"derivative", json_number(b.optimizer.derivative)},
                    {"gradient_small", b.optimizer.gradient_small},
                    {"location", to_string(b.optimizer.location)}};
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {
inline std::string opt_cell(const std::optional<double>& x) { return x ? format_number(*x) : ""; }

inline void require_same_setup(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.spec.kind != b.spec.kind || a.spec.n != b.spec.n || a.spec.p != b.spec.p ||
      a.spec.c1 != b.spec.c1 || a.sigma2 != b.sigma2 || a.n_rep != b.n_rep) {
    throw ConfigError("inconsistent report specs: rows differ in scenario, n, p, c1, sigma2 or replicates");
  }
}
}  // namespace detail

/// Columns C2, r, beta_or_m, b_bar, pi1, mean_ratio, std_ratio, pi2.
inline std::string table_csv(const std::vector<ExperimentReport>& reports) {
  if (reports.empty()) throw ConfigError("table needs at least one report");
  std::ostringstream os;
  os << "C2,r,beta_or_m,b_bar,pi1,mean_ratio,std_ratio,pi2\n";
  for (const auto& r : reports) {
    detail::require_same_setup(reports.front(), r);
    const double ratio = r.spec.c1 > 0.0 ? r.spec.c2 / r.spec.c1 : kInf;
    os << format_number(r.spec.c2) << ',' << format_number(ratio) << ','
       << format_number(r.spec.beta_or_m) << ',' << format_number(r.b_bar) << ','
       << format_number(r.pi1) << ',' << format_number(r.mean_ratio) << ','
       << format_number(r.std_ratio) << ',' << detail::opt_cell(r.pi2) << '\n';
  }
  return os.str();
}

inline void check_grid(const HeatmapGrid& g) {
  if (g.c2_values.empty() || g.delta2_values.empty() ||
      g.cells.size() != g.c2_values.size() * g.delta2_values.size()) {
    throw ConfigError("inconsistent report specs: heatmap grid is incomplete");
  }
  for (const auto& c : g.cells) detail::require_same_setup(g.cells.front(), c);
}

/// Long format: one line per cell with the 95% interval.
inline std::string heatmap_csv(const HeatmapGrid& g) {
  check_grid(g);
  std::ostringstream os;
  os << "C2,delta2,mean_ratio,std_ratio,ci_low,ci_high,ci_half_width\n";
  std::size_t k = 0;
  for (double c2 : g.c2_values) {
    for (double d2 : g.delta2_values) {
      const auto& r = g.cells[k++];
      os << format_number(c2) << ',' << format_number(d2) << ',' << format_number(r.mean_ratio) << ','
         << format_number(r.std_ratio) << ',';
      if (r.ci95) {
        os << format_number(r.ci95->first) << ',' << format_number(r.ci95->second) << ','
           << format_number(0.5 * (r.ci95->second - r.ci95->first));
      } else {
        os << ",,";
      }
      os << '\n';
    }
  }
  return os.str();
}

namespace detail {
// Diverging colour around 1: blue below, red above, white at 1.
inline std::string ratio_colour(double ratio) {
  const double t = std::clamp(std::log2(std::max(ratio, 1e-300)), -1.0, 1.0);
  const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(t))));
  char buf[8];
  if (t < 0) std::snprintf(buf, sizeof buf, "#%02x%02xff", fade, fade);
  else std::snprintf(buf, sizeof buf, "#ff%02x%02x", fade, fade);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

inline std::string fixed3(double x) {
  if (!std::isfinite(x)) return format_number(x);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}
}  // namespace detail

inline std::string heatmap_svg(const HeatmapGrid& g, const std::string& title) {
  check_grid(g);
  const int cell = 70, left = 90, top = 50;
  const int cols = static_cast<int>(g.delta2_values.size());
  const int rows = static_cast<int>(g.c2_values.size());
  const int width = left + cols * cell + 20;
  const int height = top + rows * cell + 50;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << detail::xml_escape(title) << "</text>\n";
  for (int r = 0; r < rows; ++r) {
    os << "<text x=\"" << left - 8 << "\" y=\"" << top + r * cell + cell / 2 + 4
       << "\" text-anchor=\"end\">C2=" << format_number(g.c2_values[static_cast<std::size_t>(r)]) << "</text>\n";
    for (int c = 0; c < cols; ++c) {
      const auto& rep = g.cells[static_cast<std::size_t>(r * cols + c)];
      const int x = left + c * cell, y = top + r * cell;
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
         << "\" fill=\"" << detail::ratio_colour(rep.mean_ratio) << "\" stroke=\"#888\"/>\n";
      os << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 << "\" text-anchor=\"middle\">"
         << detail::fixed3(rep.mean_ratio) << "</text>\n";
      if (rep.ci95) {
        os << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 14
           << "\" text-anchor=\"middle\" font-size=\"9\">&#177;"
           << detail::fixed3(0.5 * (rep.ci95->second - rep.ci95->first)) << "</text>\n";
      }
    }
  }
  for (int c = 0; c < cols; ++c) {
    os << "<text x=\"" << left + c * cell + cell / 2 << "\" y=\"" << top + rows * cell + 18
       << "\" text-anchor=\"middle\">delta2=" << format_number(g.delta2_values[static_cast<std::size_t>(c)])
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace mtkrr
