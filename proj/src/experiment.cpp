// Copyright 2026 The sclab Authors
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

#include "sclab/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "sclab/curvature.hpp"
#include "sclab/error.hpp"
#include "sclab/expr.hpp"
#include "sclab/flow.hpp"
#include "sclab/hypersurface.hpp"
#include "sclab/models.hpp"
#include "sclab/series.hpp"
#include "sclab/snapshot.hpp"
#include "sclab/spectral.hpp"
#include "sclab/systole.hpp"

namespace scl {
namespace {

using std::numbers::pi;

std::string trim(const std::string& s, std::size_t* lead = nullptr) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  if (lead) *lead = a;
  return s.substr(a, b - a);
}

[[noreturn]] void parse_error(const std::string& source, int line, int column, const std::string& what) {
  fail(ErrorCode::parse, source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
}

bool key_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string unquote(const std::string& v, const std::string& source, int line, int column) {
  if (v.empty() || v.front() != '"') return v;
  if (v.size() < 2 || v.back() != '"') parse_error(source, line, column, "unterminated string");
  return v.substr(1, v.size() - 2);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  return out;
}

const std::set<std::string>& allowed_keys(const std::string& command) {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"curvature", {"res", "lengths", "r", "lon", "u", "perturb", "phi", "g11", "g12", "g13", "g22", "g23", "g33"}},
      {"flow",
       {"res", "lengths", "r0", "u", "perturb", "phi", "g11", "g12", "g22", "dt", "steps", "scheme", "checkpoint"}},
      {"identity", {"res", "lengths", "u", "perturb", "phi", "kind", "fiber_dim", "min_order", "dt"}},
      {"jacobi", {"res", "lon", "lengths", "r", "rho", "height", "axis", "expect", "tol"}},
      {"systole", {"res", "lengths", "u", "g11", "g12", "g22", "xi", "connectivity"}},
      {"certify", {"r", "fiber", "lengths", "res", "connectivity", "phi"}},
  };
  auto it = keys.find(command);
  if (it == keys.end()) fail(ErrorCode::invalid_argument, "unknown command '" + command + "'");
  return it->second;
}

const std::set<std::string>& allowed_geometries(const std::string& command) {
  static const std::map<std::string, std::set<std::string>> geoms = {
      {"curvature", {"torus", "sphere", "metric"}},
      {"flow", {"torus", "sphere", "metric"}},
      {"identity", {"torus", "metric"}},
      {"jacobi", {"torus", "sphere"}},
      {"systole", {"torus", "metric"}},
      {"certify", {"disk-cylinder", "sphere-cylinder", "flat-torus", "all"}},
  };
  return geoms.at(command);
}

}  // namespace

namespace {

std::string where(const ExperimentConfig& cfg, const std::string& key) {
  auto it = cfg.entries.find(key);
  if (it == cfg.entries.end()) return cfg.source;
  if (it->second.line == 0) return cfg.source + ": argument " + std::to_string(it->second.column);
  return cfg.source + ":" + std::to_string(it->second.line) + ":" + std::to_string(it->second.column);
}

[[noreturn]] void bad_value(const ExperimentConfig& cfg, const std::string& key, const std::string& what) {
  fail(ErrorCode::invalid_argument, where(cfg, key) + ": " + key + " " + what);
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

}  // namespace

std::string ExperimentConfig::text(const std::string& key, const std::string& fallback) const {
  auto it = entries.find(key);
  return it == entries.end() ? fallback : it->second.value;
}

double ExperimentConfig::real(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  double v = 0.0;
  if (!parse_double(text(key), v)) bad_value(*this, key, "expects a number, got '" + text(key) + "'");
  return v;
}

long ExperimentConfig::integer(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const std::string s = text(key);
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) bad_value(*this, key, "expects an integer, got '" + s + "'");
  return v;
}

std::vector<double> ExperimentConfig::reals(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const std::string& item : split_list(text(key))) {
    double v = 0.0;
    if (!parse_double(item, v)) bad_value(*this, key, "expects a list of numbers, got '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> ExperimentConfig::integers(const std::string& key, const std::vector<int>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<int> out;
  for (const std::string& item : split_list(text(key))) {
    char* end = nullptr;
    long v = std::strtol(item.c_str(), &end, 10);
    if (item.empty() || end != item.c_str() + item.size())
      bad_value(*this, key, "expects a list of integers, got '" + item + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig cfg;
  cfg.source = source;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    bool quoted = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        raw.resize(i);
        break;
      }
    }
    std::size_t lead = 0;
    if (trim(raw, &lead).empty()) continue;
    const std::size_t eq = raw.find('=');
    if (eq == std::string::npos) parse_error(source, line, static_cast<int>(lead) + 1, "expected key = value");
    std::size_t klead = 0;
    const std::string key = trim(raw.substr(0, eq), &klead);
    if (key.empty()) parse_error(source, line, static_cast<int>(eq) + 1, "missing key before '='");
    for (std::size_t i = 0; i < key.size(); ++i)
      if (!key_char(key[i]))
        parse_error(source, line, static_cast<int>(klead + i) + 1, std::string("invalid character '") + key[i] + "' in key");
    std::size_t vlead = 0;
    const std::string rest = raw.substr(eq + 1);
    std::string value = trim(rest, &vlead);
    const int vcol = static_cast<int>(eq + 1 + vlead) + 1;
    if (value.empty()) parse_error(source, line, vcol, "missing value for '" + key + "'");
    value = unquote(value, source, line, vcol);
    if (cfg.entries.count(key)) parse_error(source, line, static_cast<int>(klead) + 1, "duplicate key '" + key + "'");
    cfg.entries[key] = ConfigEntry{value, line, static_cast<int>(klead) + 1};
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

ExperimentConfig config_from_args(const std::vector<std::string>& args) {
  ExperimentConfig cfg;
  if (args.empty()) fail(ErrorCode::invalid_argument, "missing command");
  cfg.entries["command"] = ConfigEntry{args[0], 0, 1};
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    const int pos = static_cast<int>(i) + 1;
    const std::size_t eq = a.find('=');
    if (eq == std::string::npos) {
      if (i == 1) {
        cfg.entries["geometry"] = ConfigEntry{a, 0, pos};
        continue;
      }
      fail(ErrorCode::parse, "argument " + std::to_string(pos) + ": expected key=value, got '" + a + "'");
    }
    const std::string key = a.substr(0, eq);
    if (key.empty() || !std::all_of(key.begin(), key.end(), key_char))
      fail(ErrorCode::parse, "argument " + std::to_string(pos) + ": invalid key '" + key + "'");
    if (cfg.entries.count(key)) fail(ErrorCode::parse, "argument " + std::to_string(pos) + ": duplicate key '" + key + "'");
    std::string value = a.substr(eq + 1);
    if (value.empty()) fail(ErrorCode::parse, "argument " + std::to_string(pos) + ": missing value for '" + key + "'");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    cfg.entries[key] = ConfigEntry{value, 0, pos};
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (!cfg.has("command")) fail(ErrorCode::invalid_argument, cfg.source + ": missing command");
  const std::string command = cfg.text("command");
  const auto& keys = allowed_keys(command);
  static const std::set<std::string> common = {"command", "geometry", "output", "outdir", "seed"};
  for (const auto& [key, entry] : cfg.entries)
    if (!common.count(key) && !keys.count(key)) bad_value(cfg, key, "is not a recognised key for " + command);
  if (cfg.has("geometry") && !allowed_geometries(command).count(cfg.text("geometry")))
    bad_value(cfg, "geometry", "'" + cfg.text("geometry") + "' is not available for " + command);
}

namespace {

Expression expression(const ExperimentConfig& cfg, const std::string& key, const std::string& fallback) {
  const std::string text = cfg.text(key, fallback);
  try {
    return Expression::parse(text);
  } catch (const Error& e) {
    bad_value(cfg, key, "expression: " + std::string(e.what()));
  }
}

class Outputs {
 public:
  Outputs(const ExperimentConfig& cfg, RunResult& result) : cfg_(cfg), result_(result) {
    const char* env = std::getenv("SCL_OUTPUT_DIR");
    root_ = env && *env ? std::filesystem::path(env) : std::filesystem::path(cfg.text("outdir", "."));
    if (!std::filesystem::is_directory(root_))
      fail(ErrorCode::io, "missing output directory " + root_.string());
  }

  std::string main_path() const { return path(cfg_.text("output", cfg_.text("command") + ".csv")); }

  std::string path(const std::string& name) const {
    std::filesystem::path p = root_ / name;
    if (!std::filesystem::is_directory(p.parent_path()))
      fail(ErrorCode::io, "missing output directory " + p.parent_path().string());
    return p.string();
  }

  void wrote(const std::string& p, std::ostream& log) {
    result_.outputs.push_back(p);
    log << "wrote " << p << '\n';
  }

 private:
  const ExperimentConfig& cfg_;
  RunResult& result_;
  std::filesystem::path root_;
};

void verdict(RunResult& r, std::ostream& log, const std::string& name, bool pass) {
  r.verdicts.emplace_back(name, pass);
  log << "verdict " << name << ": " << (pass ? "pass" : "fail") << '\n';
}

ScalarField random_field(const ChartGrid& g, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  struct Mode {
    int axis, k;
    double c, phase;
  };
  std::vector<Mode> modes;
  for (int a = 0; a < g.dim(); ++a)
    for (int k = 1; k <= 2; ++k) {
      double c = unit(rng), p = pi * (unit(rng) + 1.0);
      modes.push_back({a, k, c, p});
    }
  const double scale = amplitude / static_cast<double>(modes.size());
  return sample_field(g, [&](const Point& x) {
    double s = 0.0;
    for (const Mode& m : modes) s += m.c * std::sin(2 * pi * m.k * x[m.axis] / g.axis(m.axis).extent + m.phase);
    return scale * s;
  });
}

int chart_dim(const ExperimentConfig& cfg, bool res_lists_levels = false) {
  if (cfg.has("lengths")) return static_cast<int>(cfg.reals("lengths", {}).size());
  if (!res_lists_levels && cfg.has("res") && cfg.integers("res", {}).size() > 1) return static_cast<int>(cfg.integers("res", {}).size());
  for (const char* k : {"g13", "g23", "g33"})
    if (cfg.has(k)) return 3;
  return 2;
}

std::vector<std::string> metric_keys(int dim) {
  if (dim == 2) return {"g11", "g12", "g22"};
  return {"g11", "g12", "g13", "g22", "g23", "g33"};
}

std::string metric_default(const std::string& key) { return key[1] == key[2] ? "1" : "0"; }

/// Periodic chart with a flat, conformal or expression metric.
ChartMetric chart_metric(const ExperimentConfig& cfg, std::vector<int> res, int dim, double length,
                         const std::string& default_u) {
  if (dim < 2 || dim > 3) bad_value(cfg, "lengths", "must list two or three side lengths");
  if (res.size() == 1) res.assign(dim, res[0]);
  if (static_cast<int>(res.size()) != dim) bad_value(cfg, "res", "must give one resolution or one per axis");
  std::vector<double> lengths = cfg.reals("lengths", std::vector<double>(dim, length));
  for (double l : lengths)
    if (!(l > 0)) bad_value(cfg, "lengths", "must be positive");
  ChartMetric m = flat_torus(res, lengths);
  if (cfg.text("geometry", "torus") == "metric") {
    std::vector<Expression> comps;
    for (const std::string& k : metric_keys(dim)) comps.push_back(expression(cfg, k, metric_default(k)));
    m.metric = metric_from_expressions(m.grid, comps);
    return m;
  }
  if (cfg.has("u") || !default_u.empty()) {
    m.metric = conformal_metric(sample_expression(m.grid, expression(cfg, "u", default_u)));
  } else if (cfg.real("perturb", 0.0) != 0.0) {
    m.metric = conformal_metric(random_field(m.grid, cfg.real("perturb", 0.0), static_cast<std::uint64_t>(cfg.integer("seed", 0))));
  }
  return m;
}

FlowScheme scheme_of(const ExperimentConfig& cfg) {
  const std::string s = cfg.text("scheme", "euler");
  if (s == "euler") return FlowScheme::euler;
  if (s == "midpoint") return FlowScheme::midpoint;
  bad_value(cfg, "scheme", "must be euler or midpoint");
}

Connectivity connectivity_of(const ExperimentConfig& cfg) {
  switch (cfg.integer("connectivity", 16)) {
    case 4: return Connectivity::four;
    case 8: return Connectivity::eight;
    case 16: return Connectivity::sixteen;
  }
  bad_value(cfg, "connectivity", "must be 4, 8 or 16");
}

void run_curvature(const ExperimentConfig& cfg, Outputs& out, RunResult&, std::ostream& log) {
  ChartMetric m;
  if (cfg.text("geometry", "torus") == "sphere") {
    const int lat = static_cast<int>(cfg.integer("res", 65));
    m = sphere_latlong(lat, static_cast<int>(cfg.integer("lon", 2 * (lat - 1))), cfg.real("r", 1.0));
  } else {
    m = chart_metric(cfg, cfg.integers("res", {32}), chart_dim(cfg), 2 * pi, "");
  }
  ScalarField phi = sample_expression(m.grid, expression(cfg, "phi", "0"));
  CurvatureBundle b = curvature_bundle(m.metric);
  ScalarField S = stabilized_scalar(m.metric, b, phi);
  NodeMask regular = b.regular();
  SeriesTable t;
  for (int a = 0; a < m.grid.dim(); ++a) t.columns.push_back("x" + std::to_string(a + 1));
  t.columns.push_back("R");
  t.columns.push_back("S");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t n = 0; n < m.grid.size(); ++n) {
    Point x = m.grid.point(n);
    std::vector<double> row(x.begin(), x.begin() + m.grid.dim());
    const bool ok = regular.empty() || regular[n];
    row.push_back(ok ? b.scalar[n] : nan);
    row.push_back(ok ? S[n] : nan);
    t.add_row(std::move(row));
  }
  const std::string path = out.main_path();
  emit_series(t, path);
  out.wrote(path, log);
  log << "inf_S " << format_real(reduce_min(S, regular).value) << "\nsup_S "
      << format_real(reduce_max(S, regular).value) << "\nF " << format_real(f_functional(m.metric, phi)) << '\n';
}

void run_flow(const ExperimentConfig& cfg, Outputs& out, RunResult& result, std::ostream& log) {
  FlowState s;
  if (cfg.text("geometry", "torus") == "sphere") {
    const int n = static_cast<int>(cfg.integer("res", 65));
    const double r0 = cfg.real("r0", 1.0);
    if (!(r0 > 0)) bad_value(cfg, "r0", "must be positive");
    ChartGrid g = make_chart(1, {n}, {pi}, {Topology::boundary});
    s = make_sphere_state(n, r0, sample_expression(g, expression(cfg, "phi", "0")));
  } else {
    if (chart_dim(cfg) != 2) bad_value(cfg, "res", "flow runs on 2-D charts");
    ChartMetric m = chart_metric(cfg, cfg.integers("res", {32}), 2, 2 * pi, "");
    s = make_chart_state(m.metric, sample_expression(m.grid, expression(cfg, "phi", "0")));
  }
  const double dt = cfg.real("dt", 0.5 * stability_bound(s));
  if (!(dt > 0)) bad_value(cfg, "dt", "must be positive");
  const long steps = cfg.integer("steps", 100);
  if (steps < 1) bad_value(cfg, "steps", "must be at least 1");
  const long every = cfg.integer("checkpoint", 0);
  if (every < 0) bad_value(cfg, "checkpoint", "must be nonnegative");
  FlowTrajectory tr = run_coupled_flow(s, dt, static_cast<int>(steps), scheme_of(cfg));

  const std::string path = out.main_path();
  emit_series(flow_series(tr), path);
  out.wrote(path, log);
  if (every > 0) {
    const std::string stem = std::filesystem::path(path).stem().string();
    for (std::size_t k = 0; k < tr.states.size(); k += static_cast<std::size_t>(every)) {
      char name[32];
      std::snprintf(name, sizeof name, "_step_%06zu.snap", k);
      const std::string p = out.path(stem + name);
      write_flow_checkpoint(p, tr.states[k]);
      out.wrote(p, log);
    }
  }
  MonotonicityReport rep = monotonicity_report(tr);
  log << "inf_S " << format_real(rep.rows.front().inf_s) << " -> " << format_real(rep.rows.back().inf_s) << '\n';
  if (rep.rigid_everywhere) log << "rigid: Ric = D^2 phi and S = 0 along the run\n";
  verdict(result, log, "monotone_inf_S", rep.monotone);
}

void run_identity(const ExperimentConfig& cfg, Outputs& out, RunResult& result, std::ostream& log) {
  const std::string kind = cfg.text("kind", "evolution");
  if (kind != "evolution" && kind != "adjoint" && kind != "warped")
    bad_value(cfg, "kind", "must be evolution, adjoint or warped");
  const std::vector<int> levels = cfg.integers("res", {16, 32, 64});
  if (levels.size() < 2) bad_value(cfg, "res", "needs at least two resolutions");
  const int fiber = static_cast<int>(cfg.integer("fiber_dim", 1));
  if (fiber < 1) bad_value(cfg, "fiber_dim", "must be at least 1");
  const double dt = cfg.real("dt", 1e-5);
  if (!(dt > 0)) bad_value(cfg, "dt", "must be positive");
  const double length = cfg.reals("lengths", {2 * pi}).front();

  SeriesTable t;
  t.columns = {"res", "h", "residual_maxnorm", "observed_order"};
  std::vector<double> err;
  for (int n : levels) {
    ChartMetric m = chart_metric(cfg, {n}, chart_dim(cfg, true), 2 * pi, "0.1*sin(x1)");
    ScalarField phi = sample_expression(m.grid, expression(cfg, "phi", "0"));
    double e = 0.0;
    if (kind == "warped") {
      e = max_abs(warped_residual(m.metric, phi, fiber).residual);
    } else {
      FlowState s = make_chart_state(m.metric, phi);
      if (kind == "adjoint") {
        e = max_abs(adjoint_supersolution_residual(s));
      } else {
        FlowTrajectory tr = run_coupled_flow(s, dt, 2, FlowScheme::midpoint);
        e = max_abs(evolution_identity_residual(tr, 1));
      }
    }
    err.push_back(e);
    double order = std::numeric_limits<double>::quiet_NaN();
    if (err.size() > 1) {
      const double h0 = length / levels[err.size() - 2], h1 = length / n;
      order = std::log(err[err.size() - 2] / e) / std::log(h0 / h1);
    }
    t.add_row({static_cast<double>(n), length / n, e, order});
  }
  const std::string path = out.main_path();
  emit_series(t, path);
  out.wrote(path, log);
  const double min_order = cfg.real("min_order", 1.8);
  bool roundoff = std::all_of(err.begin(), err.end(), [](double e) { return e <= 1e-10; });
  bool ok = roundoff;
  if (!roundoff) {
    ok = true;
    for (std::size_t k = 1; k < t.rows.size(); ++k) ok = ok && t.rows[k][3] >= min_order;
  }
  verdict(result, log, kind + "_identity_order", ok);
}

void run_jacobi(const ExperimentConfig& cfg, Outputs& out, RunResult& result, std::ostream& log) {
  const std::string geometry = cfg.text("geometry", "torus");
  ChartMetric m;
  int axis = 0;
  double height = 0.0;
  if (geometry == "sphere") {
    const int lat = static_cast<int>(cfg.integer("res", 65));
    m = sphere_latlong(lat, static_cast<int>(cfg.integer("lon", 128)), cfg.real("r", 1.0));
    if (cfg.integer("axis", 1) != 1) bad_value(cfg, "axis", "must be 1 (latitude) on the sphere");
    height = cfg.real("height", pi / 2);
  } else {
    std::vector<int> res = cfg.integers("res", {16});
    m = chart_metric(cfg, res, 3, 2 * pi, "");
    axis = static_cast<int>(cfg.integer("axis", 3)) - 1;
    if (axis < 0 || axis > 2) bad_value(cfg, "axis", "must be 1, 2 or 3");
    height = cfg.real("height", 1.0);
  }
  auto ambient = AmbientGeometry::make(m.metric);
  HypersurfaceEmbedding s = embed_slice(ambient, axis, height);
  ScalarField rho = sample_expression(m.grid, expression(cfg, "rho", "1"));
  EigenPair e = principal_eigenpair(assemble_jacobi(s, rho));
  const std::string path = out.main_path();
  write_eigen_report(path, {eigen_report_row(geometry, e)});
  out.wrote(path, log);
  log << "lambda " << format_real(e.eigenvalue) << '\n';
  verdict(result, log, "residual", e.residual <= 1e-8);
  verdict(result, log, "positive_eigenfunction", reduce_min(e.eigenfunction).value > 0.0);
  if (cfg.has("expect"))
    verdict(result, log, "expected_eigenvalue",
            std::abs(e.eigenvalue - cfg.real("expect", 0.0)) <= cfg.real("tol", 1e-3));
}

void run_systole(const ExperimentConfig& cfg, Outputs& out, RunResult& result, std::ostream& log) {
  if (chart_dim(cfg) != 2) bad_value(cfg, "res", "systole runs on 2-D charts");
  ChartMetric m = chart_metric(cfg, cfg.integers("res", {64}), 2, 1.0, "");
  TensorFn metric;
  if (cfg.text("geometry", "torus") == "metric") {
    Expression g11 = expression(cfg, "g11", "1"), g12 = expression(cfg, "g12", "0"), g22 = expression(cfg, "g22", "1");
    metric = [=](const Point& x) {
      const double a = g11(x), b = g12(x), c = g22(x);
      return Mat{a, b, 0, b, c, 0, 0, 0, 0};
    };
  } else {
    Expression u = expression(cfg, "u", "0");
    metric = [=](const Point& x) {
      const double f = std::exp(2 * u(x));
      return Mat{f, 0, 0, 0, f, 0, 0, 0, 0};
    };
  }
  const long xi = cfg.integer("xi", 1);
  if (xi != 1 && xi != 2) bad_value(cfg, "xi", "must be 1 or 2");
  WindingGraph g = build_winding_graph(m.grid, metric, static_cast<int>(xi) - 1, connectivity_of(cfg));
  SystoleResult r = systole_sigma(g);
  SeriesTable t;
  const Connectivity conn = connectivity_of(cfg);
  t.columns = {"sigma", "quantization_bound", "winding", "edges", "source"};
  t.add_row({r.length, quantization_bound(conn), static_cast<double>(cycle_winding(g, r.cycle)), static_cast<double>(r.cycle.size()),
             static_cast<double>(r.source)});
  const std::string path = out.main_path();
  emit_series(t, path);
  out.wrote(path, log);
  log << "sigma " << format_real(r.length) << '\n';
  verdict(result, log, "cycle", is_closed(g, r.cycle) && cycle_winding(g, r.cycle) != 0);
}

void run_certify(const ExperimentConfig& cfg, Outputs& out, RunResult& result, std::ostream& log) {
  const std::string which = cfg.text("geometry", "all");
  std::vector<EqualityModel> models;
  if (which == "disk-cylinder" || which == "all") models.push_back(EqualityModel::disk_cylinder);
  if (which == "sphere-cylinder" || which == "all") models.push_back(EqualityModel::sphere_cylinder);
  if (which == "flat-torus" || which == "all") models.push_back(EqualityModel::flat_torus);
  const double r = cfg.real("r", 1.0);
  if (!(r > 0)) bad_value(cfg, "r", "must be positive");
  const int res = static_cast<int>(cfg.integer("res", 128));
  std::vector<EqualityCertificate> certs;
  for (EqualityModel model : models) {
    ModelSpec spec;
    spec.model = model;
    spec.radius = r;
    spec.lengths = model == EqualityModel::flat_torus ? cfg.reals("lengths", {1.0, 1.0}) : cfg.reals("fiber", {10.0});
    spec.resolution = model == EqualityModel::flat_torus ? std::min(res, 32) : res;
    if (model == EqualityModel::flat_torus && cfg.has("res")) spec.resolution = res;
    spec.connectivity = connectivity_of(cfg);
    spec.phi = cfg.real("phi", 0.0);
    certs.push_back(equality_certificate(spec));
  }
  const std::string path = out.main_path();
  write_certificates(path, certs);
  out.wrote(path, log);
  for (const auto& c : certs) verdict(result, log, c.model, c.pass);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  validate_config(cfg);
  RunResult result;
  Outputs out(cfg, result);
  const std::string command = cfg.text("command");
  if (command == "curvature") run_curvature(cfg, out, result, log);
  if (command == "flow") run_flow(cfg, out, result, log);
  if (command == "identity") run_identity(cfg, out, result, log);
  if (command == "jacobi") run_jacobi(cfg, out, result, log);
  if (command == "systole") run_systole(cfg, out, result, log);
  if (command == "certify") run_certify(cfg, out, result, log);
  for (const auto& v : result.verdicts)
    if (!v.second) result.exit_code = 2;
  return result;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  static const char* usage =
      "usage: sclab <command> [geometry] key=value...\n"
      "       sclab --config <path>\n"
      "commands: curvature flow identity jacobi systole certify\n";
  if (args.empty()) {
    err << usage;
    return 1;
  }
  if (args[0] == "--help" || args[0] == "-h") {
    out << usage;
    return 0;
  }
  try {
    ExperimentConfig cfg;
    if (args[0] == "--config") {
      if (args.size() != 2) fail(ErrorCode::invalid_argument, "--config takes exactly one path");
      cfg = load_config(args[1]);
    } else {
      cfg = config_from_args(args);
    }
    return run_experiment(cfg, out).exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace scl
