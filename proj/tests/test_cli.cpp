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


#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "sclab/error.hpp"
#include "sclab/experiment.hpp"
#include "sclab/models.hpp"
#include "sclab/series.hpp"

using namespace scl;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::vector<std::string>& args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) lines.push_back(l);
  return lines;
}

}  // namespace

TEST_CASE("series emission") {
  TempDir dir("sclab_series");
  SeriesTable empty;
  empty.columns = {"a", "b"};
  emit_series(empty, dir.file("empty.csv"));
  CHECK(slurp(dir.file("empty.csv")) == "a,b\n");

  SeriesTable t;
  t.columns = {"x", "y"};
  t.add_row({0.1, 1.0 / 3.0});
  t.add_row({-2.5e-300, 1e22});
  emit_series(t, dir.file("t.csv"));
  std::string text = slurp(dir.file("t.csv"));
  CHECK(text.find('\r') == std::string::npos);
  auto lines = split_lines(text);
  REQUIRE(lines.size() == 3);
  CHECK(lines[1] == "0.10000000000000001,0.33333333333333331");
  double back = std::strtod(lines[1].substr(lines[1].find(',') + 1).c_str(), nullptr);
  CHECK(back == 1.0 / 3.0);
  CHECK_THROWS_AS(t.add_row({1.0}), Error);
  CHECK_THROWS_AS(emit_series(t, dir.file("missing/t.csv")), Error);
}

TEST_CASE("flow series columns") {
  ChartMetric m = flat_torus({16, 16}, {2 * pi, 2 * pi});
  FlowState s = make_chart_state(m.metric, sample_field(m.grid, [](const Point& x) { return 0.1 * std::sin(x[0]); }));
  FlowTrajectory tr = run_coupled_flow(s, 0.5 * stability_bound(s), 4, FlowScheme::euler);
  SeriesTable t = flow_series(tr);
  CHECK(t.columns == std::vector<std::string>{"t", "inf_S", "F", "max_ricci_hessian_gap", "identity_residual_maxnorm"});
  REQUIRE(t.rows.size() == 5);
  CHECK(std::isnan(t.rows.front()[4]));
  CHECK(std::isnan(t.rows.back()[4]));
  for (std::size_t k = 1; k + 1 < t.rows.size(); ++k) CHECK(std::isfinite(t.rows[k][4]));
  for (std::size_t k = 1; k < t.rows.size(); ++k) CHECK(t.rows[k][0] > t.rows[k - 1][0]);
}

TEST_CASE("config parsing") {
  ExperimentConfig c = parse_config("# header\ncommand = flow   # trailing\n\nphi = \"0.2*sin(x1) # not a comment\"\nres=16\n");
  CHECK(c.text("command") == "flow");
  CHECK(c.text("phi") == "0.2*sin(x1) # not a comment");
  CHECK(c.integer("res", 0) == 16);
  CHECK(c.entries.at("res").line == 5);

  auto message = [](const std::string& text) {
    try {
      parse_config(text, "cfg");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse);
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("command = flow\n   res 16\n") == "cfg:2:4: expected key = value");
  CHECK(message("command = flow\nre-s = 1\n") == "cfg:2:3: invalid character '-' in key");
  CHECK(message("command = flow\nphi = \"sin(x1)\n") == "cfg:2:7: unterminated string");
  CHECK(message("res = 1\nres = 2\n") == "cfg:2:1: duplicate key 'res'");
  CHECK(message("command =\n") == "cfg:1:10: missing value for 'command'");

  ExperimentConfig bad = parse_config("command = flow\nbogus = 1\n", "cfg");
  try {
    validate_config(bad);
    FAIL("unknown key accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("cfg:2:1") == 0);
  }
  CHECK_THROWS_AS(validate_config(parse_config("command = fly\n")), Error);
  CHECK_THROWS_AS(validate_config(parse_config("command = jacobi\ngeometry = metric\n")), Error);

  ExperimentConfig args = config_from_args({"identity", "torus", "res=8,16", "phi=\"x1\""});
  CHECK(args.text("geometry") == "torus");
  CHECK(args.integers("res", {}) == std::vector<int>{8, 16});
  CHECK(args.text("phi") == "x1");
  CHECK_THROWS_AS(config_from_args({"flow", "torus", "sphere"}), Error);
  CHECK_THROWS_AS(args.real("geometry", 0.0), Error);
}

TEST_CASE("exit codes") {
  TempDir dir("sclab_exit");
  const std::string od = "outdir=" + dir.path.string();
  CHECK(run({"certify", "flat-torus", "res=8", od}) == 0);
  CHECK(run({"jacobi", "torus", "res=8", "expect=0", od}) == 0);
  CHECK(run({"jacobi", "torus", "res=8", "expect=1", od}) == 2);
  std::string err;
  CHECK(run({"flow", "torus", "res=8", "dt=10", od}, &err) == 1);
  CHECK(err.find("stability") != std::string::npos);
  CHECK(run({"flow", "torus", "nope=1", od}) == 1);
  CHECK(run({"flow", "torus", "outdir=/nonexistent/sclab"}, &err) == 1);
  CHECK(err.find("missing output directory") != std::string::npos);
  CHECK(run({}) == 1);
  CHECK(run({"--help"}) == 0);

  std::ofstream(dir.file("run.cfg")) << "command = certify\ngeometry = flat-torus\nres = 8\noutdir = " << dir.path.string()
                                     << "\noutput = certs.csv\n";
  CHECK(run({"--config", dir.file("run.cfg")}) == 0);
  CHECK(fs::exists(dir.file("certs.csv")));
  std::ofstream(dir.file("bad.cfg")) << "command = certify\n  = 3\n";
  CHECK(run({"--config", dir.file("bad.cfg")}, &err) == 1);
  CHECK(err.find("bad.cfg:2:3") != std::string::npos);
}

TEST_CASE("output directory from the environment") {
  TempDir dir("sclab_env");
  TempDir other("sclab_env_other");
  ::setenv("SCL_OUTPUT_DIR", dir.path.c_str(), 1);
  int code = run({"certify", "flat-torus", "res=8", "outdir=" + other.path.string()});
  ::unsetenv("SCL_OUTPUT_DIR");
  CHECK(code == 0);
  CHECK(fs::exists(dir.file("certify.csv")));
  CHECK_FALSE(fs::exists(other.file("certify.csv")));
}

TEST_CASE("flow runs write series and checkpoints") {
  TempDir dir("sclab_flow");
  const std::string od = "outdir=" + dir.path.string();
  CHECK(run({"flow", "torus", "res=16", "perturb=0.1", "seed=7", "steps=4", "checkpoint=2", "phi=0.1*cos(x2)", od}) == 0);
  auto lines = split_lines(slurp(dir.file("flow.csv")));
  CHECK(lines.size() == 6);
  CHECK(lines[0] == "t,inf_S,F,max_ricci_hessian_gap,identity_residual_maxnorm");
  for (const char* f : {"flow_step_000000.snap", "flow_step_000002.snap", "flow_step_000004.snap"})
    CHECK(fs::exists(dir.file(f)));
  CHECK_FALSE(fs::exists(dir.file("flow_step_000001.snap")));
}

TEST_CASE("reruns are byte identical") {
  TempDir a("sclab_det_a"), b("sclab_det_b");
  for (const std::vector<std::string>& args : std::vector<std::vector<std::string>>{
           {"flow", "torus", "res=16", "perturb=0.2", "seed=11", "steps=5", "checkpoint=5"},
           {"identity", "torus", "res=16,32", "kind=adjoint", "phi=0.1*sin(x2)"},
           {"systole", "metric", "g11=1+0.3*sin(x2)", "res=16", "connectivity=8"},
           {"certify", "flat-torus", "res=8"}}) {
    for (const TempDir* d : {&a, &b}) {
      auto full = args;
      full.push_back("outdir=" + d->path.string());
      REQUIRE(run(full) == 0);
    }
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a.path)) {
    ++files;
    const std::string name = entry.path().filename().string();
    CHECK(slurp(a.file(name)) == slurp(b.file(name)));
  }
  CHECK(files == 6);

  TempDir c("sclab_det_c");
  REQUIRE(run({"flow", "torus", "res=16", "perturb=0.2", "seed=12", "steps=5", "outdir=" + c.path.string()}) == 0);
  CHECK(slurp(c.file("flow.csv")) != slurp(a.file("flow.csv")));
}
