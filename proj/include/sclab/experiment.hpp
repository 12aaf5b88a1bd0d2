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


#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace scl {

struct ConfigEntry {
  std::string value;
  int line = 0;    // 0 for command-line arguments
  int column = 0;  // argument index when line is 0
};

/// Flat key=value experiment description. The command and geometry are
/// stored under the keys "command" and "geometry".
struct ExperimentConfig {
  std::map<std::string, ConfigEntry> entries;
  std::string source = "<args>";

  bool has(const std::string& key) const { return entries.count(key) != 0; }
  std::string text(const std::string& key, const std::string& fallback = "") const;
  double real(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback) const;
};

/// Parses config text; errors name the source with line and column.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);
/// `<command> [geometry] key=value...`
ExperimentConfig config_from_args(const std::vector<std::string>& args);

/// Checks the command name and rejects keys the command does not read.
void validate_config(const ExperimentConfig& cfg);

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, bool>> verdicts;
};

/// Runs one experiment; output files go under SCL_OUTPUT_DIR when set,
/// otherwise under the `outdir` key (default ".").
RunResult run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// Full command-line entry point: 0 success, 2 failed verdict, 1 error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scl
