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
#include <string>
#include <utility>
#include <vector>

#include "sclab/chart.hpp"

namespace scl {

/// Self-describing text container for node-sampled fields on one chart.
///
///   sclab-snapshot 1
///   dim 2
///   resolution 32 32
///   extent 6.2831853071795862 6.2831853071795862
///   topology periodic boundary
///   origin 0 0
///   fields 2 phi S
///   field phi
///   <one value per line, row-major node order>
///   field S
///   ...
///
/// Values are written with 17 significant digits, so a read after a write
/// reproduces every double exactly.
struct Snapshot {
  ChartGrid grid;
  std::vector<std::pair<std::string, std::vector<double>>> fields;

  void add(const std::string& name, const ScalarField& f);
  const std::vector<double>& field(const std::string& name) const;
};

void write_snapshot(std::ostream& os, const Snapshot& snap);
Snapshot read_snapshot(std::istream& is);
void save_snapshot(const std::string& path, const Snapshot& snap);
Snapshot load_snapshot(const std::string& path);

/// %.17g formatting shared by every text output.
std::string format_real(double v);

}  // namespace scl
