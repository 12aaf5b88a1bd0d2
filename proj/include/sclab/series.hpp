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
#include <vector>

#include "sclab/flow.hpp"

namespace scl {

/// Homogeneous numeric records with named columns.
struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

void write_series(std::ostream& os, const SeriesTable& table);
void emit_series(const SeriesTable& table, const std::string& path);

/// Columns t, inf_S, F, max_ricci_hessian_gap, identity_residual_maxnorm.
/// The identity residual needs both neighbours in time and is NaN on the end rows.
SeriesTable flow_series(const FlowTrajectory& tr);

/// Snapshot of the evolving fields of one state (metric components, phi, S).
void write_flow_checkpoint(const std::string& path, const FlowState& s);

}  // namespace scl
