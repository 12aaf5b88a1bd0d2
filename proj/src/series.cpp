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

#include "sclab/series.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "sclab/error.hpp"
#include "sclab/snapshot.hpp"

namespace scl {

void SeriesTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    fail(ErrorCode::invalid_argument, "record has " + std::to_string(row.size()) + " fields, expected " +
                                          std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

void write_series(std::ostream& os, const SeriesTable& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    require(row.size() == table.columns.size(), "records must be homogeneous");
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_real(row[c]);
    os << '\n';
  }
}

void emit_series(const SeriesTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
  write_series(out, table);
  if (!out) fail(ErrorCode::io, "write failed for " + path);
}

SeriesTable flow_series(const FlowTrajectory& tr) {
  SeriesTable t;
  t.columns = {"t", "inf_S", "F", "max_ricci_hessian_gap", "identity_residual_maxnorm"};
  MonotonicityReport rep = monotonicity_report(tr);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const MonotonicityRow& r = rep.rows[k];
    const bool inner = k > 0 && k + 1 < tr.states.size();
    const double res = inner ? max_abs(evolution_identity_residual(tr, k)) : nan;
    t.add_row({r.t, r.inf_s, r.f_functional, r.max_gap, res});
  }
  return t;
}

void write_flow_checkpoint(const std::string& path, const FlowState& s) {
  Snapshot snap;
  snap.grid = s.grid();
  if (s.geometry == FlowGeometry::sphere_profile) {
    snap.add("warp", s.warp);
  } else {
    const int d = s.metric.n;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) snap.add("g" + std::to_string(i + 1) + std::to_string(j + 1), s.metric.component(i, j));
  }
  snap.add("phi", s.phi);
  snap.add("S", s.S);
  save_snapshot(path, snap);
}

}  // namespace scl
