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

// Closed-form model metrics on structured charts.

#include <vector>

#include "sclab/chart.hpp"
#include "sclab/expr.hpp"

namespace scl {

struct ChartMetric {
  ChartGrid grid;
  SymTensorField metric;
};

/// Flat torus with the given side lengths, all axes periodic.
ChartMetric flat_torus(const std::vector<int>& resolution,
                       const std::vector<double>& lengths);

/// Round sphere of radius r in latitude (Boundary, [0, pi]) by longitude
/// (Periodic, [0, 2 pi)) coordinates; the pole rows are coordinate-singular.
ChartMetric sphere_latlong(int lat_nodes, int lon_nodes, double radius);

/// e^{2u} times the flat metric on the grid of u.
SymTensorField conformal_metric(const ScalarField& u);

/// Flat R^3 in spherical coordinates (rho, theta, phi) on
/// [rho_min, rho_max] x [0, pi] x [0, 2 pi).
ChartMetric spherical_r3(int rho_nodes, int lat_nodes, int lon_nodes,
                         double rho_min, double rho_max);

/// Flat R^2 x S^1 in cylindrical coordinates (s, alpha, z) on
/// [s_min, s_max] x [0, 2 pi) x [0, z_length).
ChartMetric cylindrical_r3(int s_nodes, int alpha_nodes, int z_nodes,
                           double s_min, double s_max, double z_length);

/// Metric from packed upper-triangular component expressions
/// (g11, g12, ..., g1n, g22, ..., gnn).
SymTensorField metric_from_expressions(const ChartGrid& grid,
                                       const std::vector<Expression>& comps);

ScalarField sample_expression(const ChartGrid& grid, const Expression& e);

}  // namespace scl
