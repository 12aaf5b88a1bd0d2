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

#include "sclab/models.hpp"

#include <cmath>
#include <numbers>

#include "sclab/error.hpp"

namespace scl {

using std::numbers::pi;

ChartMetric flat_torus(const std::vector<int>& resolution,
                       const std::vector<double>& lengths) {
  int dim = static_cast<int>(resolution.size());
  ChartGrid g = make_chart(dim, resolution, lengths,
                           std::vector<Topology>(dim, Topology::periodic));
  return {g, identity_metric(g)};
}

ChartMetric sphere_latlong(int lat_nodes, int lon_nodes, double radius) {
  require(radius > 0.0, "sphere radius must be positive");
  ChartGrid g = make_chart(2, {lat_nodes, lon_nodes}, {pi, 2 * pi},
                           {Topology::boundary, Topology::periodic});
  const double r2 = radius * radius;
  return {g, sample_tensor(g, 2, [&](const Point& x) {
            double s = std::sin(x[0]);
            return Mat{r2, 0, 0, 0, r2 * s * s, 0, 0, 0, 0};
          })};
}

SymTensorField conformal_metric(const ScalarField& u) {
  SymTensorField m(u.grid, u.grid.dim());
  for (std::size_t n = 0; n < u.size(); ++n) {
    double w = std::exp(2.0 * u.values[n]);
    for (int i = 0; i < m.n; ++i) m.at(n, i, i) = w;
  }
  return m;
}

ChartMetric spherical_r3(int rho_nodes, int lat_nodes, int lon_nodes,
                         double rho_min, double rho_max) {
  require(rho_min > 0.0 && rho_max > rho_min, "spherical chart needs 0 < rho_min < rho_max");
  ChartGrid g = make_chart(3, {rho_nodes, lat_nodes, lon_nodes},
                           {rho_max - rho_min, pi, 2 * pi},
                           {Topology::boundary, Topology::boundary, Topology::periodic},
                           {rho_min, 0.0, 0.0});
  return {g, sample_tensor(g, 3, [](const Point& x) {
            double r2 = x[0] * x[0], s = std::sin(x[1]);
            return Mat{1, 0, 0, 0, r2, 0, 0, 0, r2 * s * s};
          })};
}

ChartMetric cylindrical_r3(int s_nodes, int alpha_nodes, int z_nodes,
                           double s_min, double s_max, double z_length) {
  require(s_min > 0.0 && s_max > s_min, "cylindrical chart needs 0 < s_min < s_max");
  ChartGrid g = make_chart(3, {s_nodes, alpha_nodes, z_nodes},
                           {s_max - s_min, 2 * pi, z_length},
                           {Topology::boundary, Topology::periodic, Topology::periodic},
                           {s_min, 0.0, 0.0});
  return {g, sample_tensor(g, 3, [](const Point& x) {
            return Mat{1, 0, 0, 0, x[0] * x[0], 0, 0, 0, 1};
          })};
}

SymTensorField metric_from_expressions(const ChartGrid& grid,
                                       const std::vector<Expression>& comps) {
  const int n = grid.dim();
  require(static_cast<int>(comps.size()) == SymTensorField::component_count(n),
          "metric needs n(n+1)/2 component expressions");
  SymTensorField m(grid, n);
  for (int c = 0; c < static_cast<int>(comps.size()); ++c)
    m.comps[c] = sample_expression(grid, comps[c]).values;
  return m;
}

ScalarField sample_expression(const ChartGrid& grid, const Expression& e) {
  if (e.max_coordinate() > grid.dim())
    fail(ErrorCode::invalid_argument,
         "expression '" + e.text() + "' references a coordinate beyond the chart dimension");
  return sample_field(grid, [&](const Point& x) { return e(x); });
}

}  // namespace scl
