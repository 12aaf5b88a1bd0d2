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
#include <cstring>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sclab.h"

TEST_CASE("grid and field handles") {
  const int nodes[2] = {16, 8};
  const double extents[2] = {1.0, 2.0};
  const int periodic[2] = {1, 0};
  scl_grid* g = nullptr;
  REQUIRE(scl_grid_create(2, nodes, extents, periodic, &g) == SCL_OK);
  size_t n = 0;
  int dim = 0;
  CHECK(scl_grid_size(g, &n) == SCL_OK);
  CHECK(scl_grid_dim(g, &dim) == SCL_OK);
  CHECK(n == 128);
  CHECK(dim == 2);
  double x[2];
  CHECK(scl_grid_point(g, 8, x) == SCL_OK);
  CHECK(x[0] == doctest::Approx(1.0 / 16));
  CHECK(x[1] == 0.0);
  CHECK(scl_grid_point(g, 1000, x) == SCL_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(scl_last_error()) > 0);

  scl_field* f = nullptr;
  REQUIRE(scl_field_from_expression(g, "x1 + 2*x2", &f) == SCL_OK);
  CHECK(std::strlen(scl_last_error()) == 0);
  std::vector<double> v(n);
  CHECK(scl_field_values(f, v.data(), v.size()) == SCL_OK);
  CHECK(v[8] == doctest::Approx(1.0 / 16));
  CHECK(v[1] == doctest::Approx(4.0 / 7));
  CHECK(scl_field_values(f, v.data(), 3) == SCL_ERR_INVALID_ARGUMENT);
  scl_field_destroy(f);

  scl_field* bad = nullptr;
  CHECK(scl_field_from_expression(g, "sin(", &bad) == SCL_ERR_PARSE);
  CHECK(bad == nullptr);
  scl_grid_destroy(g);
  CHECK(scl_grid_create(2, nodes, extents, nullptr, &g) == SCL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("curvature through the C interface") {
  scl_metric* m = nullptr;
  REQUIRE(scl_metric_sphere(65, 128, 1.0, &m) == SCL_OK);
  scl_grid* g = nullptr;
  REQUIRE(scl_metric_grid(m, &g) == SCL_OK);
  scl_field* phi = nullptr;
  REQUIRE(scl_field_create(g, nullptr, &phi) == SCL_OK);
  double F = 0.0;
  CHECK(scl_f_functional(m, phi, &F) == SCL_OK);
  CHECK(std::abs(F - 8 * std::numbers::pi) <= 1e-2 * 8 * std::numbers::pi);
  scl_field* R = nullptr;
  REQUIRE(scl_scalar_curvature(m, &R) == SCL_OK);
  std::vector<double> r(65 * 128);
  CHECK(scl_field_values(R, r.data(), r.size()) == SCL_OK);
  CHECK(std::abs(r[32 * 128] - 2.0) <= 1e-2);
  scl_field_destroy(R);
  scl_field_destroy(phi);
  scl_grid_destroy(g);
  scl_metric_destroy(m);

  const int nodes[2] = {8, 8};
  const double extents[2] = {1.0, 1.0};
  const int periodic[2] = {1, 1};
  REQUIRE(scl_grid_create(2, nodes, extents, periodic, &g) == SCL_OK);
  const char* comps[3] = {"1", "2", "1"};
  CHECK(scl_metric_from_expressions(g, comps, 3, &m) == SCL_OK);
  REQUIRE(scl_field_create(g, nullptr, &phi) == SCL_OK);
  scl_field* S = nullptr;
  CHECK(scl_stabilized_scalar(m, phi, &S) == SCL_ERR_DOMAIN);
  scl_field_destroy(phi);
  scl_metric_destroy(m);
  scl_grid_destroy(g);
}

TEST_CASE("command line entry point") {
  int code = -1;
  const char* help[] = {"sclab", "--help"};
  CHECK(scl_run(2, help, &code) == SCL_OK);
  CHECK(code == 0);
  const char* bad[] = {"sclab", "nonsense"};
  CHECK(scl_run(2, bad, &code) == SCL_OK);
  CHECK(code == 1);
  CHECK(scl_run(2, bad, nullptr) == SCL_ERR_INVALID_ARGUMENT);
}
