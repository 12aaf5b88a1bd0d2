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

#include "sclab.h"

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "sclab/chart.hpp"
#include "sclab/curvature.hpp"
#include "sclab/error.hpp"
#include "sclab/experiment.hpp"
#include "sclab/expr.hpp"
#include "sclab/models.hpp"

struct scl_grid {
  scl::ChartGrid grid;
};
struct scl_field {
  scl::ScalarField field;
};
struct scl_metric {
  scl::SymTensorField metric;
};

namespace {

thread_local std::string last_error;

scl_status status_of(scl::ErrorCode c) {
  switch (c) {
    case scl::ErrorCode::invalid_argument: return SCL_ERR_INVALID_ARGUMENT;
    case scl::ErrorCode::domain: return SCL_ERR_DOMAIN;
    case scl::ErrorCode::convergence: return SCL_ERR_CONVERGENCE;
    case scl::ErrorCode::io: return SCL_ERR_IO;
    case scl::ErrorCode::parse: return SCL_ERR_PARSE;
  }
  return SCL_ERR_INTERNAL;
}

template <class F>
scl_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return SCL_OK;
  } catch (const scl::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return SCL_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) scl::fail(scl::ErrorCode::invalid_argument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* scl_last_error(void) { return last_error.c_str(); }
const char* scl_version(void) { return "0.1.0"; }

scl_status scl_grid_create(int dim, const int* nodes, const double* extents, const int* periodic, scl_grid** out) {
  return guard([&] {
    need(nodes, "nodes");
    need(extents, "extents");
    need(periodic, "periodic");
    need(out, "out");
    scl::require(dim >= 1 && dim <= 3, "dimension must be 1, 2 or 3");
    std::vector<int> n(nodes, nodes + dim);
    std::vector<double> e(extents, extents + dim);
    std::vector<scl::Topology> t;
    for (int i = 0; i < dim; ++i) t.push_back(periodic[i] ? scl::Topology::periodic : scl::Topology::boundary);
    *out = new scl_grid{scl::make_chart(dim, n, e, t)};
  });
}

void scl_grid_destroy(scl_grid* grid) { delete grid; }

scl_status scl_grid_size(const scl_grid* grid, size_t* out) {
  return guard([&] {
    need(grid, "grid");
    need(out, "out");
    *out = grid->grid.size();
  });
}

scl_status scl_grid_dim(const scl_grid* grid, int* out) {
  return guard([&] {
    need(grid, "grid");
    need(out, "out");
    *out = grid->grid.dim();
  });
}

scl_status scl_grid_point(const scl_grid* grid, size_t node, double* coords) {
  return guard([&] {
    need(grid, "grid");
    need(coords, "coords");
    scl::require(node < grid->grid.size(), "node index out of range");
    scl::Point p = grid->grid.point(node);
    for (int a = 0; a < grid->grid.dim(); ++a) coords[a] = p[a];
  });
}

scl_status scl_field_create(const scl_grid* grid, const double* values, scl_field** out) {
  return guard([&] {
    need(grid, "grid");
    need(out, "out");
    scl::ScalarField f(grid->grid, 0.0);
    if (values) std::memcpy(f.values.data(), values, f.values.size() * sizeof(double));
    *out = new scl_field{std::move(f)};
  });
}

scl_status scl_field_from_expression(const scl_grid* grid, const char* expression, scl_field** out) {
  return guard([&] {
    need(grid, "grid");
    need(expression, "expression");
    need(out, "out");
    *out = new scl_field{scl::sample_expression(grid->grid, scl::Expression::parse(expression))};
  });
}

void scl_field_destroy(scl_field* field) { delete field; }

scl_status scl_field_size(const scl_field* field, size_t* out) {
  return guard([&] {
    need(field, "field");
    need(out, "out");
    *out = field->field.values.size();
  });
}

scl_status scl_field_values(const scl_field* field, double* out, size_t capacity) {
  return guard([&] {
    need(field, "field");
    need(out, "out");
    scl::require(capacity >= field->field.values.size(), "output buffer too small");
    std::memcpy(out, field->field.values.data(), field->field.values.size() * sizeof(double));
  });
}

scl_status scl_metric_identity(const scl_grid* grid, scl_metric** out) {
  return guard([&] {
    need(grid, "grid");
    need(out, "out");
    *out = new scl_metric{scl::identity_metric(grid->grid)};
  });
}

scl_status scl_metric_from_expressions(const scl_grid* grid, const char* const* components, size_t count,
                                       scl_metric** out) {
  return guard([&] {
    need(grid, "grid");
    need(components, "components");
    need(out, "out");
    std::vector<scl::Expression> comps;
    for (size_t i = 0; i < count; ++i) {
      need(components[i], "component expression");
      comps.push_back(scl::Expression::parse(components[i]));
    }
    *out = new scl_metric{scl::metric_from_expressions(grid->grid, comps)};
  });
}

scl_status scl_metric_conformal(const scl_field* u, scl_metric** out) {
  return guard([&] {
    need(u, "u");
    need(out, "out");
    *out = new scl_metric{scl::conformal_metric(u->field)};
  });
}

scl_status scl_metric_sphere(int lat_nodes, int lon_nodes, double radius, scl_metric** out) {
  return guard([&] {
    need(out, "out");
    *out = new scl_metric{scl::sphere_latlong(lat_nodes, lon_nodes, radius).metric};
  });
}

void scl_metric_destroy(scl_metric* metric) { delete metric; }

scl_status scl_metric_grid(const scl_metric* metric, scl_grid** out) {
  return guard([&] {
    need(metric, "metric");
    need(out, "out");
    *out = new scl_grid{metric->metric.grid};
  });
}

scl_status scl_scalar_curvature(const scl_metric* metric, scl_field** out) {
  return guard([&] {
    need(metric, "metric");
    need(out, "out");
    *out = new scl_field{scl::curvature_bundle(metric->metric).scalar};
  });
}

scl_status scl_stabilized_scalar(const scl_metric* metric, const scl_field* phi, scl_field** out) {
  return guard([&] {
    need(metric, "metric");
    need(phi, "phi");
    need(out, "out");
    *out = new scl_field{scl::stabilized_scalar(metric->metric, phi->field)};
  });
}

scl_status scl_f_functional(const scl_metric* metric, const scl_field* phi, double* out) {
  return guard([&] {
    need(metric, "metric");
    need(phi, "phi");
    need(out, "out");
    *out = scl::f_functional(metric->metric, phi->field);
  });
}

scl_status scl_run(int argc, const char* const* argv, int* exit_code) {
  return guard([&] {
    need(exit_code, "exit_code");
    scl::require(argc >= 0 && (argc == 0 || argv), "argv is null");
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    *exit_code = scl::run_cli(args, std::cout, std::cerr);
  });
}

}  // extern "C"
