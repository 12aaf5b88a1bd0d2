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


#ifndef SCLAB_H_
#define SCLAB_H_

#include <stddef.h>

#if defined(SCLAB_BUILDING_LIBRARY)
#define SCL_API __attribute__((visibility("default")))
#else
#define SCL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum scl_status {
  SCL_OK = 0,
  SCL_ERR_INVALID_ARGUMENT = 1,
  SCL_ERR_DOMAIN = 2,
  SCL_ERR_CONVERGENCE = 3,
  SCL_ERR_IO = 4,
  SCL_ERR_PARSE = 5,
  SCL_ERR_INTERNAL = 6
} scl_status;

typedef struct scl_grid scl_grid;
typedef struct scl_field scl_field;
typedef struct scl_metric scl_metric;

/* Message of the last failed call on this thread ("" if none). */
SCL_API const char* scl_last_error(void);
SCL_API const char* scl_version(void);

/* periodic[i] != 0 marks axis i periodic; otherwise it has boundary. */
SCL_API scl_status scl_grid_create(int dim, const int* nodes, const double* extents, const int* periodic,
                                   scl_grid** out);
SCL_API void scl_grid_destroy(scl_grid* grid);
SCL_API scl_status scl_grid_size(const scl_grid* grid, size_t* out);
SCL_API scl_status scl_grid_dim(const scl_grid* grid, int* out);
/* Writes dim coordinates of the node. */
SCL_API scl_status scl_grid_point(const scl_grid* grid, size_t node, double* coords);

/* values may be NULL for a zero field; otherwise it holds grid-size entries. */
SCL_API scl_status scl_field_create(const scl_grid* grid, const double* values, scl_field** out);
SCL_API scl_status scl_field_from_expression(const scl_grid* grid, const char* expression, scl_field** out);
SCL_API void scl_field_destroy(scl_field* field);
SCL_API scl_status scl_field_size(const scl_field* field, size_t* out);
SCL_API scl_status scl_field_values(const scl_field* field, double* out, size_t capacity);

SCL_API scl_status scl_metric_identity(const scl_grid* grid, scl_metric** out);
/* Packed upper-triangular components g11, g12, ..., gnn. */
SCL_API scl_status scl_metric_from_expressions(const scl_grid* grid, const char* const* components, size_t count,
                                               scl_metric** out);
SCL_API scl_status scl_metric_conformal(const scl_field* u, scl_metric** out);
SCL_API scl_status scl_metric_sphere(int lat_nodes, int lon_nodes, double radius, scl_metric** out);
SCL_API void scl_metric_destroy(scl_metric* metric);
SCL_API scl_status scl_metric_grid(const scl_metric* metric, scl_grid** out);

SCL_API scl_status scl_scalar_curvature(const scl_metric* metric, scl_field** out);
SCL_API scl_status scl_stabilized_scalar(const scl_metric* metric, const scl_field* phi, scl_field** out);
SCL_API scl_status scl_f_functional(const scl_metric* metric, const scl_field* phi, double* out);

/* Runs the command-line front end; exit_code receives 0, 1 or 2. */
SCL_API scl_status scl_run(int argc, const char* const* argv, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif  // SCLAB_H_
