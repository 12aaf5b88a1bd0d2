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

#include <vector>

#include "sclab/chart.hpp"

namespace scl {

/// Christoffel symbols, Ricci tensor and scalar curvature of a sampled
/// metric. Nodes where the chart is coordinate-singular (zero determinant on
/// a Boundary edge row, e.g. the poles of a latitude-longitude chart) are
/// flagged in `degenerate` and carry zeros.
struct CurvatureBundle {
  ChartGrid grid;
  int n = 0;
  SymTensorField inverse;                     // g^{ij}
  std::vector<std::vector<double>> christoffel;  // [k * ncomp + packed(i,j)]
  SymTensorField ricci;
  ScalarField scalar;
  NodeMask degenerate;

  double gamma(std::size_t node, int k, int i, int j) const {
    return christoffel[k * SymTensorField::component_count(n) +
                       SymTensorField::packed(i, j, n)][node];
  }
  /// Nodes that are not degenerate.
  NodeMask regular() const;
};

CurvatureBundle curvature_bundle(const SymTensorField& metric);

struct PotentialDerivatives {
  std::vector<ScalarField> gradient;  // coordinate derivatives d_i phi
  ScalarField gradient_sq;            // |grad phi|^2
  ScalarField laplacian;              // Delta phi
  SymTensorField hessian;             // D^2 phi, Christoffel-corrected
};

PotentialDerivatives potential_derivatives(const SymTensorField& metric,
                                           const CurvatureBundle& bundle,
                                           const ScalarField& phi);
PotentialDerivatives potential_derivatives(const SymTensorField& metric,
                                           const ScalarField& phi);

/// Laplace-Beltrami operator applied to f.
ScalarField laplacian(const CurvatureBundle& bundle, const ScalarField& f);

/// |T|^2 = g^{ia} g^{jb} T_ij T_ab at one node.
double norm_sq(const SymTensorField& inverse, const SymTensorField& t,
               std::size_t node);

/// S = -2 Delta phi - |grad phi|^2 + R.
ScalarField stabilized_scalar(const SymTensorField& metric,
                              const CurvatureBundle& bundle,
                              const ScalarField& phi);
ScalarField stabilized_scalar(const SymTensorField& metric,
                              const ScalarField& phi);

/// F = integral of S e^phi dvol, deterministic reduction.
double f_functional(const SymTensorField& metric, const ScalarField& phi);

struct WarpedResidual {
  ScalarField residual;  // on base nodes
  double fiber_spread = 0.0;
};

/// Curvature of g + e^{2 phi / N} g_flat(T^N) computed directly on the
/// product chart, minus R - 2 Delta phi - (N+1)/N |grad phi|^2.
WarpedResidual warped_residual(const SymTensorField& base_metric,
                               const ScalarField& phi, int fiber_dim);

}  // namespace scl
