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

#include <memory>
#include <string>
#include <vector>

#include "sclab/chart.hpp"
#include "sclab/curvature.hpp"

namespace scl {

enum class FlowScheme { euler = 1, midpoint = 2 };

/// Chart: a 2-D metric field. SphereProfile: the rotationally symmetric
/// metric e^{2w(theta)} (d theta^2 + sin^2 theta d varphi^2) sampled on [0, pi].
enum class FlowGeometry { chart, sphere_profile };

struct FlowState {
  double t = 0.0;
  FlowGeometry geometry = FlowGeometry::chart;
  SymTensorField metric;  // chart
  ScalarField warp;       // sphere profile
  ScalarField phi;

  std::shared_ptr<const CurvatureBundle> bundle;  // chart
  ScalarField scalar;  // R
  ScalarField S;       // -2 Delta phi - |grad phi|^2 + R
  ScalarField gap_sq;  // |Ric - D^2 phi|^2
  ScalarField laplacian_phi;

  const ChartGrid& grid() const { return phi.grid; }
  /// Nodes where curvature is assembled (excludes degenerate chart rows).
  NodeMask regular() const;
};

FlowState make_chart_state(const SymTensorField& metric, const ScalarField& phi, double t = 0.0);
/// Round sphere of the given radius, optionally perturbed by a warp profile.
FlowState make_sphere_state(int nodes, double radius, const ScalarField& phi,
                            const ScalarField& warp_perturbation = {}, double t = 0.0);

/// Laplacian of f with respect to the state's metric.
ScalarField state_laplacian(const FlowState& s, const ScalarField& f);
/// Weighted integral of S e^phi.
double state_f_functional(const FlowState& s);

double stability_bound(const FlowState& s);

FlowState step_coupled_flow(const FlowState& s, double dt, FlowScheme scheme);

struct FlowTrajectory {
  std::vector<FlowState> states;
  double dt = 0.0;
  FlowScheme scheme = FlowScheme::euler;
};

FlowTrajectory run_coupled_flow(const FlowState& initial, double dt, int steps, FlowScheme scheme);

/// dS/dt - Delta S - 2|Ric - D^2 phi|^2 at an interior trajectory index.
ScalarField evolution_identity_residual(const FlowTrajectory& tr, std::size_t index);

struct MonotonicityRow {
  double t = 0.0;
  double inf_s = 0.0;
  double f_functional = 0.0;
  double max_gap = 0.0;  // sup norm of |Ric - D^2 phi|
  double max_abs_s = 0.0;
  bool rigid = false;
};

struct MonotonicityReport {
  std::vector<MonotonicityRow> rows;
  bool monotone = true;
  long first_violation = -1;  // index k with inf S(t_k) < inf S(t_{k-1}) - slack
  bool rigid_everywhere = false;
};

MonotonicityReport monotonicity_report(const FlowTrajectory& tr, double slack = 1e-8,
                                       double rigidity_tol = 1e-8);

/// (d/dt + Delta - R)(S e^phi) - 2 e^phi |Ric - D^2 phi|^2 with all time
/// derivatives expanded under the backward potential equation; chart states.
ScalarField adjoint_supersolution_residual(const FlowState& s);

}  // namespace scl
