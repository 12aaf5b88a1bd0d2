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

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "sclab/chart.hpp"
#include "sclab/curvature.hpp"

namespace scl {

/// Ambient chart together with its assembled curvature.
struct AmbientGeometry {
  SymTensorField metric;
  CurvatureBundle bundle;

  static std::shared_ptr<const AmbientGeometry> make(const SymTensorField& metric);
  const ChartGrid& grid() const { return metric.grid; }
};

/// Graph hypersurface x_k = height(y) over the chart with axis k removed.
/// Ambient quantities are evaluated at graph points by interpolation along
/// the height axis. Tensor fields indexed by ambient coordinates live on the
/// slice grid with tensor dimension equal to the ambient dimension.
struct HypersurfaceEmbedding {
  std::shared_ptr<const AmbientGeometry> ambient;
  int height_axis = 0;
  int orientation = 1;  // +1: normal points toward increasing height
  ChartGrid slice;
  ScalarField height;

  SymTensorField ambient_metric;   // g_ab at graph points
  SymTensorField ambient_inverse;  // g^ab at graph points
  SymTensorField ambient_ricci;
  ScalarField ambient_scalar;
  std::vector<std::vector<double>> tangent;  // [alpha * dim + a]
  std::vector<ScalarField> normal;           // nu^a
  std::vector<ScalarField> normal_covector;  // nu_a
  SymTensorField induced_metric;
  SymTensorField second_fundamental;
  ScalarField mean_curvature;
  NodeMask degenerate;

  // interpolation stencil along the height axis, per slice node
  std::vector<std::array<std::size_t, 4>> interp_nodes;
  std::vector<std::array<double, 4>> interp_weights;

  int ambient_dim() const { return ambient->grid().dim(); }
  int slice_axis_to_ambient(int alpha) const {
    return alpha < height_axis ? alpha : alpha + 1;
  }
  /// Nodes of the slice that are neither degenerate nor on a boundary row.
  NodeMask interior() const;
  NodeMask regular() const;
};

HypersurfaceEmbedding embed_graph(std::shared_ptr<const AmbientGeometry> ambient,
                                  int height_axis, const ScalarField& height,
                                  int orientation = 1);
HypersurfaceEmbedding embed_graph(const SymTensorField& ambient_metric,
                                  int height_axis, const ScalarField& height,
                                  int orientation = 1);

/// Coordinate slice x_k = value.
HypersurfaceEmbedding embed_slice(std::shared_ptr<const AmbientGeometry> ambient,
                                  int height_axis, double value,
                                  int orientation = 1);

/// Values of an ambient field at the graph points.
ScalarField restrict_to(const HypersurfaceEmbedding& s, const ScalarField& f);

struct AmbientDerivatives {
  ScalarField value;
  std::vector<ScalarField> gradient;  // d_a f at graph points
  ScalarField laplacian;
  ScalarField gradient_sq;
  SymTensorField hessian;             // D^2 f, ambient indices
};

AmbientDerivatives ambient_derivatives(const HypersurfaceEmbedding& s,
                                       const ScalarField& f);

/// <grad f, nu>
ScalarField normal_derivative(const HypersurfaceEmbedding& s,
                              const AmbientDerivatives& d);
/// (D^2 f)(nu, nu)
ScalarField normal_hessian(const HypersurfaceEmbedding& s,
                           const AmbientDerivatives& d);
/// ric_M(nu, nu)
ScalarField normal_ricci(const HypersurfaceEmbedding& s);
/// |h|^2 against the induced metric
ScalarField second_fundamental_sq(const HypersurfaceEmbedding& s);

ScalarField weighted_mean_curvature(const HypersurfaceEmbedding& s,
                                    const ScalarField& phi);

enum class GaussForm { corrected, printed };

struct GaussTerms {
  ScalarField lhs;
  ScalarField rhs;
  ScalarField residual;
  NodeMask mask;  // nodes where the residual is reported
};

GaussTerms gauss_identity(const HypersurfaceEmbedding& s, const ScalarField& rho,
                          const ScalarField& u,
                          GaussForm form = GaussForm::corrected);

double weighted_area(const HypersurfaceEmbedding& s, const ScalarField& phi);

struct GraphFoliation {
  std::vector<double> t;
  std::vector<HypersurfaceEmbedding> slices;
  std::vector<ScalarField> lapse;
  std::vector<ScalarField> weighted_h;
};

/// Foliation by graphs over a shared slice grid. When rates is empty the
/// normal speed uses differences of neighbouring heights.
GraphFoliation make_foliation(std::shared_ptr<const AmbientGeometry> ambient,
                              int height_axis, const std::vector<double>& t,
                              const std::vector<ScalarField>& heights,
                              const std::vector<ScalarField>& rates,
                              const ScalarField& phi, int orientation = 1);

struct VariationRow {
  double t = 0.0;
  double weighted_area = 0.0;
  double da_dt = 0.0;
  double first_variation = 0.0;
  double difference = 0.0;
};

std::vector<VariationRow> weighted_area_variation(const GraphFoliation& f,
                                                  const ScalarField& phi);

void write_variation_report(const std::string& path,
                            const std::vector<VariationRow>& rows);

struct BoundaryTrace {
  std::vector<std::size_t> nodes;  // slice nodes on boundary rows
  std::vector<double> lhs;         // <grad log rho, eta> + H_dSigma
  std::vector<double> rhs;         // <grad phi, eta> + H_dM
  std::vector<double> residual;
};

BoundaryTrace boundary_trace_identity(const HypersurfaceEmbedding& s,
                                      const ScalarField& rho,
                                      const ScalarField& phi);

/// Mean curvature of the coordinate level sets x_axis = const, computed as
/// the divergence of the unit normal field grad x_axis / |grad x_axis|.
ScalarField level_set_mean_curvature(const SymTensorField& metric, int axis);

}  // namespace scl
