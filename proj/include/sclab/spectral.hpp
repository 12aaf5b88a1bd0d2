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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sclab/chart.hpp"
#include "sclab/hypersurface.hpp"

namespace scl {

/// Sparse node-coupling table in compressed row form.
struct CouplingTable {
  std::vector<std::size_t> row_start;  // size n + 1
  std::vector<std::size_t> column;
  std::vector<double> value;

  std::size_t rows() const { return row_start.empty() ? 0 : row_start.size() - 1; }
  double entry(std::size_t i, std::size_t j) const;
  std::vector<double> apply(const std::vector<double>& u) const;
};

/// Weighted Jacobi operator
///   L u = -Delta u - <grad log rho, grad u> + c u,
///   c = -ric(nu,nu) - |h|^2 + (D^2 log rho)(nu,nu),
/// with the Robin closure <grad u, eta> = q u on boundary rows.
struct SpectralProblem {
  ChartGrid grid;
  CouplingTable op;
  ScalarField weight;     // rho restricted to the slice
  ScalarField potential;  // c
  ScalarField robin;      // q, used on boundary rows
  std::vector<double> mass;  // rho sqrt(det gamma) times cell volume

  double inner(const std::vector<double>& u, const std::vector<double>& v) const;
  double norm(const std::vector<double>& u) const;
  /// Copy with a constant added to the zeroth-order coefficient.
  SpectralProblem shifted(double c) const;
};

/// Robin data h_dM(nu, nu) on the slice, with dM the boundary rows of the
/// ambient axes that remain in the slice.
ScalarField boundary_normal_curvature(const HypersurfaceEmbedding& s);

SpectralProblem assemble_jacobi(const HypersurfaceEmbedding& s, const ScalarField& rho,
                                const std::optional<ScalarField>& robin = std::nullopt);

struct EigenPair {
  double eigenvalue = 0.0;
  ScalarField eigenfunction;
  double residual = 0.0;
  int iterations = 0;
};

struct EigenOptions {
  int max_iterations = 10000;
  double tolerance = 1e-10;
  double residual_tolerance = 1e-8;
};

EigenPair principal_eigenpair(const SpectralProblem& p, const EigenOptions& opt = {});

/// Lower bound of the spectrum from row sums of the coupling table.
double gershgorin_lower_bound(const CouplingTable& op);

struct EigenReportRow {
  std::string problem;
  double eigenvalue = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double u_min = 0.0;
  double u_max = 0.0;
};

EigenReportRow eigen_report_row(const std::string& id, const EigenPair& e);
void write_eigen_report(const std::string& path, const std::vector<EigenReportRow>& rows);

struct LapseSlice {
  double t = 0.0;
  double mu = 0.0;         // slice mean of the weighted mean curvature
  double mu_spread = 0.0;  // max - min over the slice
  double dmu_dt = 0.0;
  ScalarField residual;
  NodeMask mask;
  double max_residual = 0.0;
};

/// Residual of the lapse Jacobi equation on interior slices of a foliation.
std::vector<LapseSlice> lapse_residual(const GraphFoliation& f, const ScalarField& phi);

}  // namespace scl
