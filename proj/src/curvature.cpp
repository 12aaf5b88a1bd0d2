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

#include "sclab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sclab/error.hpp"
#include "sclab/parallel.hpp"

namespace scl {

NodeMask CurvatureBundle::regular() const {
  NodeMask m(degenerate.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = !degenerate[i];
  return m;
}

namespace {

constexpr double kDegenerateRatio = 1e-12;

// Classifies a node: returns true when it is a coordinate singularity.
bool check_metric_node(const ChartGrid& g, const Mat& m, int n, std::size_t node) {
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(m[i * kMaxDim + i]));
  double det = determinant(m, n);
  if (g.on_boundary_edge(node) && det >= 0.0 &&
      det <= kDegenerateRatio * std::pow(scale, n))
    return true;
  if (!(min_leading_minor(m, n) > 0.0)) {
    Index idx = g.multi_index(node);
    std::string at;
    for (int a = 0; a < g.dim(); ++a) at += (a ? "," : "") + std::to_string(idx[a]);
    fail(ErrorCode::domain,
         "metric is not positive definite at node " + std::to_string(node) + " (" + at + ")");
  }
  return false;
}

}  // namespace

CurvatureBundle curvature_bundle(const SymTensorField& metric) {
  const ChartGrid& g = metric.grid;
  const int n = metric.n;
  require(n == g.dim(), "metric dimension must equal chart dimension");
  const int nc = SymTensorField::component_count(n);

  CurvatureBundle b;
  b.grid = g;
  b.n = n;
  b.inverse = SymTensorField(g, n);
  b.christoffel.assign(n * nc, std::vector<double>(g.size(), 0.0));
  b.ricci = SymTensorField(g, n);
  b.scalar = ScalarField(g);
  b.degenerate.assign(g.size(), 0);

  for (std::size_t node = 0; node < g.size(); ++node)
    b.degenerate[node] = check_metric_node(g, node_matrix(metric, node), n, node);

  parallel_for(g.size(), [&](std::size_t node) {
    if (b.degenerate[node]) return;
    Mat gm = node_matrix(metric, node);
    Mat gi = inverse(gm, n);
    auto G = [&](int i, int j) { return gi[i * kMaxDim + j]; };

    // dg[m][i][j] = d_m g_ij, ddg[m][l][i][j] = d_m d_l g_ij
    double dg[kMaxDim][kMaxDim][kMaxDim] = {};
    double ddg[kMaxDim][kMaxDim][kMaxDim][kMaxDim] = {};
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const auto& c = metric.comps[SymTensorField::packed(i, j, n)];
        for (int m = 0; m < n; ++m) {
          dg[m][i][j] = dg[m][j][i] = d1_at(g, c, node, m);
          for (int l = m; l < n; ++l) {
            double v = dd_at(g, c, node, m, l);
            ddg[m][l][i][j] = ddg[m][l][j][i] = v;
            ddg[l][m][i][j] = ddg[l][m][j][i] = v;
          }
        }
      }

    // Christoffel symbols of the first and second kind.
    double gl[kMaxDim][kMaxDim][kMaxDim] = {};  // Gamma_{l i j}
    double gu[kMaxDim][kMaxDim][kMaxDim] = {};  // Gamma^k_{i j}
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          gl[l][i][j] = 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += G(k, l) * gl[l][i][j];
          gu[k][i][j] = s;
        }

    // d_m Gamma^k_ij = -g^{ka} d_m g_ab Gamma^b_ij + g^{kl} d_m Gamma_lij
    auto dgamma = [&](int m, int k, int i, int j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) {
        double t = 0.0;
        for (int bb = 0; bb < n; ++bb) t += dg[m][a][bb] * gu[bb][i][j];
        s -= G(k, a) * t;
      }
      for (int l = 0; l < n; ++l)
        s += G(k, l) * 0.5 * (ddg[m][i][j][l] + ddg[m][j][i][l] - ddg[m][l][i][j]);
      return s;
    };

    double ric[kMaxDim][kMaxDim] = {};
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
          s += dgamma(k, k, i, j) - dgamma(j, k, i, k);
          for (int p = 0; p < n; ++p)
            s += gu[k][k][p] * gu[p][i][j] - gu[k][j][p] * gu[p][i][k];
        }
        ric[i][j] = s;
      }
    // Symmetrize: the contraction above is symmetric only up to rounding.
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
          s += dgamma(k, k, j, i) - dgamma(i, k, j, k);
          for (int p = 0; p < n; ++p)
            s += gu[k][k][p] * gu[p][j][i] - gu[k][i][p] * gu[p][j][k];
        }
        ric[i][j] = 0.5 * (ric[i][j] + s);
      }

    double r = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r += G(i, j) * (i <= j ? ric[i][j] : ric[j][i]);

    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        b.inverse.at(node, i, j) = 0.5 * (G(i, j) + G(j, i));
        b.ricci.at(node, i, j) = ric[i][j];
        for (int k = 0; k < n; ++k)
          b.christoffel[k * nc + SymTensorField::packed(i, j, n)][node] = gu[k][i][j];
      }
    b.scalar.values[node] = r;
  });
  return b;
}

PotentialDerivatives potential_derivatives(const SymTensorField& metric,
                                           const CurvatureBundle& bundle,
                                           const ScalarField& phi) {
  require_same_grid(metric.grid, phi.grid, "potential_derivatives");
  require_same_grid(metric.grid, bundle.grid, "potential_derivatives");
  const ChartGrid& g = phi.grid;
  const int n = metric.n;
  PotentialDerivatives out;
  out.gradient.assign(n, ScalarField(g));
  out.gradient_sq = ScalarField(g);
  out.laplacian = ScalarField(g);
  out.hessian = SymTensorField(g, n);
  parallel_for(g.size(), [&](std::size_t node) {
    double grad[kMaxDim] = {};
    for (int i = 0; i < n; ++i) {
      grad[i] = d1_at(g, phi.values, node, i);
      out.gradient[i].values[node] = grad[i];
    }
    if (bundle.degenerate[node]) return;
    double gsq = 0.0, lap = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double h = dd_at(g, phi.values, node, i, j);
        for (int k = 0; k < n; ++k) h -= bundle.gamma(node, k, i, j) * grad[k];
        out.hessian.at(node, i, j) = h;
        double w = i == j ? 1.0 : 2.0;
        double gij = bundle.inverse.at(node, i, j);
        lap += w * gij * h;
        gsq += w * gij * grad[i] * grad[j];
      }
    out.gradient_sq.values[node] = gsq;
    out.laplacian.values[node] = lap;
  });
  return out;
}

PotentialDerivatives potential_derivatives(const SymTensorField& metric,
                                           const ScalarField& phi) {
  return potential_derivatives(metric, curvature_bundle(metric), phi);
}

ScalarField laplacian(const CurvatureBundle& bundle, const ScalarField& f) {
  require_same_grid(bundle.grid, f.grid, "laplacian");
  const ChartGrid& g = f.grid;
  const int n = bundle.n;
  ScalarField out(g);
  parallel_for(g.size(), [&](std::size_t node) {
    if (bundle.degenerate[node]) return;
    double grad[kMaxDim] = {};
    for (int i = 0; i < n; ++i) grad[i] = d1_at(g, f.values, node, i);
    double lap = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double h = dd_at(g, f.values, node, i, j);
        for (int k = 0; k < n; ++k) h -= bundle.gamma(node, k, i, j) * grad[k];
        lap += (i == j ? 1.0 : 2.0) * bundle.inverse.at(node, i, j) * h;
      }
    out.values[node] = lap;
  });
  return out;
}

double norm_sq(const SymTensorField& inv, const SymTensorField& t, std::size_t node) {
  const int n = t.n;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
          s += inv.at(node, i, a) * inv.at(node, j, c) * t.at(node, i, j) * t.at(node, a, c);
  return s;
}

ScalarField stabilized_scalar(const SymTensorField& metric,
                              const CurvatureBundle& bundle,
                              const ScalarField& phi) {
  PotentialDerivatives pd = potential_derivatives(metric, bundle, phi);
  ScalarField s(phi.grid);
  for (std::size_t i = 0; i < s.size(); ++i)
    s.values[i] = -2.0 * pd.laplacian.values[i] - pd.gradient_sq.values[i] +
                  bundle.scalar.values[i];
  return s;
}

ScalarField stabilized_scalar(const SymTensorField& metric, const ScalarField& phi) {
  return stabilized_scalar(metric, curvature_bundle(metric), phi);
}

double f_functional(const SymTensorField& metric, const ScalarField& phi) {
  ScalarField s = stabilized_scalar(metric, phi);
  ScalarField integrand(phi.grid);
  for (std::size_t i = 0; i < s.size(); ++i)
    integrand.values[i] = s.values[i] * std::exp(phi.values[i]);
  return integrate(integrand, metric);
}

WarpedResidual warped_residual(const SymTensorField& base_metric,
                               const ScalarField& phi, int fiber_dim) {
  require(fiber_dim == 1 || fiber_dim == 2, "warped product fiber dimension must be 1 or 2");
  const ChartGrid& base = base_metric.grid;
  require_same_grid(base, phi.grid, "warped_residual");
  const int m = base.dim();
  if (m + fiber_dim > kMaxDim)
    fail(ErrorCode::invalid_argument, "warped product chart exceeds dimension 3");

  std::vector<Axis> fiber(fiber_dim, Axis{kMinResolution, 2.0 * M_PI, Topology::periodic, 0.0});
  ChartGrid prod = base.with_axes(fiber);
  const int pn = prod.dim();
  std::size_t fiber_nodes = prod.size() / base.size();

  SymTensorField pm(prod, pn);
  for (std::size_t node = 0; node < prod.size(); ++node) {
    std::size_t bnode = node / fiber_nodes;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) pm.at(node, i, j) = base_metric.at(bnode, i, j);
    double warp = std::exp(2.0 * phi.values[bnode] / fiber_dim);
    for (int f = m; f < pn; ++f) pm.at(node, f, f) = warp;
  }
  CurvatureBundle pb = curvature_bundle(pm);

  CurvatureBundle bb = curvature_bundle(base_metric);
  PotentialDerivatives pd = potential_derivatives(base_metric, bb, phi);
  const double c = (fiber_dim + 1.0) / fiber_dim;

  WarpedResidual out{ScalarField(base), 0.0};
  for (std::size_t bnode = 0; bnode < base.size(); ++bnode) {
    double lo = pb.scalar.values[bnode * fiber_nodes], hi = lo;
    for (std::size_t f = 1; f < fiber_nodes; ++f) {
      double v = pb.scalar.values[bnode * fiber_nodes + f];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.fiber_spread = std::max(out.fiber_spread, hi - lo);
    if (bb.degenerate[bnode]) continue;
    double predicted = bb.scalar.values[bnode] - 2.0 * pd.laplacian.values[bnode] -
                       c * pd.gradient_sq.values[bnode];
    out.residual.values[bnode] = pb.scalar.values[bnode * fiber_nodes] - predicted;
  }
  if (out.fiber_spread > 1e-10)
    fail(ErrorCode::domain, "warped product curvature varies along the fiber (spread " +
                                std::to_string(out.fiber_spread) + ")");
  return out;
}

}  // namespace scl
