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

#include "sclab/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "sclab/error.hpp"
#include "sclab/parallel.hpp"
#include "sclab/snapshot.hpp"

namespace scl {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string slice_node_name(const ChartGrid& g, std::size_t node) {
  Index idx = g.multi_index(node);
  std::string s = "slice node " + std::to_string(node) + " (";
  for (int a = 0; a < g.dim(); ++a) s += (a ? "," : "") + std::to_string(idx[a]);
  return s + ")";
}

Index insert_axis(const Index& slice_idx, int slice_dim, int k, int value) {
  Index out{};
  for (int a = 0, b = 0; a <= slice_dim; ++a)
    out[a] = a == k ? value : slice_idx[b++];
  return out;
}

// Cubic Lagrange weights on four consecutive nodes at local coordinate tau.
std::array<double, 4> cubic_weights(double tau) {
  return {-(tau - 1) * (tau - 2) * (tau - 3) / 6.0, tau * (tau - 2) * (tau - 3) / 2.0,
          -tau * (tau - 1) * (tau - 3) / 2.0, tau * (tau - 1) * (tau - 2) / 6.0};
}

void plan_interpolation(HypersurfaceEmbedding& s) {
  const ChartGrid& amb = s.ambient->grid();
  const Axis& ax = amb.axis(s.height_axis);
  const int n = ax.nodes;
  const double h = ax.spacing();
  s.interp_nodes.resize(s.slice.size());
  s.interp_weights.resize(s.slice.size());
  for (std::size_t node = 0; node < s.slice.size(); ++node) {
    double x = s.height[node];
    if (!std::isfinite(x))
      fail(ErrorCode::domain, "height is not finite at " + slice_node_name(s.slice, node));
    double sr = (x - ax.origin) / h;
    int i0;
    if (ax.topology == Topology::periodic) {
      i0 = static_cast<int>(std::floor(sr)) - 1;
    } else {
      const double tol = 1e-9;
      if (sr < -tol || sr > n - 1 + tol)
        fail(ErrorCode::domain, "graph exits chart at " + slice_node_name(s.slice, node));
      i0 = std::clamp(static_cast<int>(std::floor(sr)) - 1, 0, n - 4);
    }
    s.interp_weights[node] = cubic_weights(sr - i0);
    Index sidx = s.slice.multi_index(node);
    for (int m = 0; m < 4; ++m) {
      int i = i0 + m;
      if (ax.topology == Topology::periodic) i = ((i % n) + n) % n;
      s.interp_nodes[node][m] = amb.node(insert_axis(sidx, s.slice.dim(), s.height_axis, i));
    }
  }
}

double interp(const HypersurfaceEmbedding& s, std::span<const double> v, std::size_t node) {
  const auto& nn = s.interp_nodes[node];
  const auto& w = s.interp_weights[node];
  return w[0] * v[nn[0]] + w[1] * v[nn[1]] + w[2] * v[nn[2]] + w[3] * v[nn[3]];
}

std::vector<double> interp_all(const HypersurfaceEmbedding& s, const std::vector<double>& v) {
  std::vector<double> out(s.slice.size());
  for (std::size_t node = 0; node < out.size(); ++node) out[node] = interp(s, v, node);
  return out;
}

SymTensorField interp_tensor(const HypersurfaceEmbedding& s, const SymTensorField& t) {
  SymTensorField out(s.slice, t.n);
  for (std::size_t c = 0; c < t.comps.size(); ++c) out.comps[c] = interp_all(s, t.comps[c]);
  return out;
}

double inner_slice(const SymTensorField& inv, std::size_t node, const std::vector<ScalarField>& a,
                   const std::vector<ScalarField>& b) {
  double s = 0.0;
  for (int i = 0; i < inv.n; ++i)
    for (int j = 0; j < inv.n; ++j) s += inv.at(node, i, j) * a[i][node] * b[j][node];
  return s;
}

SymTensorField inverse_field(const SymTensorField& m, const NodeMask& skip) {
  SymTensorField out(m.grid, m.n);
  for (std::size_t node = 0; node < m.grid.size(); ++node) {
    if (!skip.empty() && skip[node]) continue;
    Mat inv = inverse(node_matrix(m, node), m.n);
    for (int i = 0; i < m.n; ++i)
      for (int j = i; j < m.n; ++j) out.at(node, i, j) = inv[i * kMaxDim + j];
  }
  return out;
}

// Degenerate nodes sit on boundary rows (coordinate poles); copy the value of
// the adjacent regular row so that slice stencils see a smooth field.
ScalarField fill_degenerate(const HypersurfaceEmbedding& s, ScalarField f) {
  for (std::size_t node = 0; node < f.size(); ++node) {
    if (!s.degenerate[node]) continue;
    Index idx = s.slice.multi_index(node);
    for (int a = 0; a < s.slice.dim(); ++a) {
      const Axis& ax = s.slice.axis(a);
      if (ax.topology != Topology::boundary) continue;
      if (idx[a] != 0 && idx[a] != ax.nodes - 1) continue;
      Index j = idx;
      j[a] = idx[a] == 0 ? 1 : ax.nodes - 2;
      std::size_t m = s.slice.node(j);
      if (!s.degenerate[m]) {
        f[node] = f[m];
        break;
      }
    }
  }
  return f;
}

}  // namespace

std::shared_ptr<const AmbientGeometry> AmbientGeometry::make(const SymTensorField& metric) {
  auto a = std::make_shared<AmbientGeometry>();
  a->metric = metric;
  a->bundle = curvature_bundle(metric);
  return a;
}

NodeMask HypersurfaceEmbedding::regular() const {
  NodeMask m(slice.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = !degenerate[i];
  return m;
}

NodeMask HypersurfaceEmbedding::interior() const {
  return mask_and(interior_mask(slice), regular());
}

HypersurfaceEmbedding embed_graph(std::shared_ptr<const AmbientGeometry> ambient,
                                  int height_axis, const ScalarField& height,
                                  int orientation) {
  require(ambient != nullptr, "embed_graph: missing ambient geometry");
  const ChartGrid& amb = ambient->grid();
  const int dim = amb.dim();
  require(dim >= 2, "embed_graph: ambient chart must have dimension at least 2");
  require(height_axis >= 0 && height_axis < dim, "embed_graph: height axis out of range");
  require(orientation == 1 || orientation == -1, "embed_graph: orientation must be +1 or -1");

  HypersurfaceEmbedding s;
  s.ambient = std::move(ambient);
  s.height_axis = height_axis;
  s.orientation = orientation;
  s.slice = amb.without_axis(height_axis);
  require_same_grid(s.slice, height.grid, "embed_graph");
  s.height = height;
  plan_interpolation(s);

  const CurvatureBundle& B = s.ambient->bundle;
  const int sd = dim - 1;
  const int nc = SymTensorField::component_count(dim);
  const std::size_t N = s.slice.size();

  s.ambient_metric = interp_tensor(s, s.ambient->metric);
  s.ambient_ricci = interp_tensor(s, B.ricci);
  s.ambient_scalar = ScalarField(s.slice, interp_all(s, B.scalar.values));
  std::vector<std::vector<double>> gam(B.christoffel.size());
  for (std::size_t c = 0; c < gam.size(); ++c) gam[c] = interp_all(s, B.christoffel[c]);

  s.ambient_inverse = SymTensorField(s.slice, dim);
  s.tangent.assign(sd * dim, std::vector<double>(N, 0.0));
  s.normal.assign(dim, ScalarField(s.slice));
  s.normal_covector.assign(dim, ScalarField(s.slice));
  s.induced_metric = SymTensorField(s.slice, sd);
  s.second_fundamental = SymTensorField(s.slice, sd);
  s.mean_curvature = ScalarField(s.slice);
  s.degenerate.assign(N, false);

  double scale = 0.0;
  for (int a = 0; a < dim; ++a) scale = std::max(scale, max_abs(s.ambient_metric.comps[SymTensorField::packed(a, a, dim)]));

  parallel_for(N, [&](std::size_t node) {
    std::vector<double> dh(sd);
    for (int al = 0; al < sd; ++al) dh[al] = d1_at(s.slice, s.height.values, node, al);
    for (int al = 0; al < sd; ++al) {
      s.tangent[al * dim + s.slice_axis_to_ambient(al)][node] = 1.0;
      s.tangent[al * dim + height_axis][node] = dh[al];
    }
    auto T = [&](int al, int a) { return s.tangent[al * dim + a][node]; };
    for (int al = 0; al < sd; ++al)
      for (int be = al; be < sd; ++be) {
        double v = 0.0;
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b)
            v += s.ambient_metric.at(node, a, b) * T(al, a) * T(be, b);
        s.induced_metric.at(node, al, be) = v;
      }

    bool ambient_degenerate = false;
    for (int m = 0; m < 4; ++m)
      if (s.interp_weights[node][m] != 0.0 && B.degenerate[s.interp_nodes[node][m]])
        ambient_degenerate = true;
    Mat g = node_matrix(s.ambient_metric, node);
    double det = determinant(g, dim);
    if (ambient_degenerate || det <= 1e-12 * std::pow(scale, dim)) {
      s.degenerate[node] = true;
      return;
    }
    Mat ginv = inverse(g, dim);
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b) s.ambient_inverse.at(node, a, b) = ginv[a * kMaxDim + b];

    std::vector<double> n(dim, 0.0);
    n[height_axis] = 1.0;
    for (int al = 0; al < sd; ++al) n[s.slice_axis_to_ambient(al)] = -dh[al];
    double nn = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) nn += ginv[a * kMaxDim + b] * n[a] * n[b];
    double inv_len = orientation / std::sqrt(nn);
    for (int a = 0; a < dim; ++a) s.normal_covector[a][node] = n[a] * inv_len;
    for (int a = 0; a < dim; ++a) {
      double v = 0.0;
      for (int b = 0; b < dim; ++b) v += ginv[a * kMaxDim + b] * s.normal_covector[b][node];
      s.normal[a][node] = v;
    }

    for (int al = 0; al < sd; ++al)
      for (int be = al; be < sd; ++be) {
        double v = s.normal_covector[height_axis][node] * dd_at(s.slice, s.height.values, node, al, be);
        for (int c = 0; c < dim; ++c) {
          double acc = 0.0;
          for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
              acc += gam[c * nc + SymTensorField::packed(a, b, dim)][node] * T(al, a) * T(be, b);
          v += s.normal_covector[c][node] * acc;
        }
        s.second_fundamental.at(node, al, be) = -v;
      }

    Mat gi = inverse(node_matrix(s.induced_metric, node), sd);
    double H = 0.0;
    for (int al = 0; al < sd; ++al)
      for (int be = 0; be < sd; ++be) H += gi[al * kMaxDim + be] * s.second_fundamental.at(node, al, be);
    s.mean_curvature[node] = H;
  });
  return s;
}

HypersurfaceEmbedding embed_graph(const SymTensorField& ambient_metric, int height_axis,
                                  const ScalarField& height, int orientation) {
  return embed_graph(AmbientGeometry::make(ambient_metric), height_axis, height, orientation);
}

HypersurfaceEmbedding embed_slice(std::shared_ptr<const AmbientGeometry> ambient,
                                  int height_axis, double value, int orientation) {
  require(ambient != nullptr, "embed_slice: missing ambient geometry");
  ChartGrid slice = ambient->grid().without_axis(height_axis);
  return embed_graph(std::move(ambient), height_axis, ScalarField(slice, value), orientation);
}

ScalarField restrict_to(const HypersurfaceEmbedding& s, const ScalarField& f) {
  require_same_grid(s.ambient->grid(), f.grid, "restrict_to");
  return ScalarField(s.slice, interp_all(s, f.values));
}

AmbientDerivatives ambient_derivatives(const HypersurfaceEmbedding& s, const ScalarField& f) {
  require_same_grid(s.ambient->grid(), f.grid, "ambient_derivatives");
  PotentialDerivatives pd = potential_derivatives(s.ambient->metric, s.ambient->bundle, f);
  AmbientDerivatives out;
  out.value = restrict_to(s, f);
  for (const ScalarField& g : pd.gradient) out.gradient.push_back(restrict_to(s, g));
  out.laplacian = restrict_to(s, pd.laplacian);
  out.gradient_sq = restrict_to(s, pd.gradient_sq);
  out.hessian = interp_tensor(s, pd.hessian);
  return out;
}

ScalarField normal_derivative(const HypersurfaceEmbedding& s, const AmbientDerivatives& d) {
  ScalarField out(s.slice);
  for (std::size_t node = 0; node < out.size(); ++node)
    for (int a = 0; a < s.ambient_dim(); ++a) out[node] += d.gradient[a][node] * s.normal[a][node];
  return out;
}

ScalarField normal_hessian(const HypersurfaceEmbedding& s, const AmbientDerivatives& d) {
  ScalarField out(s.slice);
  const int dim = s.ambient_dim();
  for (std::size_t node = 0; node < out.size(); ++node)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        out[node] += d.hessian.at(node, a, b) * s.normal[a][node] * s.normal[b][node];
  return out;
}

ScalarField normal_ricci(const HypersurfaceEmbedding& s) {
  ScalarField out(s.slice);
  const int dim = s.ambient_dim();
  for (std::size_t node = 0; node < out.size(); ++node)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        out[node] += s.ambient_ricci.at(node, a, b) * s.normal[a][node] * s.normal[b][node];
  return out;
}

ScalarField second_fundamental_sq(const HypersurfaceEmbedding& s) {
  ScalarField out(s.slice);
  const int sd = s.slice.dim();
  for (std::size_t node = 0; node < out.size(); ++node) {
    if (s.degenerate[node]) continue;
    Mat gi = inverse(node_matrix(s.induced_metric, node), sd);
    double v = 0.0;
    for (int a = 0; a < sd; ++a)
      for (int b = 0; b < sd; ++b)
        for (int c = 0; c < sd; ++c)
          for (int d = 0; d < sd; ++d)
            v += gi[a * kMaxDim + c] * gi[b * kMaxDim + d] * s.second_fundamental.at(node, a, b) *
                 s.second_fundamental.at(node, c, d);
    out[node] = v;
  }
  return out;
}

ScalarField weighted_mean_curvature(const HypersurfaceEmbedding& s, const ScalarField& phi) {
  return s.mean_curvature + normal_derivative(s, ambient_derivatives(s, phi));
}

GaussTerms gauss_identity(const HypersurfaceEmbedding& s, const ScalarField& rho,
                          const ScalarField& u, GaussForm form) {
  require_same_grid(s.ambient->grid(), rho.grid, "gauss_identity");
  require_same_grid(s.slice, u.grid, "gauss_identity");
  for (std::size_t i = 0; i < rho.size(); ++i)
    if (!(rho[i] > 0.0)) fail(ErrorCode::domain, "gauss_identity: rho must be positive at node " + std::to_string(i));
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!(u[i] > 0.0)) fail(ErrorCode::domain, "gauss_identity: u must be positive at slice node " + std::to_string(i));

  ScalarField log_rho = map(rho, [](double v) { return std::log(v); });
  AmbientDerivatives lr = ambient_derivatives(s, log_rho);
  ScalarField log_u = map(u, [](double v) { return std::log(v); });
  ScalarField log_v = lr.value + log_u;

  CurvatureBundle sb = curvature_bundle(s.induced_metric);
  PotentialDerivatives pv = potential_derivatives(s.induced_metric, sb, log_v);
  PotentialDerivatives pu = potential_derivatives(s.induced_metric, sb, u);
  PotentialDerivatives plu = potential_derivatives(s.induced_metric, sb, log_u);
  PotentialDerivatives plr = potential_derivatives(s.induced_metric, sb, lr.value);

  ScalarField ric_nn = normal_ricci(s);
  ScalarField h_sq = second_fundamental_sq(s);
  ScalarField dn = normal_derivative(s, lr);
  ScalarField hess_nn = normal_hessian(s, lr);

  GaussTerms out;
  out.lhs = ScalarField(s.slice);
  out.rhs = ScalarField(s.slice);
  out.residual = ScalarField(s.slice);
  out.mask = s.interior();
  for (std::size_t node = 0; node < s.slice.size(); ++node) {
    if (sb.degenerate[node]) out.mask[node] = false;
    if (s.degenerate[node] || sb.degenerate[node]) continue;
    double wh = s.mean_curvature[node] + dn[node];
    double lhs = -2.0 * pv.laplacian[node] - pv.gradient_sq[node] + sb.scalar[node] - wh * wh +
                 2.0 * lr.laplacian[node] + lr.gradient_sq[node] - s.ambient_scalar[node] -
                 plu.gradient_sq[node] - h_sq[node];
    double cross = inner_slice(sb.inverse, node, plr.gradient, plu.gradient);
    double rhs;
    if (form == GaussForm::corrected) {
      rhs = -2.0 * pu.laplacian[node] / u[node] - 2.0 * ric_nn[node] - 2.0 * h_sq[node] +
            2.0 * hess_nn[node] - 2.0 * cross;
    } else {
      rhs = -2.0 * pu.laplacian[node] / u[node] - 2.0 * ric_nn[node] * u[node] - 2.0 * h_sq[node] +
            hess_nn[node] - cross;
    }
    out.lhs[node] = lhs;
    out.rhs[node] = rhs;
    out.residual[node] = lhs - rhs;
  }
  return out;
}

double weighted_area(const HypersurfaceEmbedding& s, const ScalarField& phi) {
  ScalarField w = map(restrict_to(s, phi), [](double v) { return std::exp(v); });
  return integrate(w, s.induced_metric);
}

GraphFoliation make_foliation(std::shared_ptr<const AmbientGeometry> ambient, int height_axis,
                              const std::vector<double>& t, const std::vector<ScalarField>& heights,
                              const std::vector<ScalarField>& rates, const ScalarField& phi,
                              int orientation) {
  require(t.size() == heights.size(), "make_foliation: one height per slice parameter");
  require(t.size() >= 2, "make_foliation: need at least two slices");
  require(rates.empty() || rates.size() == t.size(), "make_foliation: one rate per slice");
  for (std::size_t i = 1; i < t.size(); ++i)
    require(t[i] > t[i - 1], "make_foliation: slice parameter must be strictly increasing");

  GraphFoliation f;
  f.t = t;
  f.slices.resize(t.size());
  f.lapse.resize(t.size());
  f.weighted_h.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    f.slices[i] = embed_graph(ambient, height_axis, heights[i], orientation);
  for (std::size_t i = 0; i < t.size(); ++i) {
    ScalarField rate;
    if (!rates.empty()) {
      rate = rates[i];
    } else {
      std::size_t lo = i == 0 ? 0 : i - 1, hi = i + 1 == t.size() ? i : i + 1;
      rate = (1.0 / (t[hi] - t[lo])) * (heights[hi] - heights[lo]);
    }
    const HypersurfaceEmbedding& s = f.slices[i];
    ScalarField lapse(s.slice);
    for (std::size_t node = 0; node < lapse.size(); ++node) {
      if (s.degenerate[node]) continue;
      lapse[node] = s.normal_covector[height_axis][node] * rate[node];
      if (!(lapse[node] > 0.0))
        fail(ErrorCode::domain, "make_foliation: lapse not positive on slice " + std::to_string(i) +
                                    " at " + slice_node_name(s.slice, node));
    }
    f.lapse[i] = fill_degenerate(s, lapse);
    f.weighted_h[i] = fill_degenerate(s, weighted_mean_curvature(s, phi));
  }
  return f;
}

std::vector<VariationRow> weighted_area_variation(const GraphFoliation& f, const ScalarField& phi) {
  const std::size_t n = f.t.size();
  require(n >= 3, "weighted_area_variation: need at least three slices");
  std::vector<double> area(n);
  for (std::size_t i = 0; i < n; ++i) area[i] = weighted_area(f.slices[i], phi);
  std::vector<VariationRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const HypersurfaceEmbedding& s = f.slices[i];
    ScalarField w = map(restrict_to(s, phi), [](double v) { return std::exp(v); });
    VariationRow& r = rows[i];
    r.t = f.t[i];
    r.weighted_area = area[i];
    r.first_variation = integrate(f.weighted_h[i] * w * f.lapse[i], s.induced_metric);
    if (i == 0 || i + 1 == n) {
      r.da_dt = kNaN;
      r.difference = kNaN;
    } else {
      r.da_dt = (area[i + 1] - area[i - 1]) / (f.t[i + 1] - f.t[i - 1]);
      r.difference = r.da_dt - r.first_variation;
    }
  }
  return rows;
}

void write_variation_report(const std::string& path, const std::vector<VariationRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
  out << "t,weighted_area,dA_dt_centered,first_variation_integral,difference\n";
  for (const VariationRow& r : rows)
    out << format_real(r.t) << ',' << format_real(r.weighted_area) << ',' << format_real(r.da_dt) << ','
        << format_real(r.first_variation) << ',' << format_real(r.difference) << '\n';
  if (!out) fail(ErrorCode::io, "write failed for " + path);
}

ScalarField level_set_mean_curvature(const SymTensorField& metric, int axis) {
  const ChartGrid& g = metric.grid;
  const int n = metric.n;
  require(n == g.dim(), "level_set_mean_curvature: metric dimension must match the chart");
  require(axis >= 0 && axis < n, "level_set_mean_curvature: axis out of range");
  std::vector<std::vector<double>> w(n, std::vector<double>(g.size(), 0.0));
  std::vector<double> root(g.size(), 0.0);
  for (std::size_t node = 0; node < g.size(); ++node) {
    Mat m = node_matrix(metric, node);
    double det = determinant(m, n);
    if (!(det > 0.0)) continue;
    Mat inv = inverse(m, n);
    root[node] = std::sqrt(det);
    double len = std::sqrt(inv[axis * kMaxDim + axis]);
    for (int i = 0; i < n; ++i) w[i][node] = root[node] * inv[i * kMaxDim + axis] / len;
  }
  ScalarField out(g);
  for (std::size_t node = 0; node < g.size(); ++node) {
    if (root[node] == 0.0) continue;
    double div = 0.0;
    for (int i = 0; i < n; ++i) div += d1_at(g, w[i], node, i);
    out[node] = div / root[node];
  }
  return out;
}

BoundaryTrace boundary_trace_identity(const HypersurfaceEmbedding& s, const ScalarField& rho,
                                      const ScalarField& phi) {
  require_same_grid(s.slice, rho.grid, "boundary_trace_identity");
  std::vector<int> axes;
  for (int al = 0; al < s.slice.dim(); ++al)
    if (s.slice.axis(al).topology == Topology::boundary) axes.push_back(al);
  if (axes.empty()) fail(ErrorCode::invalid_argument, "boundary_trace_identity: slice has no boundary");
  for (std::size_t i = 0; i < rho.size(); ++i)
    if (!(rho[i] > 0.0)) fail(ErrorCode::domain, "boundary_trace_identity: rho must be positive at slice node " + std::to_string(i));

  const int dim = s.ambient_dim();
  AmbientDerivatives dphi = ambient_derivatives(s, phi);
  ScalarField log_rho = map(rho, [](double v) { return std::log(v); });
  std::vector<ScalarField> grad_lr;
  for (int al = 0; al < s.slice.dim(); ++al) grad_lr.push_back(differentiate(log_rho, al, 1));
  SymTensorField gi = inverse_field(s.induced_metric, s.degenerate);

  BoundaryTrace out;
  for (int al : axes) {
    const int b = s.slice_axis_to_ambient(al);
    ScalarField h_slice = level_set_mean_curvature(s.induced_metric, al);
    ScalarField h_amb = restrict_to(s, level_set_mean_curvature(s.ambient->metric, b));
    const int last = s.slice.axis(al).nodes - 1;
    for (std::size_t node = 0; node < s.slice.size(); ++node) {
      Index idx = s.slice.multi_index(node);
      if (idx[al] != 0 && idx[al] != last) continue;
      bool corner = false;
      for (int other : axes)
        if (other != al && (idx[other] == 0 || idx[other] == s.slice.axis(other).nodes - 1)) corner = true;
      if (corner || s.degenerate[node]) continue;
      const double sign = idx[al] == 0 ? -1.0 : 1.0;

      double dlr = 0.0;
      for (int be = 0; be < s.slice.dim(); ++be) dlr += gi.at(node, al, be) * grad_lr[be][node];
      dlr *= sign / std::sqrt(gi.at(node, al, al));

      double dph = 0.0;
      for (int a = 0; a < dim; ++a) dph += s.ambient_inverse.at(node, a, b) * dphi.gradient[a][node];
      dph *= sign / std::sqrt(s.ambient_inverse.at(node, b, b));

      double lhs = dlr + sign * h_slice[node];
      double rhs = dph + sign * h_amb[node];
      out.nodes.push_back(node);
      out.lhs.push_back(lhs);
      out.rhs.push_back(rhs);
      out.residual.push_back(lhs - rhs);
    }
  }
  return out;
}

}  // namespace scl
