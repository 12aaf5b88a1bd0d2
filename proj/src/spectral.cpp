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

#include "sclab/spectral.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "sclab/error.hpp"
#include "sclab/snapshot.hpp"

namespace scl {
namespace {

using Rows = std::vector<std::map<std::size_t, double>>;

CouplingTable compress(const Rows& rows) {
  CouplingTable t;
  t.row_start.push_back(0);
  for (const auto& r : rows) {
    for (const auto& [j, v] : r) {
      t.column.push_back(j);
      t.value.push_back(v);
    }
    t.row_start.push_back(t.column.size());
  }
  return t;
}

double trapezoid_factor(const ChartGrid& g, std::size_t node, int axis) {
  const Axis& ax = g.axis(axis);
  if (ax.topology == Topology::periodic) return 1.0;
  int i = g.multi_index(node)[axis];
  return i == 0 || i == ax.nodes - 1 ? 0.5 : 1.0;
}

std::size_t neighbour(const ChartGrid& g, std::size_t node, int axis, int step, bool& ok) {
  Index idx = g.multi_index(node);
  const Axis& ax = g.axis(axis);
  int i = idx[axis] + step;
  if (ax.topology == Topology::periodic) {
    i = (i + ax.nodes) % ax.nodes;
  } else if (i < 0 || i >= ax.nodes) {
    ok = false;
    return node;
  }
  ok = true;
  idx[axis] = i;
  return g.node(idx);
}

}  // namespace

double CouplingTable::entry(std::size_t i, std::size_t j) const {
  for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k)
    if (column[k] == j) return value[k];
  return 0.0;
}

std::vector<double> CouplingTable::apply(const std::vector<double>& u) const {
  require(u.size() == rows(), "coupling table: vector size mismatch");
  std::vector<double> out(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    double s = 0.0;
    for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k) s += value[k] * u[column[k]];
    out[i] = s;
  }
  return out;
}

double SpectralProblem::inner(const std::vector<double>& u, const std::vector<double>& v) const {
  std::vector<double> p(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) p[i] = mass[i] * u[i] * v[i];
  return pairwise_sum(p);
}

double SpectralProblem::norm(const std::vector<double>& u) const { return std::sqrt(inner(u, u)); }

SpectralProblem SpectralProblem::shifted(double c) const {
  SpectralProblem p = *this;
  for (std::size_t i = 0; i < p.op.rows(); ++i)
    for (std::size_t k = p.op.row_start[i]; k < p.op.row_start[i + 1]; ++k)
      if (p.op.column[k] == i) p.op.value[k] += c;
  for (double& v : p.potential.values) v += c;
  return p;
}

ScalarField boundary_normal_curvature(const HypersurfaceEmbedding& s) {
  const ChartGrid& amb = s.ambient->grid();
  const int dim = amb.dim();
  const int nc = SymTensorField::component_count(dim);
  ScalarField q(s.slice);
  std::vector<bool> done(s.slice.size(), false);
  for (int al = 0; al < s.slice.dim(); ++al) {
    if (s.slice.axis(al).topology != Topology::boundary) continue;
    const int b = s.slice_axis_to_ambient(al);
    // N = lambda dx^b with lambda = 1 / |dx^b|
    ScalarField lambda(amb);
    for (std::size_t n = 0; n < amb.size(); ++n) {
      if (s.ambient->bundle.degenerate[n]) continue;
      lambda[n] = 1.0 / std::sqrt(s.ambient->bundle.inverse.at(n, b, b));
    }
    std::vector<ScalarField> dlambda;
    for (int a = 0; a < dim; ++a) dlambda.push_back(restrict_to(s, differentiate(lambda, a, 1)));
    ScalarField lam = restrict_to(s, lambda);
    std::vector<ScalarField> gam_b;
    for (int p = 0; p < nc; ++p)
      gam_b.push_back(restrict_to(s, ScalarField(amb, s.ambient->bundle.christoffel[b * nc + p])));
    const int last = s.slice.axis(al).nodes - 1;
    for (std::size_t n = 0; n < s.slice.size(); ++n) {
      int i = s.slice.multi_index(n)[al];
      if ((i != 0 && i != last) || done[n] || s.degenerate[n]) continue;
      const double sign = i == 0 ? -1.0 : 1.0;
      double v = 0.0;
      for (int a = 0; a < dim; ++a) v += s.normal[a][n] * dlambda[a][n];
      v *= s.normal[b][n];
      for (int a = 0; a < dim; ++a)
        for (int c = 0; c < dim; ++c)
          v -= lam[n] * gam_b[SymTensorField::packed(a, c, dim)][n] * s.normal[a][n] * s.normal[c][n];
      q[n] = sign * v;
      done[n] = true;
    }
  }
  return q;
}

SpectralProblem assemble_jacobi(const HypersurfaceEmbedding& s, const ScalarField& rho,
                                const std::optional<ScalarField>& robin) {
  require_same_grid(s.ambient->grid(), rho.grid, "assemble_jacobi");
  for (std::size_t i = 0; i < rho.size(); ++i)
    if (!(rho[i] > 0.0)) fail(ErrorCode::domain, "assemble_jacobi: rho must be positive at node " + std::to_string(i));
  for (std::size_t i = 0; i < s.slice.size(); ++i)
    if (s.degenerate[i]) fail(ErrorCode::domain, "assemble_jacobi: slice is degenerate at node " + std::to_string(i));

  const ChartGrid& g = s.slice;
  const int sd = g.dim();
  const std::size_t N = g.size();

  SpectralProblem p;
  p.grid = g;
  ScalarField log_rho = map(rho, [](double v) { return std::log(v); });
  AmbientDerivatives lr = ambient_derivatives(s, log_rho);
  p.weight = map(lr.value, [](double v) { return std::exp(v); });
  p.potential = normal_hessian(s, lr) - normal_ricci(s) - second_fundamental_sq(s);

  bool has_boundary = false;
  for (int al = 0; al < sd; ++al) has_boundary |= g.axis(al).topology == Topology::boundary;
  if (robin) {
    require_same_grid(g, robin->grid, "assemble_jacobi: robin data");
    p.robin = *robin;
  } else {
    p.robin = has_boundary ? boundary_normal_curvature(s) : ScalarField(g);
  }

  std::vector<double> root(N), k(N);
  SymTensorField gi(g, sd);
  for (std::size_t n = 0; n < N; ++n) {
    Mat m = node_matrix(s.induced_metric, n);
    root[n] = std::sqrt(determinant(m, sd));
    Mat inv = inverse(m, sd);
    for (int a = 0; a < sd; ++a)
      for (int b = a; b < sd; ++b) gi.at(n, a, b) = inv[a * kMaxDim + b];
    k[n] = p.weight[n] * root[n];
  }
  std::vector<double> vol = cell_volumes(g);
  p.mass.resize(N);
  for (std::size_t n = 0; n < N; ++n) p.mass[n] = k[n] * vol[n];

  Rows rows(N);
  for (std::size_t n = 0; n < N; ++n) {
    double diag = 0.0;
    for (int al = 0; al < sd; ++al) {
      const double h = g.axis(al).spacing();
      const double t = trapezoid_factor(g, n, al);
      for (int step : {-1, 1}) {
        bool ok;
        std::size_t m = neighbour(g, n, al, step, ok);
        if (!ok) continue;
        double face = 0.5 * (k[n] * gi.at(n, al, al) + k[m] * gi.at(m, al, al));
        double c = face / (k[n] * h * h * t);
        rows[n][m] -= c;
        diag += c;
      }
      if (g.axis(al).topology == Topology::boundary && t != 1.0 && p.robin[n] != 0.0)
        diag -= p.robin[n] * std::sqrt(gi.at(n, al, al)) / (t * h);
    }
    rows[n][n] += diag + p.potential[n];
  }

  // mixed second-order terms through the symmetric form sum D_a^T (V K^{ab}) D_b
  for (std::size_t n = 0; n < N; ++n)
    for (int al = 0; al < sd; ++al)
      for (int be = 0; be < sd; ++be) {
        if (al == be) continue;
        double kab = k[n] * gi.at(n, al, be) * vol[n];
        if (kab == 0.0) continue;
        for (auto [i, a] : stencil_d1(g, n, al))
          for (auto [j, b] : stencil_d1(g, n, be)) rows[i][j] += a * kab * b / p.mass[i];
      }

  p.op = compress(rows);
  return p;
}

double gershgorin_lower_bound(const CouplingTable& op) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < op.rows(); ++i) {
    double d = 0.0, off = 0.0;
    for (std::size_t k = op.row_start[i]; k < op.row_start[i + 1]; ++k) {
      if (op.column[k] == i)
        d += op.value[k];
      else
        off += std::abs(op.value[k]);
    }
    lo = std::min(lo, d - off);
  }
  return lo;
}

EigenPair principal_eigenpair(const SpectralProblem& p, const EigenOptions& opt) {
  const std::size_t N = p.op.rows();
  require(N > 0, "principal_eigenpair: empty problem");
  const double lower = gershgorin_lower_bound(p.op);
  const double sigma = lower - std::max(1e-3, 1e-3 * std::abs(lower));

  // (W L - sigma W) is symmetric up to rounding; factor its symmetric part once.
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = p.op.row_start[i]; k < p.op.row_start[i + 1]; ++k) {
      std::size_t j = p.op.column[k];
      double a = 0.5 * p.mass[i] * p.op.value[k];
      trip.emplace_back(static_cast<int>(i), static_cast<int>(j), a);
      trip.emplace_back(static_cast<int>(j), static_cast<int>(i), a);
    }
  for (std::size_t i = 0; i < N; ++i) trip.emplace_back(static_cast<int>(i), static_cast<int>(i), -sigma * p.mass[i]);
  Eigen::SparseMatrix<double> A(static_cast<int>(N), static_cast<int>(N));
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) fail(ErrorCode::convergence, "principal_eigenpair: factorization failed");

  std::vector<double> u(N, 1.0);
  double un = p.norm(u);
  for (double& v : u) v /= un;
  double lambda = p.inner(u, p.op.apply(u));
  double residual = 0.0;
  int it = 0;
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(N));
  while (true) {
    ++it;
    for (std::size_t i = 0; i < N; ++i) rhs[static_cast<Eigen::Index>(i)] = p.mass[i] * u[i];
    Eigen::VectorXd x = solver.solve(rhs);
    for (std::size_t i = 0; i < N; ++i) u[i] = x[static_cast<Eigen::Index>(i)];
    un = p.norm(u);
    for (double& v : u) v /= un;
    std::vector<double> lu = p.op.apply(u);
    double next = p.inner(u, lu);
    for (std::size_t i = 0; i < N; ++i) lu[i] -= next * u[i];
    residual = p.norm(lu);
    bool done = std::abs(next - lambda) <= opt.tolerance && residual <= opt.residual_tolerance;
    lambda = next;
    if (done) break;
    if (it >= opt.max_iterations)
      fail(ErrorCode::convergence, "principal_eigenpair: no convergence after " + std::to_string(it) +
                                       " iterations, last residual " + format_real(residual));
  }
  if (u[0] < 0.0)
    for (double& v : u) v = -v;
  EigenPair e;
  e.eigenvalue = lambda;
  e.eigenfunction = ScalarField(p.grid, std::move(u));
  e.residual = residual;
  e.iterations = it;
  return e;
}

EigenReportRow eigen_report_row(const std::string& id, const EigenPair& e) {
  EigenReportRow r;
  r.problem = id;
  r.eigenvalue = e.eigenvalue;
  r.residual = e.residual;
  r.iterations = e.iterations;
  r.u_min = reduce_min(e.eigenfunction).value;
  r.u_max = reduce_max(e.eigenfunction).value;
  return r;
}

void write_eigen_report(const std::string& path, const std::vector<EigenReportRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
  out << "problem,eigenvalue,residual,iterations,u_min,u_max\n";
  for (const auto& r : rows)
    out << r.problem << ',' << format_real(r.eigenvalue) << ',' << format_real(r.residual) << ','
        << r.iterations << ',' << format_real(r.u_min) << ',' << format_real(r.u_max) << '\n';
  if (!out) fail(ErrorCode::io, "write failed for " + path);
}

std::vector<LapseSlice> lapse_residual(const GraphFoliation& f, const ScalarField& phi) {
  const std::size_t n = f.t.size();
  require(n >= 3, "lapse_residual: need at least three slices");
  std::vector<double> mu(n), spread(n), scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    NodeMask m = f.slices[i].interior();
    NodeValue lo = reduce_min(f.weighted_h[i], m), hi = reduce_max(f.weighted_h[i], m);
    ScalarField ones(f.slices[i].slice, 1.0);
    mu[i] = integrate(f.weighted_h[i], f.slices[i].induced_metric) / integrate(ones, f.slices[i].induced_metric);
    spread[i] = hi.value - lo.value;
    double hmax = 0.0;
    for (const Axis& ax : f.slices[i].slice.axes()) hmax = std::max(hmax, ax.spacing());
    scale[i] = std::max(1e-10, std::max(1.0, std::abs(mu[i])) * hmax * hmax / 12.0);
  }

  std::vector<LapseSlice> out;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const HypersurfaceEmbedding& s = f.slices[i];
    if (spread[i] > 10.0 * scale[i])
      fail(ErrorCode::domain, "lapse_residual: weighted mean curvature is not slice-constant at t = " +
                                  format_real(f.t[i]) + " (spread " + format_real(spread[i]) + ")");
    LapseSlice r;
    r.t = f.t[i];
    r.mu = mu[i];
    r.mu_spread = spread[i];
    r.dmu_dt = (mu[i + 1] - mu[i - 1]) / (f.t[i + 1] - f.t[i - 1]);

    AmbientDerivatives dphi = ambient_derivatives(s, phi);
    CurvatureBundle sb = curvature_bundle(s.induced_metric);
    const ScalarField& lapse = f.lapse[i];
    PotentialDerivatives pf = potential_derivatives(s.induced_metric, sb, lapse);
    std::vector<ScalarField> gphi;
    for (int a = 0; a < s.slice.dim(); ++a) gphi.push_back(differentiate(dphi.value, a, 1));
    ScalarField ric = normal_ricci(s), hsq = second_fundamental_sq(s), hess = normal_hessian(s, dphi);

    r.residual = ScalarField(s.slice);
    r.mask = s.interior();
    for (std::size_t node = 0; node < s.slice.size(); ++node) {
      if (sb.degenerate[node]) r.mask[node] = false;
      if (!r.mask[node]) continue;
      double cross = 0.0;
      for (int a = 0; a < s.slice.dim(); ++a)
        for (int b = 0; b < s.slice.dim(); ++b) cross += sb.inverse.at(node, a, b) * gphi[a][node] * pf.gradient[b][node];
      double f0 = lapse[node];
      r.residual[node] = -pf.laplacian[node] - ric[node] * f0 - hsq[node] * f0 + hess[node] * f0 - cross - r.dmu_dt;
    }
    r.max_residual = max_abs(r.residual, r.mask);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace scl
