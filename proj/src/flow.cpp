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

#include "sclab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sclab/error.hpp"
#include "sclab/snapshot.hpp"

namespace scl {
namespace {

using std::numbers::pi;

// Radial operators of the sphere profile on [0, pi]; regularity at the
// poles gives f' = 0 and f'' = 2 (f_1 - f_0) / h^2 there.
struct Profile {
  const ChartGrid& g;
  int n;
  double h;
  explicit Profile(const ChartGrid& grid)
      : g(grid), n(grid.axis(0).nodes), h(grid.axis(0).spacing()) {}

  bool pole(int i) const { return i == 0 || i == n - 1; }
  double cot(int i) const {
    double th = g.axis(0).coord(i);
    return std::cos(th) / std::sin(th);
  }
  double d1(const ScalarField& f, int i) const {
    return pole(i) ? 0.0 : (f[i + 1] - f[i - 1]) / (2 * h);
  }
  double d2(const ScalarField& f, int i) const {
    if (i == 0) return 2 * (f[1] - f[0]) / (h * h);
    if (i == n - 1) return 2 * (f[n - 2] - f[n - 1]) / (h * h);
    return (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h);
  }
  double lap0(const ScalarField& f, int i) const {
    return pole(i) ? 2 * d2(f, i) : d2(f, i) + cot(i) * d1(f, i);
  }
};

void fill_chart(FlowState& s) {
  auto b = std::make_shared<CurvatureBundle>(curvature_bundle(s.metric));
  PotentialDerivatives pd = potential_derivatives(s.metric, *b, s.phi);
  s.scalar = b->scalar;
  s.laplacian_phi = pd.laplacian;
  s.S = stabilized_scalar(s.metric, *b, s.phi);
  s.gap_sq = ScalarField(s.grid());
  SymTensorField diff = b->ricci;
  for (std::size_t c = 0; c < diff.comps.size(); ++c)
    for (std::size_t n = 0; n < diff.comps[c].size(); ++n) diff.comps[c][n] -= pd.hessian.comps[c][n];
  for (std::size_t n = 0; n < s.grid().size(); ++n)
    if (!b->degenerate[n]) s.gap_sq[n] = norm_sq(b->inverse, diff, n);
  s.bundle = std::move(b);
}

void fill_profile(FlowState& s) {
  const ChartGrid& g = s.grid();
  Profile P(g);
  s.scalar = ScalarField(g);
  s.laplacian_phi = ScalarField(g);
  s.S = ScalarField(g);
  s.gap_sq = ScalarField(g);
  for (int i = 0; i < P.n; ++i) {
    const double e = std::exp(-2 * s.warp[i]);
    const double K = e * (1 - P.lap0(s.warp, i));
    const double dphi = P.d1(s.phi, i), ddphi = P.d2(s.phi, i);
    const double lap = e * P.lap0(s.phi, i);
    double h11, h22;
    if (P.pole(i)) {
      h11 = h22 = e * ddphi;
    } else {
      const double dw = P.d1(s.warp, i);
      h11 = e * (ddphi - dw * dphi);
      h22 = e * (dw + P.cot(i)) * dphi;
    }
    s.scalar[i] = 2 * K;
    s.laplacian_phi[i] = lap;
    s.S[i] = -2 * lap - e * dphi * dphi + 2 * K;
    s.gap_sq[i] = (K - h11) * (K - h11) + (K - h22) * (K - h22);
  }
}

void fill(FlowState& s) {
  if (s.geometry == FlowGeometry::chart)
    fill_chart(s);
  else
    fill_profile(s);
}

void check_state(const FlowState& s) {
  const ChartGrid& g = s.grid();
  if (s.geometry == FlowGeometry::chart) {
    for (std::size_t n = 0; n < g.size(); ++n) {
      if (!(min_leading_minor(node_matrix(s.metric, n), s.metric.n) > 0.0))
        fail(ErrorCode::domain, "metric lost positive definiteness at node " + std::to_string(n) +
                                    " at t = " + format_real(s.t));
    }
  } else {
    for (std::size_t n = 0; n < g.size(); ++n)
      if (!std::isfinite(s.warp[n]))
        fail(ErrorCode::domain, "warp profile not finite at node " + std::to_string(n) + " at t = " + format_real(s.t));
  }
  for (std::size_t n = 0; n < g.size(); ++n)
    if (!std::isfinite(s.phi[n]))
      fail(ErrorCode::domain, "potential not finite at node " + std::to_string(n) + " at t = " + format_real(s.t));
}

// Rates of the coupled system: dg/dt = -2 Ric (or dw/dt = -K), dphi/dt = Delta phi.
FlowState advance(const FlowState& base, const FlowState& rates_at, double dt, double t) {
  FlowState out;
  out.t = t;
  out.geometry = base.geometry;
  out.phi = base.phi;
  for (std::size_t n = 0; n < out.phi.size(); ++n) out.phi[n] += dt * rates_at.laplacian_phi[n];
  if (base.geometry == FlowGeometry::chart) {
    out.metric = base.metric;
    const SymTensorField& ric = rates_at.bundle->ricci;
    for (std::size_t c = 0; c < out.metric.comps.size(); ++c)
      for (std::size_t n = 0; n < out.metric.comps[c].size(); ++n) out.metric.comps[c][n] -= 2 * dt * ric.comps[c][n];
  } else {
    out.warp = base.warp;
    for (std::size_t n = 0; n < out.warp.size(); ++n) out.warp[n] -= dt * 0.5 * rates_at.scalar[n];
  }
  check_state(out);
  fill(out);
  return out;
}

}  // namespace

NodeMask FlowState::regular() const {
  if (geometry == FlowGeometry::chart && bundle) return bundle->regular();
  return full_mask(grid());
}

FlowState make_chart_state(const SymTensorField& metric, const ScalarField& phi, double t) {
  require(metric.grid.dim() == 2 && metric.n == 2, "flow charts must be two-dimensional");
  require_same_grid(metric.grid, phi.grid, "make_chart_state");
  FlowState s;
  s.t = t;
  s.geometry = FlowGeometry::chart;
  s.metric = metric;
  s.phi = phi;
  fill(s);
  return s;
}

FlowState make_sphere_state(int nodes, double radius, const ScalarField& phi,
                            const ScalarField& warp_perturbation, double t) {
  require(radius > 0.0, "sphere radius must be positive");
  ChartGrid g = make_chart(1, {nodes}, {pi}, {Topology::boundary});
  require_same_grid(g, phi.grid, "make_sphere_state");
  FlowState s;
  s.t = t;
  s.geometry = FlowGeometry::sphere_profile;
  s.warp = ScalarField(g, std::log(radius));
  if (!warp_perturbation.values.empty()) {
    require_same_grid(g, warp_perturbation.grid, "make_sphere_state");
    s.warp = s.warp + warp_perturbation;
  }
  s.phi = phi;
  check_state(s);
  fill(s);
  return s;
}

ScalarField state_laplacian(const FlowState& s, const ScalarField& f) {
  require_same_grid(s.grid(), f.grid, "state_laplacian");
  if (s.geometry == FlowGeometry::chart) return laplacian(*s.bundle, f);
  Profile P(s.grid());
  ScalarField out(s.grid());
  for (int i = 0; i < P.n; ++i) out[i] = std::exp(-2 * s.warp[i]) * P.lap0(f, i);
  return out;
}

double state_f_functional(const FlowState& s) {
  if (s.geometry == FlowGeometry::chart) {
    ScalarField w = s.S;
    for (std::size_t n = 0; n < w.size(); ++n) w[n] *= std::exp(s.phi[n]);
    return integrate(w, s.metric);
  }
  ScalarField w(s.grid());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = s.S[i] * std::exp(s.phi[i] + 2 * s.warp[i]) * std::sin(s.grid().coord(i, 0));
  return 2 * pi * integrate(w);
}

double stability_bound(const FlowState& s) {
  const ChartGrid& g = s.grid();
  double hmin = g.axis(0).spacing();
  for (int a = 1; a < g.dim(); ++a) hmin = std::min(hmin, g.axis(a).spacing());
  double inv_max = 0.0;
  if (s.geometry == FlowGeometry::chart) {
    for (std::size_t n = 0; n < g.size(); ++n) {
      if (s.bundle->degenerate[n])
        fail(ErrorCode::domain, "cannot step a chart with degenerate node " + std::to_string(n));
      for (const auto& c : s.bundle->inverse.comps) inv_max = std::max(inv_max, std::abs(c[n]));
    }
  } else {
    for (double w : s.warp.values) inv_max = std::max(inv_max, std::exp(-2 * w));
  }
  return 0.2 * hmin * hmin / inv_max;
}

FlowState step_coupled_flow(const FlowState& s, double dt, FlowScheme scheme) {
  require(dt > 0.0, "time step must be positive");
  double bound = stability_bound(s);
  if (dt > bound)
    fail(ErrorCode::domain, "time step " + format_real(dt) + " exceeds stability bound " + format_real(bound) +
                                " at t = " + format_real(s.t));
  if (scheme == FlowScheme::euler) return advance(s, s, dt, s.t + dt);
  FlowState half = advance(s, s, 0.5 * dt, s.t + 0.5 * dt);
  return advance(s, half, dt, s.t + dt);
}

FlowTrajectory run_coupled_flow(const FlowState& initial, double dt, int steps, FlowScheme scheme) {
  require(steps >= 0, "step count must be nonnegative");
  FlowTrajectory tr;
  tr.dt = dt;
  tr.scheme = scheme;
  tr.states.reserve(static_cast<std::size_t>(steps) + 1);
  tr.states.push_back(initial);
  for (int k = 0; k < steps; ++k) {
    FlowState next = step_coupled_flow(tr.states.back(), dt, scheme);
    next.t = initial.t + (k + 1) * dt;
    tr.states.push_back(std::move(next));
  }
  return tr;
}

ScalarField evolution_identity_residual(const FlowTrajectory& tr, std::size_t index) {
  if (index < 1 || index + 1 >= tr.states.size())
    fail(ErrorCode::invalid_argument, "evolution identity needs an interior trajectory index, got " +
                                          std::to_string(index));
  const FlowState& prev = tr.states[index - 1];
  const FlowState& cur = tr.states[index];
  const FlowState& next = tr.states[index + 1];
  ScalarField lap = state_laplacian(cur, cur.S);
  NodeMask reg = cur.regular();
  ScalarField r(cur.grid());
  const double span = next.t - prev.t;
  for (std::size_t n = 0; n < r.size(); ++n) {
    if (!reg[n]) continue;
    r[n] = (next.S[n] - prev.S[n]) / span - lap[n] - 2 * cur.gap_sq[n];
  }
  return r;
}

MonotonicityReport monotonicity_report(const FlowTrajectory& tr, double slack, double rigidity_tol) {
  require(tr.states.size() >= 2, "monotonicity report needs at least two states");
  MonotonicityReport rep;
  rep.rigid_everywhere = true;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const FlowState& s = tr.states[k];
    NodeMask reg = s.regular();
    MonotonicityRow row;
    row.t = s.t;
    row.inf_s = reduce_min(s.S, reg).value;
    row.f_functional = state_f_functional(s);
    row.max_gap = std::sqrt(reduce_max(s.gap_sq, reg).value);
    row.max_abs_s = max_abs(s.S, reg);
    row.rigid = row.max_gap <= rigidity_tol && row.max_abs_s <= rigidity_tol;
    rep.rigid_everywhere = rep.rigid_everywhere && row.rigid;
    if (k > 0 && row.inf_s < rep.rows.back().inf_s - slack && rep.monotone) {
      rep.monotone = false;
      rep.first_violation = static_cast<long>(k);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

ScalarField adjoint_supersolution_residual(const FlowState& s) {
  require(s.geometry == FlowGeometry::chart, "adjoint residual is evaluated on chart states");
  const CurvatureBundle& b = *s.bundle;
  const ChartGrid& g = s.grid();
  const int n = s.metric.n;
  // appendix convention: psi = -phi, S = 2 Delta psi - |grad psi|^2 + R
  ScalarField psi = -1.0 * s.phi;
  PotentialDerivatives pd = potential_derivatives(s.metric, b, psi);
  const ScalarField& R = b.scalar;
  ScalarField S = s.S;
  ScalarField psi_dot = R;
  for (std::size_t k = 0; k < g.size(); ++k) psi_dot[k] = -pd.laplacian[k] + pd.gradient_sq[k] - R[k];
  ScalarField lap_psi_dot = laplacian(b, psi_dot);
  ScalarField lap_R = laplacian(b, R);
  std::vector<ScalarField> grad_psi_dot;
  for (int a = 0; a < n; ++a) grad_psi_dot.push_back(differentiate(psi_dot, a, 1));
  ScalarField Q = S;
  for (std::size_t k = 0; k < g.size(); ++k) Q[k] = S[k] * std::exp(-psi[k]);
  ScalarField lap_Q = laplacian(b, Q);

  ScalarField out(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (b.degenerate[k]) continue;
    Mat gi = node_matrix(b.inverse, k);
    auto ric_up = [&](int i, int j) {
      double v = 0.0;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) v += gi[i * kMaxDim + a] * gi[j * kMaxDim + c] * b.ricci.at(k, a, c);
      return v;
    };
    double ric_sq = 0.0, ric_hess = 0.0, ric_grad = 0.0, grad_dot = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double ru = ric_up(i, j);
        ric_sq += ru * b.ricci.at(k, i, j);
        ric_hess += ru * pd.hessian.at(k, i, j);
        ric_grad += ru * pd.gradient[i][k] * pd.gradient[j][k];
        grad_dot += gi[i * kMaxDim + j] * pd.gradient[i][k] * grad_psi_dot[j][k];
      }
    double r_dot = lap_R[k] + 2 * ric_sq;
    double lap_dot = lap_psi_dot[k] + 2 * ric_hess;
    double grad_sq_dot = 2 * ric_grad + 2 * grad_dot;
    double s_dot = 2 * lap_dot - grad_sq_dot + r_dot;
    double w = std::exp(-psi[k]);
    double q_dot = w * (s_dot - S[k] * psi_dot[k]);
    // |Ric + D^2 psi|^2
    double forcing = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c)
            forcing += gi[i * kMaxDim + a] * gi[j * kMaxDim + c] * (b.ricci.at(k, i, j) + pd.hessian.at(k, i, j)) *
                       (b.ricci.at(k, a, c) + pd.hessian.at(k, a, c));
    out[k] = q_dot + lap_Q[k] - R[k] * Q[k] - 2 * w * forcing;
  }
  return out;
}

}  // namespace scl
