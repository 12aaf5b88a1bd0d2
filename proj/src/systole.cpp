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

#include "sclab/systole.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <tuple>

#include "sclab/curvature.hpp"
#include "sclab/error.hpp"
#include "sclab/flow.hpp"
#include "sclab/hypersurface.hpp"
#include "sclab/models.hpp"
#include "sclab/snapshot.hpp"

namespace scl {
namespace {

using std::numbers::pi;

std::vector<std::array<int, 2>> offsets(Connectivity c) {
  std::vector<std::array<int, 2>> o{{1, 0}, {0, 1}};
  if (c == Connectivity::eight || c == Connectivity::sixteen) {
    o.push_back({1, 1});
    o.push_back({1, -1});
  }
  if (c == Connectivity::sixteen) {
    o.push_back({2, 1});
    o.push_back({1, 2});
    o.push_back({2, -1});
    o.push_back({1, -2});
  }
  return o;
}

double wrap(const Axis& ax, double x) {
  if (ax.topology != Topology::periodic) return x;
  double r = std::fmod(x - ax.origin, ax.extent);
  if (r < 0) r += ax.extent;
  return ax.origin + r;
}

int step_winding(const WindingEdge& e, bool forward) { return forward ? e.winding : -e.winding; }
std::size_t step_head(const WindingEdge& e, bool forward) { return forward ? e.to : e.from; }
std::size_t step_tail(const WindingEdge& e, bool forward) { return forward ? e.from : e.to; }

}  // namespace

double segment_length(const ChartGrid& surface, const TensorFn& metric, std::size_t from, int d0, int d1) {
  Point mid = surface.point(from);
  const double dx[2] = {d0 * surface.axis(0).spacing(), d1 * surface.axis(1).spacing()};
  for (int a = 0; a < 2; ++a) mid[a] = wrap(surface.axis(a), mid[a] + 0.5 * dx[a]);
  Mat g = metric(mid);
  double q = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) q += g[a * kMaxDim + b] * dx[a] * dx[b];
  if (!(q > 0.0))
    fail(ErrorCode::domain, "metric is not positive on the segment from node " + std::to_string(from));
  return std::sqrt(q);
}

WindingGraph build_winding_graph(const ChartGrid& surface, const TensorFn& metric, int xi_axis,
                                 Connectivity connectivity) {
  require(surface.dim() == 2, "winding graphs live on 2-D surface charts");
  require(xi_axis == 0 || xi_axis == 1, "xi axis out of range");
  if (surface.axis(xi_axis).topology != Topology::periodic)
    fail(ErrorCode::invalid_argument, "xi axis must be periodic");
  WindingGraph g;
  g.grid = surface;
  g.xi_axis = xi_axis;
  g.connectivity = connectivity;
  g.incident.resize(surface.size());
  const auto offs = offsets(connectivity);
  for (std::size_t n = 0; n < surface.size(); ++n) {
    Index idx = surface.multi_index(n);
    for (const auto& d : offs) {
      Index j = idx;
      int winding = 0;
      bool ok = true;
      for (int a = 0; a < 2; ++a) {
        const Axis& ax = surface.axis(a);
        int v = idx[a] + d[a];
        if (ax.topology == Topology::periodic) {
          if (v >= ax.nodes) {
            v -= ax.nodes;
            if (a == xi_axis) winding = 1;
          } else if (v < 0) {
            v += ax.nodes;
            if (a == xi_axis) winding = -1;
          }
        } else if (v < 0 || v >= ax.nodes) {
          ok = false;
        }
        j[a] = v;
      }
      if (!ok) continue;
      WindingEdge e;
      e.from = n;
      e.to = surface.node(j);
      e.winding = winding;
      e.offset = d;
      e.length = segment_length(surface, metric, n, d[0], d[1]);
      g.incident[e.from].push_back(g.edges.size());
      g.incident[e.to].push_back(g.edges.size());
      g.edges.push_back(e);
    }
  }
  if (!check_cocycle(g, 100, 0x5eed))
    fail(ErrorCode::domain, "winding labels are not a cocycle");
  return g;
}

double cycle_length(const WindingGraph& g, const std::vector<CycleStep>& cycle) {
  double s = 0.0;
  for (const CycleStep& c : cycle) s += g.edges[c.edge].length;
  return s;
}

int cycle_winding(const WindingGraph& g, const std::vector<CycleStep>& cycle) {
  int w = 0;
  for (const CycleStep& c : cycle) w += step_winding(g.edges[c.edge], c.forward);
  return w;
}

bool is_closed(const WindingGraph& g, const std::vector<CycleStep>& cycle) {
  if (cycle.empty()) return false;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const WindingEdge& e = g.edges[cycle[k].edge];
    const WindingEdge& f = g.edges[cycle[(k + 1) % cycle.size()].edge];
    if (step_head(e, cycle[k].forward) != step_tail(f, cycle[(k + 1) % cycle.size()].forward)) return false;
  }
  return true;
}

bool check_cocycle(const WindingGraph& g, int walks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int xi = g.xi_axis, other = 1 - xi;
  const int nxi = g.grid.axis(xi).nodes;
  // unit steps along each axis are present for every connectivity
  auto unit_step = [&](std::size_t node, int axis, int dir) -> std::pair<std::size_t, bool> {
    for (std::size_t id : g.incident[node]) {
      const WindingEdge& e = g.edges[id];
      std::array<int, 2> want{0, 0};
      want[axis] = 1;
      if (e.offset != want) continue;
      if (dir > 0 && e.from == node) return {id, true};
      if (dir < 0 && e.to == node) return {id, false};
    }
    fail(ErrorCode::domain, "missing unit edge at node " + std::to_string(node));
  };
  for (int w = 0; w < walks; ++w) {
    std::size_t start = rng() % g.grid.size(), node = start;
    long displacement = 0;
    int winding = 0;
    auto take = [&](std::size_t id, bool forward) {
      const WindingEdge& e = g.edges[id];
      displacement += forward ? e.offset[xi] : -e.offset[xi];
      winding += step_winding(e, forward);
      node = step_head(e, forward);
    };
    const int len = 2 * (g.grid.axis(0).nodes + g.grid.axis(1).nodes);
    for (int k = 0; k < len; ++k) {
      const auto& inc = g.incident[node];
      std::size_t id = inc[rng() % inc.size()];
      take(id, g.edges[id].from == node);
    }
    for (int axis : {other, xi}) {
      const Axis& ax = g.grid.axis(axis);
      int target = g.grid.multi_index(start)[axis];
      while (g.grid.multi_index(node)[axis] != target) {
        int cur = g.grid.multi_index(node)[axis];
        int dir = target > cur ? 1 : -1;
        if (ax.topology == Topology::periodic && std::abs(target - cur) > ax.nodes / 2) dir = -dir;
        auto [id, fwd] = unit_step(node, axis, dir);
        take(id, fwd);
      }
    }
    if (displacement % nxi != 0 || displacement / nxi != winding) return false;
  }
  return true;
}

SystoleResult systole_sigma(const WindingGraph& g) {
  const int xi = g.xi_axis;
  int reach = 0;
  for (const auto& d : offsets(g.connectivity)) reach = std::max(reach, std::abs(d[xi]));
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t N = g.grid.size();

  SystoleResult best;
  best.length = inf;
  for (std::size_t src = 0; src < N; ++src) {
    if (g.grid.multi_index(src)[xi] >= reach) continue;
    std::map<int, std::vector<double>> dist;
    std::map<int, std::vector<long>> pred;  // 2 * edge + forward
    auto level = [&](int l) -> std::vector<double>& {
      auto it = dist.find(l);
      if (it == dist.end()) {
        dist[l].assign(N, inf);
        pred[l].assign(N, -1);
        return dist[l];
      }
      return it->second;
    };
    using Item = std::tuple<double, std::size_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    level(0)[src] = 0.0;
    pq.emplace(0.0, src, 0);
    bool found = false;
    while (!pq.empty()) {
      auto [d, node, l] = pq.top();
      pq.pop();
      if (d > level(l)[node]) continue;
      if (node == src && l == 1) {
        found = true;
        break;
      }
      for (std::size_t id : g.incident[node]) {
        const WindingEdge& e = g.edges[id];
        bool fwd = e.from == node;
        if (!fwd && e.to != node) continue;
        std::size_t m = step_head(e, fwd);
        int ml = l + step_winding(e, fwd);
        double nd = d + e.length;
        if (nd >= best.length) continue;
        std::vector<double>& dl = level(ml);
        if (nd < dl[m]) {
          dl[m] = nd;
          pred[ml][m] = static_cast<long>(2 * id + (fwd ? 1 : 0));
          pq.emplace(nd, m, ml);
        }
      }
      // a self-loop edge would need from == to, which cannot occur for n >= 8
    }
    if (!found) continue;
    SystoleResult r;
    r.source = src;
    std::size_t node = src;
    int l = 1;
    while (!(node == src && l == 0)) {
      long p = pred[l][node];
      CycleStep st{static_cast<std::size_t>(p / 2), (p % 2) == 1};
      const WindingEdge& e = g.edges[st.edge];
      r.cycle.push_back(st);
      l -= step_winding(e, st.forward);
      node = step_tail(e, st.forward);
    }
    std::reverse(r.cycle.begin(), r.cycle.end());
    r.length = cycle_length(g, r.cycle);
    if (r.length < best.length) best = std::move(r);
  }
  if (!std::isfinite(best.length)) fail(ErrorCode::domain, "no cycle with nonzero winding");
  return best;
}

double quantization_bound(Connectivity connectivity) {
  std::vector<double> angles;
  for (const auto& d : offsets(connectivity)) {
    angles.push_back(std::atan2(d[1], d[0]));
    angles.push_back(std::atan2(d[0], d[1]));
  }
  std::sort(angles.begin(), angles.end());
  double gap = 0.0;
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  return 1.0 / std::cos(0.5 * gap) - 1.0;
}

std::string model_name(EqualityModel m) {
  switch (m) {
    case EqualityModel::disk_cylinder: return "disk-cylinder";
    case EqualityModel::sphere_cylinder: return "sphere-cylinder";
    case EqualityModel::flat_torus: return "flat-torus";
  }
  return "unknown";
}

EqualityCertificate equality_certificate(const ModelSpec& spec) {
  require(spec.radius > 0.0, "model radius must be positive");
  for (double l : spec.lengths) require(l > 0.0, "model lengths must be positive");
  EqualityCertificate c;
  c.model = model_name(spec.model);
  std::string lengths;
  for (std::size_t i = 0; i < spec.lengths.size(); ++i) lengths += (i ? ":" : "") + format_real(spec.lengths[i]);

  switch (spec.model) {
    case EqualityModel::disk_cylinder: {
      require(!spec.lengths.empty(), "disk-cylinder needs a fiber length");
      const double r = spec.radius, fiber = spec.lengths[0];
      // boundary S^1(r) x fiber; the winding class wraps the circle factor
      ChartGrid surface = make_chart(2, {spec.resolution, spec.resolution}, {2 * pi, fiber},
                                     {Topology::periodic, Topology::periodic});
      WindingGraph g = build_winding_graph(
          surface, [r](const Point&) { return Mat{r * r, 0, 0, 0, 1, 0, 0, 0, 0}; }, 0, spec.connectivity);
      const double sigma = systole_sigma(g).length;
      ChartMetric m = cylindrical_r3(17, 32, 8, 0.5 * r, r, fiber);
      ScalarField h = level_set_mean_curvature(m.metric, 0);
      NodeMask outer(m.grid.size(), false);
      for (std::size_t n = 0; n < m.grid.size(); ++n) outer[n] = m.grid.multi_index(n)[0] == 16;
      const double h_min = reduce_min(h, outer).value;
      c.lhs = h_min * sigma;
      c.rhs = 2 * pi;
      c.relative_gap = std::abs(c.lhs - c.rhs) / c.rhs;
      c.pass = c.relative_gap <= 1e-2;
      c.params = "r=" + format_real(r) + ";fiber=" + lengths + ";res=" + std::to_string(spec.resolution) +
                 ";connectivity=" + std::to_string(static_cast<int>(spec.connectivity)) +
                 ";sigma=" + format_real(sigma) + ";sigma_quantization_bound=" +
                 format_real(quantization_bound(spec.connectivity)) + ";inf_H=" + format_real(h_min);
      break;
    }
    case EqualityModel::sphere_cylinder: {
      const double r = spec.radius;
      const int nodes = spec.resolution | 1;
      ChartGrid g = make_chart(1, {nodes}, {pi}, {Topology::boundary});
      FlowState s = make_sphere_state(nodes, r, ScalarField(g, spec.phi));
      const double inf_s = reduce_min(s.S).value;
      const double model_s = 2 / (r * r), area = 4 * pi * r * r;
      const double s_gap = std::abs(inf_s - model_s) / model_s;
      c.lhs = model_s * area;
      c.rhs = 8 * pi;
      c.relative_gap = std::abs(c.lhs - c.rhs) / c.rhs;
      c.pass = c.relative_gap <= 1e-2 && s_gap <= 1e-2;
      c.params = "r=" + format_real(r) + ";fiber=" + lengths + ";res=" + std::to_string(nodes) +
                 ";area=analytic-sphere-factor;inf_S_numeric=" + format_real(inf_s) +
                 ";inf_S_gap=" + format_real(s_gap);
      break;
    }
    case EqualityModel::flat_torus: {
      std::vector<double> lens = spec.lengths.empty() ? std::vector<double>{1.0, 1.0} : spec.lengths;
      require(lens.size() >= 2 && lens.size() <= 3, "flat torus needs two or three side lengths");
      std::vector<int> res(lens.size(), spec.resolution);
      ChartMetric m = flat_torus(res, lens);
      ScalarField S = stabilized_scalar(m.metric, ScalarField(m.grid, spec.phi));
      c.lhs = reduce_min(S).value;
      c.rhs = 0.0;
      c.relative_gap = std::abs(c.lhs - c.rhs);
      c.pass = c.relative_gap <= 1e-12;
      c.params = "lengths=" + lengths + ";res=" + std::to_string(spec.resolution) + ";phi=" + format_real(spec.phi) +
                 ";gap=absolute";
      break;
    }
  }
  return c;
}

void write_certificates(const std::string& path, const std::vector<EqualityCertificate>& certs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
  out << "model,params,lhs,rhs,relative_gap,verdict\n";
  for (const auto& c : certs)
    out << c.model << ',' << c.params << ',' << format_real(c.lhs) << ',' << format_real(c.rhs) << ','
        << format_real(c.relative_gap) << ',' << (c.pass ? "pass" : "fail") << '\n';
  if (!out) fail(ErrorCode::io, "write failed for " + path);
}

}  // namespace scl
