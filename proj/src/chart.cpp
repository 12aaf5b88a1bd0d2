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

#include "sclab/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "sclab/error.hpp"
#include "sclab/parallel.hpp"

namespace scl {

// ---------------------------------------------------------------- threads

namespace {
unsigned g_threads = 0;

unsigned default_threads() {
  if (const char* env = std::getenv("SCL_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}
}  // namespace

void set_thread_count(unsigned n) { g_threads = n; }
unsigned thread_count() { return g_threads == 0 ? default_threads() : g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::min<std::size_t>(thread_count(), n / 256 + 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------- grid

ChartGrid::ChartGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  require(!axes_.empty() && dim() <= kMaxDim, "chart dimension must be 1-3");
  for (const auto& ax : axes_) {
    require(ax.nodes >= kMinResolution, "resolution must be >= 8 on every axis");
    require(std::isfinite(ax.extent) && ax.extent > 0.0,
            "chart extent must be positive");
  }
  size_ = 1;
  for (int a = dim() - 1; a >= 0; --a) {
    strides_[a] = size_;
    size_ *= static_cast<std::size_t>(axes_[a].nodes);
  }
}

Index ChartGrid::multi_index(std::size_t node) const {
  Index idx{0, 0, 0};
  for (int a = 0; a < dim(); ++a) {
    idx[a] = static_cast<int>(node / strides_[a]);
    node %= strides_[a];
  }
  return idx;
}

std::size_t ChartGrid::node(const Index& idx) const {
  std::size_t n = 0;
  for (int a = 0; a < dim(); ++a) n += static_cast<std::size_t>(idx[a]) * strides_[a];
  return n;
}

double ChartGrid::coord(std::size_t node, int a) const {
  return axes_[a].coord(static_cast<int>((node / strides_[a]) % axes_[a].nodes));
}

Point ChartGrid::point(std::size_t node) const {
  Point p{0, 0, 0};
  Index idx = multi_index(node);
  for (int a = 0; a < dim(); ++a) p[a] = axes_[a].coord(idx[a]);
  return p;
}

bool ChartGrid::on_boundary_edge(std::size_t node) const {
  Index idx = multi_index(node);
  for (int a = 0; a < dim(); ++a) {
    if (axes_[a].topology == Topology::boundary &&
        (idx[a] == 0 || idx[a] == axes_[a].nodes - 1))
      return true;
  }
  return false;
}

ChartGrid ChartGrid::without_axis(int a) const {
  require(dim() >= 2, "cannot remove the only axis of a chart");
  std::vector<Axis> rest;
  for (int b = 0; b < dim(); ++b)
    if (b != a) rest.push_back(axes_[b]);
  return ChartGrid(rest);
}

ChartGrid ChartGrid::with_axes(const std::vector<Axis>& extra) const {
  std::vector<Axis> all = axes_;
  all.insert(all.end(), extra.begin(), extra.end());
  if (static_cast<int>(all.size()) > kMaxDim)
    fail(ErrorCode::invalid_argument, "product chart exceeds dimension 3");
  return ChartGrid(all);
}

ChartGrid make_chart(int dim, const std::vector<int>& resolution,
                     const std::vector<double>& extent,
                     const std::vector<Topology>& topology,
                     const std::vector<double>& origin) {
  require(dim >= 1 && dim <= kMaxDim, "chart dimension must be 1-3");
  require(static_cast<int>(resolution.size()) == dim &&
              static_cast<int>(extent.size()) == dim &&
              static_cast<int>(topology.size()) == dim,
          "per-axis parameter count does not match dimension");
  require(origin.empty() || static_cast<int>(origin.size()) == dim,
          "origin count does not match dimension");
  std::vector<Axis> axes;
  for (int a = 0; a < dim; ++a)
    axes.push_back({resolution[a], extent[a], topology[a],
                    origin.empty() ? 0.0 : origin[a]});
  return ChartGrid(axes);
}

// ---------------------------------------------------------------- fields

ScalarField::ScalarField(ChartGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  require(values.size() == grid.size(), "field value count must equal node count");
}

SymTensorField::SymTensorField(ChartGrid g, int tensor_dim)
    : grid(std::move(g)), n(tensor_dim) {
  comps.assign(component_count(n), std::vector<double>(grid.size(), 0.0));
}

ScalarField SymTensorField::component(int i, int j) const {
  return ScalarField(grid, comps[packed(i, j, n)]);
}

Mat node_matrix(const SymTensorField& t, std::size_t node) {
  Mat m{};
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) m[i * kMaxDim + j] = t.at(node, i, j);
  return m;
}

double determinant(const Mat& m, int n) {
  auto e = [&](int i, int j) { return m[i * kMaxDim + j]; };
  switch (n) {
    case 1: return e(0, 0);
    case 2: return e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
    default:
      return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
             e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
             e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
  }
}

Mat inverse(const Mat& m, int n) {
  auto e = [&](int i, int j) { return m[i * kMaxDim + j]; };
  Mat r{};
  double det = determinant(m, n);
  if (n == 1) {
    r[0] = 1.0 / det;
  } else if (n == 2) {
    r[0] = e(1, 1) / det;
    r[1] = -e(0, 1) / det;
    r[kMaxDim] = -e(1, 0) / det;
    r[kMaxDim + 1] = e(0, 0) / det;
  } else {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
        r[i * kMaxDim + j] = (e(i1, j1) * e(i2, j2) - e(i1, j2) * e(i2, j1)) / det;
      }
  }
  return r;
}

double min_leading_minor(const Mat& m, int n) {
  double lo = m[0];
  for (int k = 2; k <= n; ++k) lo = std::min(lo, determinant(m, k));
  return lo;
}

namespace {
std::string node_label(const ChartGrid& g, std::size_t node) {
  std::ostringstream os;
  Index idx = g.multi_index(node);
  os << node << " (";
  for (int a = 0; a < g.dim(); ++a) os << (a ? "," : "") << idx[a];
  os << ")";
  return os.str();
}
}  // namespace

ScalarField sample_field(const ChartGrid& grid, const ScalarFn& fn) {
  ScalarField f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = fn(grid.point(i));
    if (!std::isfinite(v))
      fail(ErrorCode::domain, "non-finite sample at node " + node_label(grid, i));
    f.values[i] = v;
  }
  return f;
}

SymTensorField sample_tensor(const ChartGrid& grid, int tensor_dim,
                             const TensorFn& fn) {
  SymTensorField t(grid, tensor_dim);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    Mat m = fn(grid.point(node));
    for (int i = 0; i < tensor_dim; ++i)
      for (int j = i; j < tensor_dim; ++j) {
        double a = m[i * kMaxDim + j], b = m[j * kMaxDim + i];
        if (!std::isfinite(a) || !std::isfinite(b))
          fail(ErrorCode::domain,
               "non-finite tensor sample at node " + node_label(grid, node));
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
          fail(ErrorCode::invalid_argument,
               "tensor sample is not symmetric at node " + node_label(grid, node));
        t.at(node, i, j) = 0.5 * (a + b);
      }
  }
  return t;
}

SymTensorField identity_metric(const ChartGrid& grid) {
  SymTensorField t(grid, grid.dim());
  for (int i = 0; i < grid.dim(); ++i)
    std::fill(t.comps[SymTensorField::packed(i, i, t.n)].begin(),
              t.comps[SymTensorField::packed(i, i, t.n)].end(), 1.0);
  return t;
}

// ---------------------------------------------------------------- stencils

namespace {
std::size_t shifted(const ChartGrid& g, std::size_t node, int axis, int i, int by) {
  const Axis& ax = g.axis(axis);
  int j = i + by;
  if (ax.topology == Topology::periodic) j = ((j % ax.nodes) + ax.nodes) % ax.nodes;
  return node + (static_cast<std::ptrdiff_t>(j) - i) *
                    static_cast<std::ptrdiff_t>(g.stride(axis));
}
}  // namespace

namespace {

struct RawStencil {
  std::array<std::pair<std::size_t, double>, 4> terms;
  int count;
  double scale;
};

// Integer coefficients with the grid scale kept apart, so that differences of
// shifted data cancel before any rounding by 1/h.
RawStencil raw_d1(const ChartGrid& g, std::size_t node, int axis) {
  const Axis& ax = g.axis(axis);
  int i = g.multi_index(node)[axis];
  double scale = 1.0 / (2 * ax.spacing());
  if (ax.topology == Topology::boundary && (i == 0 || i == ax.nodes - 1)) {
    int s = i == 0 ? 1 : -1;
    return {{{{node, -3.0 * s},
              {shifted(g, node, axis, i, s), 4.0 * s},
              {shifted(g, node, axis, i, 2 * s), -1.0 * s},
              {0, 0.0}}},
            3, scale};
  }
  return {{{{shifted(g, node, axis, i, 1), 1.0},
            {shifted(g, node, axis, i, -1), -1.0},
            {0, 0.0},
            {0, 0.0}}},
          2, scale};
}

RawStencil raw_d2(const ChartGrid& g, std::size_t node, int axis) {
  const Axis& ax = g.axis(axis);
  int i = g.multi_index(node)[axis];
  double scale = 1.0 / (ax.spacing() * ax.spacing());
  if (ax.topology == Topology::boundary && (i == 0 || i == ax.nodes - 1)) {
    int s = i == 0 ? 1 : -1;
    return {{{{node, 2.0},
              {shifted(g, node, axis, i, s), -5.0},
              {shifted(g, node, axis, i, 2 * s), 4.0},
              {shifted(g, node, axis, i, 3 * s), -1.0}}},
            4, scale};
  }
  return {{{{shifted(g, node, axis, i, 1), 1.0},
            {node, -2.0},
            {shifted(g, node, axis, i, -1), 1.0},
            {0, 0.0}}},
          3, scale};
}

Stencil scaled(const RawStencil& r) {
  Stencil out;
  for (int k = 0; k < r.count; ++k)
    out.push_back({r.terms[k].first, r.terms[k].second * r.scale});
  return out;
}

double weighted_sum(const RawStencil& r, std::span<const double> v) {
  double s = 0.0;
  for (int k = 0; k < r.count; ++k) s += r.terms[k].second * v[r.terms[k].first];
  return s * r.scale;
}

}  // namespace

Stencil stencil_d1(const ChartGrid& g, std::size_t node, int axis) {
  return scaled(raw_d1(g, node, axis));
}

Stencil stencil_d2(const ChartGrid& g, std::size_t node, int axis) {
  return scaled(raw_d2(g, node, axis));
}

double d1_at(const ChartGrid& g, std::span<const double> v, std::size_t node,
             int axis) {
  return weighted_sum(raw_d1(g, node, axis), v);
}

double d2_at(const ChartGrid& g, std::span<const double> v, std::size_t node,
             int axis) {
  return weighted_sum(raw_d2(g, node, axis), v);
}

double mixed_at(const ChartGrid& g, std::span<const double> v,
                std::size_t node, int i, int j) {
  double a = 0.0, b = 0.0;
  for (auto [n, w] : stencil_d1(g, node, j)) a += w * d1_at(g, v, n, i);
  for (auto [n, w] : stencil_d1(g, node, i)) b += w * d1_at(g, v, n, j);
  return 0.5 * (a + b);
}

double dd_at(const ChartGrid& g, std::span<const double> v, std::size_t node,
             int i, int j) {
  return i == j ? d2_at(g, v, node, i) : mixed_at(g, v, node, i, j);
}

ScalarField differentiate(const ScalarField& f, int axis, int order) {
  require(order == 1 || order == 2, "derivative order must be 1 or 2");
  require(axis >= 0 && axis < f.grid.dim(), "derivative axis out of range");
  ScalarField out(f.grid);
  parallel_for(f.size(), [&](std::size_t n) {
    out.values[n] = order == 1 ? d1_at(f.grid, f.values, n, axis)
                               : d2_at(f.grid, f.values, n, axis);
  });
  return out;
}

// ---------------------------------------------------------------- reductions

std::vector<double> cell_volumes(const ChartGrid& g) {
  std::vector<double> vol(g.size(), 1.0);
  for (std::size_t n = 0; n < g.size(); ++n) {
    Index idx = g.multi_index(n);
    for (int a = 0; a < g.dim(); ++a) {
      const Axis& ax = g.axis(a);
      double w = ax.spacing();
      if (ax.topology == Topology::boundary && (idx[a] == 0 || idx[a] == ax.nodes - 1))
        w *= 0.5;
      vol[n] *= w;
    }
  }
  return vol;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

double integrate(const ScalarField& f, const SymTensorField& metric) {
  require_same_grid(f.grid, metric.grid, "integrate");
  std::vector<double> vol = cell_volumes(f.grid);
  std::vector<double> terms(f.size());
  for (std::size_t n = 0; n < f.size(); ++n) {
    double det = determinant(node_matrix(metric, n), metric.n);
    if (!(det > 0.0)) {
      if (!(det >= 0.0 && f.grid.on_boundary_edge(n)))
        fail(ErrorCode::domain,
             "non-positive metric determinant at node " + node_label(f.grid, n));
      det = 0.0;
    }
    terms[n] = f.values[n] * std::sqrt(det) * vol[n];
  }
  return pairwise_sum(terms);
}

double integrate(const ScalarField& f) {
  std::vector<double> vol = cell_volumes(f.grid);
  std::vector<double> terms(f.size());
  for (std::size_t n = 0; n < f.size(); ++n) terms[n] = f.values[n] * vol[n];
  return pairwise_sum(terms);
}

namespace {
bool keep(const NodeMask& m, std::size_t n) { return m.empty() || m[n]; }
}  // namespace

NodeValue reduce_min(const ScalarField& f, const NodeMask& mask) {
  NodeValue best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t n = 0; n < f.size(); ++n)
    if (keep(mask, n) && f.values[n] < best.value) best = {f.values[n], n};
  return best;
}

NodeValue reduce_max(const ScalarField& f, const NodeMask& mask) {
  NodeValue best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t n = 0; n < f.size(); ++n)
    if (keep(mask, n) && f.values[n] > best.value) best = {f.values[n], n};
  return best;
}

double max_abs(std::span<const double> v, const NodeMask& mask) {
  double m = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n)
    if (keep(mask, n)) {
      double a = std::abs(v[n]);
      if (std::isnan(a)) return a;
      m = std::max(m, a);
    }
  return m;
}

double max_abs(const ScalarField& f, const NodeMask& mask) {
  return max_abs(std::span<const double>(f.values), mask);
}

NodeMask full_mask(const ChartGrid& g) { return NodeMask(g.size(), 1); }

NodeMask interior_mask(const ChartGrid& g) {
  NodeMask m(g.size(), 1);
  for (std::size_t n = 0; n < g.size(); ++n) m[n] = !g.on_boundary_edge(n);
  return m;
}

NodeMask band_mask(const ChartGrid& g, int axis, double lo, double hi) {
  NodeMask m(g.size(), 0);
  for (std::size_t n = 0; n < g.size(); ++n) {
    double x = g.coord(n, axis);
    m[n] = x >= lo - 1e-12 && x <= hi + 1e-12;
  }
  return m;
}

NodeMask mask_and(const NodeMask& a, const NodeMask& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  NodeMask m(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) m[n] = a[n] && b[n];
  return m;
}

// ---------------------------------------------------------------- arithmetic

void require_same_grid(const ChartGrid& a, const ChartGrid& b,
                       const std::string& what) {
  if (!(a == b)) fail(ErrorCode::invalid_argument, what + ": grid mismatch");
}

namespace {
template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
  require_same_grid(a.grid, b.grid, "field arithmetic");
  ScalarField r(a.grid);
  for (std::size_t n = 0; n < a.size(); ++n) r.values[n] = op(a.values[n], b.values[n]);
  return r;
}
}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x * y; });
}
ScalarField operator*(double s, const ScalarField& a) {
  ScalarField r(a.grid);
  for (std::size_t n = 0; n < a.size(); ++n) r.values[n] = s * a.values[n];
  return r;
}
ScalarField map(const ScalarField& a, const std::function<double(double)>& fn) {
  ScalarField r(a.grid);
  for (std::size_t n = 0; n < a.size(); ++n) r.values[n] = fn(a.values[n]);
  return r;
}

}  // namespace scl
