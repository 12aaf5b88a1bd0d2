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

// Structured chart grids, node-sampled fields, second-order finite
// differences and deterministic reductions.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scl {

inline constexpr int kMaxDim = 3;
inline constexpr int kMinResolution = 8;

enum class Topology { periodic, boundary };

struct Axis {
  int nodes = 0;
  double extent = 0.0;
  Topology topology = Topology::periodic;
  double origin = 0.0;

  double spacing() const {
    return topology == Topology::periodic ? extent / nodes
                                          : extent / (nodes - 1);
  }
  double coord(int i) const { return origin + i * spacing(); }
  bool operator==(const Axis&) const = default;
};

using Index = std::array<int, kMaxDim>;
using Point = std::array<double, kMaxDim>;

/// Rectangular sample grid for one coordinate chart. Nodes are stored in
/// row-major order with axis 0 slowest, so node order is lexicographic.
class ChartGrid {
 public:
  ChartGrid() = default;
  explicit ChartGrid(std::vector<Axis> axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int a) const { return axes_[a]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int a) const { return strides_[a]; }

  Index multi_index(std::size_t node) const;
  std::size_t node(const Index& idx) const;
  double coord(std::size_t node, int a) const;
  Point point(std::size_t node) const;

  /// True when the node sits on the first or last row of a Boundary axis.
  bool on_boundary_edge(std::size_t node) const;

  /// Grid with one axis removed (the slice grid of a graph hypersurface).
  ChartGrid without_axis(int a) const;
  /// Grid with extra axes appended (product charts).
  ChartGrid with_axes(const std::vector<Axis>& extra) const;

  bool operator==(const ChartGrid& o) const { return axes_ == o.axes_; }

 private:
  std::vector<Axis> axes_;
  std::array<std::size_t, kMaxDim> strides_{};
  std::size_t size_ = 0;
};

ChartGrid make_chart(int dim, const std::vector<int>& resolution,
                     const std::vector<double>& extent,
                     const std::vector<Topology>& topology,
                     const std::vector<double>& origin = {});

struct ScalarField {
  ChartGrid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(ChartGrid g, double fill = 0.0)
      : grid(std::move(g)), values(grid.size(), fill) {}
  ScalarField(ChartGrid g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

/// Packed symmetric rank-2 tensor field (metric, Ricci, Hessian, h).
/// Only the upper triangle is stored, so symmetry holds exactly.
struct SymTensorField {
  ChartGrid grid;
  int n = 0;  // tensor dimension, usually grid.dim()
  std::vector<std::vector<double>> comps;

  SymTensorField() = default;
  SymTensorField(ChartGrid g, int tensor_dim);

  static int packed(int i, int j, int n) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  }
  static int component_count(int n) { return n * (n + 1) / 2; }

  double at(std::size_t node, int i, int j) const {
    return comps[packed(i, j, n)][node];
  }
  double& at(std::size_t node, int i, int j) {
    return comps[packed(i, j, n)][node];
  }
  ScalarField component(int i, int j) const;
};

/// Node-local dense matrix in row-major order, dimension <= 3.
using Mat = std::array<double, kMaxDim * kMaxDim>;

Mat node_matrix(const SymTensorField& t, std::size_t node);
double determinant(const Mat& m, int n);
Mat inverse(const Mat& m, int n);
/// Smallest leading principal minor; positive iff the matrix is PD.
double min_leading_minor(const Mat& m, int n);

using ScalarFn = std::function<double(const Point&)>;
using TensorFn = std::function<Mat(const Point&)>;

/// Samples fn at every node. Throws on non-finite values, naming the node.
ScalarField sample_field(const ChartGrid& grid, const ScalarFn& fn);
SymTensorField sample_tensor(const ChartGrid& grid, int tensor_dim,
                             const TensorFn& fn);
SymTensorField identity_metric(const ChartGrid& grid);

// Finite-difference stencils. Each entry is (node, weight).
using Stencil = std::vector<std::pair<std::size_t, double>>;
Stencil stencil_d1(const ChartGrid& g, std::size_t node, int axis);
Stencil stencil_d2(const ChartGrid& g, std::size_t node, int axis);

double d1_at(const ChartGrid& g, std::span<const double> v, std::size_t node,
             int axis);
double d2_at(const ChartGrid& g, std::span<const double> v, std::size_t node,
             int axis);
/// d_i d_j v, symmetrized so that mixed_at(i, j) == mixed_at(j, i).
double mixed_at(const ChartGrid& g, std::span<const double> v,
                std::size_t node, int i, int j);
/// Second derivative d_i d_j (i == j uses the three-point stencil).
double dd_at(const ChartGrid& g, std::span<const double> v, std::size_t node,
             int i, int j);

ScalarField differentiate(const ScalarField& f, int axis, int order);

/// Node volume weights: product of spacings, halved at Boundary-axis ends
/// (trapezoid rule).
std::vector<double> cell_volumes(const ChartGrid& g);

/// Pairwise (tree) summation in node order; bit-reproducible.
double pairwise_sum(std::span<const double> v);

/// Integral of f against sqrt(det g). Zero determinants are tolerated only
/// on Boundary-axis edge rows (coordinate singularities such as poles).
double integrate(const ScalarField& f, const SymTensorField& metric);
double integrate(const ScalarField& f);  // flat measure

struct NodeValue {
  double value = 0.0;
  std::size_t node = 0;
};

using NodeMask = std::vector<char>;

/// Minimum and the first node (lexicographic) attaining it.
NodeValue reduce_min(const ScalarField& f, const NodeMask& mask = {});
NodeValue reduce_max(const ScalarField& f, const NodeMask& mask = {});
double max_abs(const ScalarField& f, const NodeMask& mask = {});
double max_abs(std::span<const double> v, const NodeMask& mask = {});

NodeMask full_mask(const ChartGrid& g);
/// Excludes the first and last rows of every Boundary axis.
NodeMask interior_mask(const ChartGrid& g);
/// Keeps nodes whose coordinate along axis lies in [lo, hi].
NodeMask band_mask(const ChartGrid& g, int axis, double lo, double hi);
NodeMask mask_and(const NodeMask& a, const NodeMask& b);

// Pointwise arithmetic on fields sharing a grid.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField map(const ScalarField& a, const std::function<double(double)>& fn);

void require_same_grid(const ChartGrid& a, const ChartGrid& b,
                       const std::string& what);

}  // namespace scl
