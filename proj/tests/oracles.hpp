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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sclab/spectral.hpp"
#include "sclab/systole.hpp"
#include <vector>

namespace scl::testing {

inline Eigen::MatrixXd dense_operator(const CouplingTable& op) {
  const auto n = static_cast<Eigen::Index>(op.rows());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < op.rows(); ++i)
    for (std::size_t k = op.row_start[i]; k < op.row_start[i + 1]; ++k)
      L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(op.column[k])) += op.value[k];
  return L;
}

/// Smallest real part among the eigenvalues of the dense, non-symmetrized operator.
inline double dense_min_eigenvalue(const CouplingTable& op) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(dense_operator(op), false);
  double lo = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) lo = std::min(lo, es.eigenvalues()[i].real());
  return lo;
}

/// Root of a continuous function bracketed by [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Sum of edge lengths in ascending order, independent of traversal order.
inline double canonical_length(const WindingGraph& g, std::vector<std::size_t> edges) {
  std::vector<double> l;
  for (std::size_t e : edges) l.push_back(g.edges[e].length);
  std::sort(l.begin(), l.end());
  double s = 0.0;
  for (double x : l) s += x;
  return s;
}

/// Exhaustive depth-first enumeration of simple cycles with winding +-1; each cycle is
/// rooted at its lowest node index. Returns the edge ids of a shortest one.
inline std::vector<std::size_t> exhaustive_winding_cycle(const WindingGraph& g) {
  const std::size_t n = g.grid.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_edges, path;
  std::vector<char> on_path(n, 0);
  std::function<void(std::size_t, std::size_t, double, int)> dfs = [&](std::size_t root, std::size_t node,
                                                                       double len, int wind) {
    for (std::size_t id : g.incident[node]) {
      const WindingEdge& e = g.edges[id];
      bool fwd = e.from == node;
      std::size_t next = fwd ? e.to : e.from;
      int w = wind + (fwd ? e.winding : -e.winding);
      double l = len + e.length;
      if (l > best + 1e-9 || next < root) continue;
      if (!path.empty() && id == path.back()) continue;
      if (next == root) {
        if (std::abs(w) != 1) continue;
        path.push_back(id);
        double c = canonical_length(g, path);
        if (c < best) {
          best = c;
          best_edges = path;
        }
        path.pop_back();
        continue;
      }
      if (on_path[next]) continue;
      on_path[next] = 1;
      path.push_back(id);
      dfs(root, next, l, w);
      path.pop_back();
      on_path[next] = 0;
    }
  };
  for (std::size_t root = 0; root < n; ++root) {
    on_path[root] = 1;
    dfs(root, root, 0.0, 0);
    on_path[root] = 0;
  }
  return best_edges;
}

}  // namespace scl::testing
