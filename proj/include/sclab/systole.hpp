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
#include <cstdint>
#include <string>
#include <vector>

#include "sclab/chart.hpp"

namespace scl {

enum class Connectivity { four = 4, eight = 8, sixteen = 16 };

struct WindingEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double length = 0.0;
  int winding = 0;  // crossings of the xi = 0 cut, from -> to
  std::array<int, 2> offset{};  // index step from -> to
};

/// Lattice graph on a 2-D surface chart; winding counts crossings of the
/// cut xi = origin along the periodic xi axis.
struct WindingGraph {
  ChartGrid grid;
  int xi_axis = 0;
  Connectivity connectivity = Connectivity::four;
  std::vector<WindingEdge> edges;
  std::vector<std::vector<std::size_t>> incident;  // edge ids per node
};

/// A directed use of an edge inside a cycle.
struct CycleStep {
  std::size_t edge = 0;
  bool forward = true;
};

WindingGraph build_winding_graph(const ChartGrid& surface, const TensorFn& metric, int xi_axis,
                                 Connectivity connectivity);

double segment_length(const ChartGrid& surface, const TensorFn& metric, std::size_t from, int d0, int d1);

double cycle_length(const WindingGraph& g, const std::vector<CycleStep>& cycle);
int cycle_winding(const WindingGraph& g, const std::vector<CycleStep>& cycle);
bool is_closed(const WindingGraph& g, const std::vector<CycleStep>& cycle);

/// Checks that edge windings sum to the displacement winding on random closed walks.
bool check_cocycle(const WindingGraph& g, int walks, std::uint64_t seed);

struct SystoleResult {
  double length = 0.0;
  std::vector<CycleStep> cycle;
  std::size_t source = 0;
};

SystoleResult systole_sigma(const WindingGraph& g);

/// Worst relative overestimate of a straight geodesic by lattice paths of the
/// given connectivity on a square Euclidean lattice: 1/cos(gap/2) - 1 for the
/// widest angle between adjacent step directions.
double quantization_bound(Connectivity connectivity);

enum class EqualityModel { disk_cylinder, sphere_cylinder, flat_torus };

struct ModelSpec {
  EqualityModel model = EqualityModel::disk_cylinder;
  double radius = 1.0;
  std::vector<double> lengths;  // fiber lengths, or torus side lengths
  int resolution = 128;
  Connectivity connectivity = Connectivity::sixteen;
  double phi = 0.0;  // constant potential
};

struct EqualityCertificate {
  std::string model;
  std::string params;
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_gap = 0.0;  // absolute gap when rhs = 0
  bool pass = false;
};

EqualityCertificate equality_certificate(const ModelSpec& spec);
std::string model_name(EqualityModel m);

void write_certificates(const std::string& path, const std::vector<EqualityCertificate>& certs);

}  // namespace scl
