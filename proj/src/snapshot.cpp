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

#include "sclab/snapshot.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sclab/error.hpp"

namespace scl {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Snapshot::add(const std::string& name, const ScalarField& f) {
  require_same_grid(grid, f.grid, "snapshot field '" + name + "'");
  require(name.find_first_of(" \t\n") == std::string::npos && !name.empty(),
          "snapshot field names must be non-empty and contain no whitespace");
  fields.emplace_back(name, f.values);
}

const std::vector<double>& Snapshot::field(const std::string& name) const {
  for (const auto& [n, v] : fields)
    if (n == name) return v;
  fail(ErrorCode::invalid_argument, "snapshot has no field '" + name + "'");
}

void write_snapshot(std::ostream& os, const Snapshot& snap) {
  const ChartGrid& g = snap.grid;
  os << "sclab-snapshot 1\n";
  os << "dim " << g.dim() << "\n";
  os << "resolution";
  for (const auto& ax : g.axes()) os << ' ' << ax.nodes;
  os << "\nextent";
  for (const auto& ax : g.axes()) os << ' ' << format_real(ax.extent);
  os << "\ntopology";
  for (const auto& ax : g.axes())
    os << ' ' << (ax.topology == Topology::periodic ? "periodic" : "boundary");
  os << "\norigin";
  for (const auto& ax : g.axes()) os << ' ' << format_real(ax.origin);
  os << "\nfields " << snap.fields.size();
  for (const auto& f : snap.fields) os << ' ' << f.first;
  os << "\n";
  for (const auto& [name, values] : snap.fields) {
    os << "field " << name << "\n";
    for (double v : values) os << format_real(v) << "\n";
  }
}

namespace {

std::string expect_key(std::istream& is, const char* key) {
  std::string line;
  if (!std::getline(is, line))
    fail(ErrorCode::parse, std::string("snapshot truncated before '") + key + "'");
  std::istringstream ls(line);
  std::string k;
  ls >> k;
  if (k != key)
    fail(ErrorCode::parse, std::string("snapshot expected '") + key + "', got '" + k + "'");
  std::string rest;
  std::getline(ls, rest);
  return rest;
}

double parse_real(const std::string& tok) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    // from_chars rejects "nan"/"inf" spellings produced by printf on some libcs
    try {
      std::size_t used = 0;
      v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      fail(ErrorCode::parse, "snapshot: bad number '" + tok + "'");
    }
  }
  return v;
}

template <class T>
std::vector<T> read_list(const std::string& rest, int count, const char* key) {
  std::istringstream ls(rest);
  std::vector<T> out;
  std::string tok;
  while (ls >> tok) {
    if constexpr (std::is_same_v<T, double>) out.push_back(parse_real(tok));
    else if constexpr (std::is_same_v<T, int>) out.push_back(static_cast<int>(parse_real(tok)));
    else out.push_back(tok);
  }
  if (static_cast<int>(out.size()) != count)
    fail(ErrorCode::parse, std::string("snapshot: wrong entry count for '") + key + "'");
  return out;
}

}  // namespace

Snapshot read_snapshot(std::istream& is) {
  std::string magic;
  std::getline(is, magic);
  if (magic != "sclab-snapshot 1") fail(ErrorCode::parse, "not a sclab snapshot");
  int dim = static_cast<int>(parse_real(expect_key(is, "dim").substr(1)));
  auto res = read_list<int>(expect_key(is, "resolution"), dim, "resolution");
  auto ext = read_list<double>(expect_key(is, "extent"), dim, "extent");
  auto top = read_list<std::string>(expect_key(is, "topology"), dim, "topology");
  auto org = read_list<double>(expect_key(is, "origin"), dim, "origin");
  std::vector<Topology> topo;
  for (const auto& t : top) {
    if (t == "periodic") topo.push_back(Topology::periodic);
    else if (t == "boundary") topo.push_back(Topology::boundary);
    else fail(ErrorCode::parse, "snapshot: unknown topology '" + t + "'");
  }
  Snapshot snap{make_chart(dim, res, ext, topo, org), {}};
  std::istringstream fl(expect_key(is, "fields"));
  int count = 0;
  fl >> count;
  std::vector<std::string> names;
  std::string name;
  while (fl >> name) names.push_back(name);
  if (static_cast<int>(names.size()) != count)
    fail(ErrorCode::parse, "snapshot: field count does not match names");
  for (const auto& expected : names) {
    std::string got = expect_key(is, "field");
    if (got.size() < 2 || got.substr(1) != expected)
      fail(ErrorCode::parse, "snapshot: expected field '" + expected + "'");
    std::vector<double> values(snap.grid.size());
    std::string line;
    for (auto& v : values) {
      if (!std::getline(is, line)) fail(ErrorCode::parse, "snapshot: truncated field '" + expected + "'");
      v = parse_real(line);
    }
    snap.fields.emplace_back(expected, std::move(values));
  }
  return snap;
}

void save_snapshot(const std::string& path, const Snapshot& snap) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::io, "cannot write snapshot '" + path + "'");
  write_snapshot(os, snap);
  if (!os) fail(ErrorCode::io, "write failed for '" + path + "'");
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::io, "cannot read snapshot '" + path + "'");
  return read_snapshot(is);
}

}  // namespace scl
