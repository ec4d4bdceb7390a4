// Copyright 2026 The worklab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace worklab {

using Edge = std::pair<size_t, size_t>;

/// Simple undirected graph on vertices [0, N).
class Graph {
   public:
    /// Edges are normalized to (min, max) and sorted. Throws
    /// std::invalid_argument on self-loops, duplicates or out-of-range ends.
    Graph(size_t num_vertices, std::vector<Edge> edges);

    size_t num_vertices() const { return num_vertices_; }
    const std::vector<Edge> &edges() const { return edges_; }
    const std::vector<size_t> &neighbors(size_t v) const { return adjacency_[v]; }
    size_t degree(size_t v) const { return adjacency_[v].size(); }
    size_t max_degree() const;
    bool has_edge(size_t a, size_t b) const;
    bool is_connected() const;

   private:
    size_t num_vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<size_t>> adjacency_;
};

/// Vertex set of a graph with no internal edges.
class IndependentSet {
   public:
    /// Checks every pair exhaustively; throws std::invalid_argument if two
    /// members are adjacent or a vertex is out of range.
    IndependentSet(const Graph &graph, std::vector<size_t> vertices);

    const std::vector<size_t> &vertices() const { return vertices_; }
    size_t size() const { return vertices_.size(); }
    bool contains(size_t v) const;

   private:
    std::vector<size_t> vertices_;
};

/// Strictly upper-triangular 0/1 matrix with A[i][j] = 1 iff (i,j) is an edge, i < j.
std::vector<std::vector<uint8_t>> adjacency_upper(const Graph &g);

/// Each of the C(n,2) edges kept independently with probability 1/2.
Graph gen_random_graph(size_t n, uint64_t seed);

enum class LatticeKind { cycle, square_torus, triangular_torus, hexagonal };

LatticeKind parse_lattice_kind(const std::string &name);
std::string to_string(LatticeKind kind);

/// Periodic lattices with uniform degree: cycle (2), square torus (4),
/// triangular torus (6), hexagonal brick-wall torus (3).
///
/// dims: cycle {n} with n >= 3; square/triangular {rows, cols} both >= 3;
/// hexagonal {rows, cols} with rows even and >= 2, cols even and >= 4.
/// Vertex (r, c) has index r * cols + c. Throws std::invalid_argument on
/// incompatible dims.
Graph gen_lattice(LatticeKind kind, std::span<const size_t> dims);

/// Minimum-residual-degree greedy (lowest index on ties). Meets the
/// Caro-Wei bound sum_v 1/(deg(v)+1).
IndependentSet greedy_independent_set(const Graph &g);

/// Exact maximum independent set by branch and bound; N <= 20.
IndependentSet max_independent_set_bruteforce(const Graph &g);

/// sum_v 1 / (deg(v) + 1).
double caro_wei_bound(const Graph &g);

/// Edge-list text: first line "N", then one "i j" per line.
Graph read_edge_list(std::istream &in);
void write_edge_list(std::ostream &out, const Graph &g);
Graph read_edge_list_file(const std::string &path);
void write_edge_list_file(const std::string &path, const Graph &g);

}  // namespace worklab
