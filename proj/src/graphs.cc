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

#include "worklab/graphs.h"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "worklab/rng.h"

namespace worklab {

Graph::Graph(size_t num_vertices, std::vector<Edge> edges) : num_vertices_(num_vertices), adjacency_(num_vertices) {
    if (num_vertices == 0) {
        throw std::invalid_argument("graph needs at least one vertex");
    }
    for (auto &[a, b] : edges) {
        if (a == b) {
            throw std::invalid_argument("self-loop at vertex " + std::to_string(a));
        }
        if (a >= num_vertices || b >= num_vertices) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        if (a > b) {
            std::swap(a, b);
        }
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw std::invalid_argument("duplicate edge");
    }
    edges_ = std::move(edges);
    for (const auto &[a, b] : edges_) {
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto &nbrs : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
    }
}

size_t Graph::max_degree() const {
    size_t r = 0;
    for (const auto &nbrs : adjacency_) {
        r = std::max(r, nbrs.size());
    }
    return r;
}

bool Graph::has_edge(size_t a, size_t b) const {
    if (a >= num_vertices_ || b >= num_vertices_) {
        return false;
    }
    return std::binary_search(adjacency_[a].begin(), adjacency_[a].end(), b);
}

bool Graph::is_connected() const {
    std::vector<bool> seen(num_vertices_, false);
    std::vector<size_t> stack{0};
    seen[0] = true;
    size_t count = 1;
    while (!stack.empty()) {
        size_t v = stack.back();
        stack.pop_back();
        for (size_t w : adjacency_[v]) {
            if (!seen[w]) {
                seen[w] = true;
                count++;
                stack.push_back(w);
            }
        }
    }
    return count == num_vertices_;
}

IndependentSet::IndependentSet(const Graph &graph, std::vector<size_t> vertices) : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
        throw std::invalid_argument("duplicate vertex in independent set");
    }
    for (size_t i = 0; i < vertices_.size(); i++) {
        if (vertices_[i] >= graph.num_vertices()) {
            throw std::invalid_argument("independent set vertex out of range");
        }
        for (size_t j = i + 1; j < vertices_.size(); j++) {
            if (graph.has_edge(vertices_[i], vertices_[j])) {
                throw std::invalid_argument("vertices " + std::to_string(vertices_[i]) + " and " +
                                            std::to_string(vertices_[j]) + " are adjacent");
            }
        }
    }
}

bool IndependentSet::contains(size_t v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::vector<std::vector<uint8_t>> adjacency_upper(const Graph &g) {
    std::vector<std::vector<uint8_t>> a(g.num_vertices(), std::vector<uint8_t>(g.num_vertices(), 0));
    for (const auto &[i, j] : g.edges()) {
        a[i][j] = 1;
    }
    return a;
}

Graph gen_random_graph(size_t n, uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("random graph needs n >= 1");
    }
    Rng rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<Edge> edges;
    for (size_t i = 0; i < n; i++) {
        for (size_t j = i + 1; j < n; j++) {
            if (coin(rng)) {
                edges.emplace_back(i, j);
            }
        }
    }
    return Graph(n, std::move(edges));
}

LatticeKind parse_lattice_kind(const std::string &name) {
    if (name == "cycle") return LatticeKind::cycle;
    if (name == "square_torus") return LatticeKind::square_torus;
    if (name == "triangular_torus") return LatticeKind::triangular_torus;
    if (name == "hexagonal") return LatticeKind::hexagonal;
    throw std::invalid_argument("unknown lattice kind '" + name + "'");
}

std::string to_string(LatticeKind kind) {
    switch (kind) {
        case LatticeKind::cycle:
            return "cycle";
        case LatticeKind::square_torus:
            return "square_torus";
        case LatticeKind::triangular_torus:
            return "triangular_torus";
        case LatticeKind::hexagonal:
            return "hexagonal";
    }
    return "?";
}

Graph gen_lattice(LatticeKind kind, std::span<const size_t> dims) {
    std::vector<Edge> edges;
    if (kind == LatticeKind::cycle) {
        if (dims.size() != 1 || dims[0] < 3) {
            throw std::invalid_argument("cycle needs dims {n} with n >= 3");
        }
        size_t n = dims[0];
        for (size_t v = 0; v < n; v++) {
            edges.emplace_back(v, (v + 1) % n);
        }
        return Graph(n, std::move(edges));
    }
    if (dims.size() != 2) {
        throw std::invalid_argument(to_string(kind) + " needs dims {rows, cols}");
    }
    const size_t rows = dims[0];
    const size_t cols = dims[1];
    auto id = [cols](size_t r, size_t c) { return r * cols + c; };
    switch (kind) {
        case LatticeKind::square_torus:
        case LatticeKind::triangular_torus:
            if (rows < 3 || cols < 3) {
                throw std::invalid_argument(to_string(kind) + " needs rows, cols >= 3");
            }
            for (size_t r = 0; r < rows; r++) {
                for (size_t c = 0; c < cols; c++) {
                    edges.emplace_back(id(r, c), id(r, (c + 1) % cols));
                    edges.emplace_back(id(r, c), id((r + 1) % rows, c));
                    if (kind == LatticeKind::triangular_torus) {
                        edges.emplace_back(id(r, c), id((r + 1) % rows, (c + 1) % cols));
                    }
                }
            }
            break;
        case LatticeKind::hexagonal:
            // Brick wall: every row is a ring, and (r, c) links down to
            // (r+1, c) when r + c is even.
            if (rows < 2 || rows % 2 != 0 || cols < 4 || cols % 2 != 0) {
                throw std::invalid_argument("hexagonal needs even rows >= 2 and even cols >= 4");
            }
            for (size_t r = 0; r < rows; r++) {
                for (size_t c = 0; c < cols; c++) {
                    edges.emplace_back(id(r, c), id(r, (c + 1) % cols));
                    if ((r + c) % 2 == 0) {
                        edges.emplace_back(id(r, c), id((r + 1) % rows, c));
                    }
                }
            }
            break;
        case LatticeKind::cycle:
            break;
    }
    return Graph(rows * cols, std::move(edges));
}

IndependentSet greedy_independent_set(const Graph &g) {
    const size_t n = g.num_vertices();
    std::vector<bool> alive(n, true);
    std::vector<size_t> residual_degree(n);
    for (size_t v = 0; v < n; v++) {
        residual_degree[v] = g.degree(v);
    }
    std::vector<size_t> chosen;
    size_t remaining = n;
    auto remove = [&](size_t v) {
        alive[v] = false;
        remaining--;
        for (size_t w : g.neighbors(v)) {
            if (alive[w]) {
                residual_degree[w]--;
            }
        }
    };
    while (remaining > 0) {
        size_t best = n;
        for (size_t v = 0; v < n; v++) {
            if (alive[v] && (best == n || residual_degree[v] < residual_degree[best])) {
                best = v;
            }
        }
        chosen.push_back(best);
        std::vector<size_t> closed;
        for (size_t w : g.neighbors(best)) {
            if (alive[w]) {
                closed.push_back(w);
            }
        }
        remove(best);
        for (size_t w : closed) {
            remove(w);
        }
    }
    return IndependentSet(g, std::move(chosen));
}

namespace {

struct MisSearch {
    std::vector<uint32_t> nbr_mask;
    uint32_t best_set = 0;
    int best_size = 0;

    void run(uint32_t candidates, uint32_t current, int size) {
        if (candidates == 0) {
            if (size > best_size) {
                best_size = size;
                best_set = current;
            }
            return;
        }
        if (size + std::popcount(candidates) <= best_size) {
            return;
        }
        int v = std::countr_zero(candidates);
        uint32_t bit = uint32_t{1} << v;
        // Include v, then exclude it.
        run(candidates & ~bit & ~nbr_mask[static_cast<size_t>(v)], current | bit, size + 1);
        run(candidates & ~bit, current, size);
    }
};

}  // namespace

IndependentSet max_independent_set_bruteforce(const Graph &g) {
    const size_t n = g.num_vertices();
    if (n > 20) {
        throw std::invalid_argument("brute-force independent set limited to N <= 20");
    }
    MisSearch search;
    search.nbr_mask.assign(n, 0);
    for (const auto &[a, b] : g.edges()) {
        search.nbr_mask[a] |= uint32_t{1} << b;
        search.nbr_mask[b] |= uint32_t{1} << a;
    }
    uint32_t all = (uint32_t{1} << n) - 1;
    search.run(all, 0, 0);
    std::vector<size_t> vertices;
    for (size_t v = 0; v < n; v++) {
        if (search.best_set >> v & 1) {
            vertices.push_back(v);
        }
    }
    return IndependentSet(g, std::move(vertices));
}

double caro_wei_bound(const Graph &g) {
    double total = 0;
    for (size_t v = 0; v < g.num_vertices(); v++) {
        total += 1.0 / static_cast<double>(g.degree(v) + 1);
    }
    return total;
}

Graph read_edge_list(std::istream &in) {
    std::string line;
    auto next_content_line = [&](std::string &out) {
        while (std::getline(in, out)) {
            auto first = out.find_first_not_of(" \t\r");
            if (first != std::string::npos && out[first] != '#') {
                return true;
            }
        }
        return false;
    };
    if (!next_content_line(line)) {
        throw std::invalid_argument("edge list is empty");
    }
    std::istringstream header(line);
    long long n = 0;
    std::string extra;
    if (!(header >> n) || (header >> extra) || n <= 0) {
        throw std::invalid_argument("edge list header must be a positive vertex count, got '" + line + "'");
    }
    std::vector<Edge> edges;
    while (next_content_line(line)) {
        std::istringstream row(line);
        long long a = -1;
        long long b = -1;
        if (!(row >> a >> b) || (row >> extra) || a < 0 || b < 0) {
            throw std::invalid_argument("malformed edge line '" + line + "'");
        }
        edges.emplace_back(static_cast<size_t>(a), static_cast<size_t>(b));
    }
    return Graph(static_cast<size_t>(n), std::move(edges));
}

void write_edge_list(std::ostream &out, const Graph &g) {
    out << g.num_vertices() << "\n";
    for (const auto &[a, b] : g.edges()) {
        out << a << " " << b << "\n";
    }
}

Graph read_edge_list_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open edge list '" + path + "'");
    }
    return read_edge_list(in);
}

void write_edge_list_file(const std::string &path, const Graph &g) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write edge list '" + path + "'");
    }
    write_edge_list(out, g);
}

}  // namespace worklab
