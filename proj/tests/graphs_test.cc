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

#include <gtest/gtest.h>

#include <array>
#include <sstream>

#include "test_util.h"

using namespace worklab;

namespace {

Graph complete_graph(size_t n) {
    std::vector<Edge> edges;
    for (size_t i = 0; i < n; i++) {
        for (size_t j = i + 1; j < n; j++) {
            edges.push_back({i, j});
        }
    }
    return Graph(n, edges);
}

Graph cycle(size_t n) {
    std::array<size_t, 1> dims{n};
    return gen_lattice(LatticeKind::cycle, dims);
}

/// Largest independent set by checking all 2^N subsets.
size_t exhaustive_mis(const Graph &g) {
    const size_t n = g.num_vertices();
    size_t best = 0;
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); mask++) {
        bool ok = true;
        for (const auto &[a, b] : g.edges()) {
            if ((mask >> a & 1) && (mask >> b & 1)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            best = std::max<size_t>(best, static_cast<size_t>(__builtin_popcountll(mask)));
        }
    }
    return best;
}

}  // namespace

TEST(graph, validates_edges) {
    EXPECT_THROW(Graph(3, {{0, 0}}), std::invalid_argument);
    EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
    EXPECT_THROW(Graph(3, {{0, 3}}), std::invalid_argument);
    Graph g(3, {{2, 0}});
    EXPECT_EQ(g.edges().front(), Edge(0, 2));
    EXPECT_TRUE(g.has_edge(2, 0));
}

TEST(independent_set, checks_independence) {
    Graph g(3, {{0, 1}});
    EXPECT_NO_THROW(IndependentSet(g, {0, 2}));
    EXPECT_THROW(IndependentSet(g, {0, 1}), std::invalid_argument);
}

TEST(adjacency_upper, examples) {
    auto empty = adjacency_upper(Graph(3, {}));
    for (const auto &row : empty) {
        for (auto v : row) {
            EXPECT_EQ(v, 0);
        }
    }
    auto single = adjacency_upper(Graph(2, {{0, 1}}));
    EXPECT_EQ(single, (std::vector<std::vector<uint8_t>>{{0, 1}, {0, 0}}));
    auto c4 = adjacency_upper(cycle(4));
    std::vector<std::vector<uint8_t>> expected = {{0, 1, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}};
    EXPECT_EQ(c4, expected);
}

TEST(gen_random_graph, examples) {
    EXPECT_EQ(gen_random_graph(1, 5).edges().size(), 0u);
    EXPECT_EQ(gen_random_graph(12, 99).edges(), gen_random_graph(12, 99).edges());
}

TEST(gen_random_graph, edge_frequency_is_one_half) {
    const size_t n = 20, samples = 10000;
    std::vector<size_t> counts(n * n, 0);
    for (size_t s = 0; s < samples; s++) {
        Graph g = gen_random_graph(n, s);
        for (const auto &[a, b] : g.edges()) {
            counts[a * n + b]++;
        }
    }
    const double sigma = std::sqrt(0.25 / samples);
    size_t total = 0;
    for (size_t a = 0; a < n; a++) {
        for (size_t b = a + 1; b < n; b++) {
            total += counts[a * n + b];
            EXPECT_NEAR(static_cast<double>(counts[a * n + b]) / samples, 0.5, 5 * sigma);
        }
    }
    const double pairs = n * (n - 1) / 2.0;
    EXPECT_NEAR(total / (pairs * samples), 0.5, 5 * std::sqrt(0.25 / (pairs * samples)));
}

TEST(gen_lattice, examples) {
    Graph c6 = cycle(6);
    EXPECT_EQ(c6.edges().size(), 6u);
    for (size_t v = 0; v < 6; v++) {
        EXPECT_EQ(c6.degree(v), 2u);
    }
    std::array<size_t, 2> dims{3, 4};
    Graph torus = gen_lattice(LatticeKind::square_torus, dims);
    EXPECT_EQ(torus.edges().size(), 24u);
    for (size_t v = 0; v < 12; v++) {
        EXPECT_EQ(torus.degree(v), 4u);
    }
    std::array<size_t, 2> odd{3, 5};
    EXPECT_THROW(gen_lattice(LatticeKind::hexagonal, odd), std::invalid_argument);
    std::array<size_t, 1> tiny{2};
    EXPECT_THROW(gen_lattice(LatticeKind::cycle, tiny), std::invalid_argument);
}

TEST(gen_lattice, degrees_hold_for_every_vertex) {
    struct Case {
        LatticeKind kind;
        std::vector<size_t> dims;
        size_t degree;
    };
    std::vector<Case> cases = {
        {LatticeKind::cycle, {3}, 2},           {LatticeKind::cycle, {14}, 2},
        {LatticeKind::square_torus, {3, 3}, 4}, {LatticeKind::square_torus, {4, 4}, 4},
        {LatticeKind::square_torus, {3, 5}, 4}, {LatticeKind::triangular_torus, {3, 3}, 6},
        {LatticeKind::triangular_torus, {4, 5}, 6}, {LatticeKind::hexagonal, {2, 4}, 3},
        {LatticeKind::hexagonal, {4, 6}, 3},    {LatticeKind::hexagonal, {2, 8}, 3},
    };
    for (const auto &c : cases) {
        Graph g = gen_lattice(c.kind, c.dims);
        size_t verts = 1;
        for (size_t x : c.dims) {
            verts *= x;
        }
        ASSERT_EQ(g.num_vertices(), verts);
        for (size_t v = 0; v < verts; v++) {
            EXPECT_EQ(g.degree(v), c.degree) << to_string(c.kind) << " vertex " << v;
        }
        EXPECT_EQ(g.edges().size(), verts * c.degree / 2);
        EXPECT_TRUE(g.is_connected());
    }
}

TEST(greedy_independent_set, examples) {
    EXPECT_EQ(greedy_independent_set(complete_graph(4)).size(), 1u);
    EXPECT_EQ(greedy_independent_set(Graph(5, {})).size(), 5u);
    Graph c6 = cycle(6);
    EXPECT_EQ(greedy_independent_set(c6).size(), 3u);
    EXPECT_EQ(exhaustive_mis(c6), 3u);
}

TEST(max_independent_set_bruteforce, examples) {
    EXPECT_EQ(max_independent_set_bruteforce(complete_graph(3)).size(), 1u);
    Graph p4(4, {{0, 1}, {1, 2}, {2, 3}});
    EXPECT_EQ(max_independent_set_bruteforce(p4).size(), 2u);
    EXPECT_EQ(exhaustive_mis(p4), 2u);
    EXPECT_EQ(max_independent_set_bruteforce(cycle(6)).size(), 3u);
    EXPECT_THROW(max_independent_set_bruteforce(Graph(21, {})), std::invalid_argument);
}

TEST(independent_sets, greedy_between_caro_wei_and_maximum) {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 200; trial++) {
        size_t n = 1 + rng() % 12;
        double p = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        Graph g = worklab::testing::random_graph_with_p(n, p, rng);
        IndependentSet greedy = greedy_independent_set(g);
        IndependentSet(g, greedy.vertices());
        size_t best = max_independent_set_bruteforce(g).size();
        EXPECT_EQ(best, exhaustive_mis(g));
        EXPECT_GE(static_cast<double>(greedy.size()), caro_wei_bound(g) - 1e-9);
        EXPECT_GE(static_cast<double>(greedy.size()), n / (g.max_degree() + 1.0) - 1e-9);
        EXPECT_LE(greedy.size(), best);
    }
}

TEST(edge_list, round_trip) {
    Graph g = gen_random_graph(9, 3);
    std::stringstream s;
    write_edge_list(s, g);
    Graph back = read_edge_list(s);
    EXPECT_EQ(back.num_vertices(), 9u);
    EXPECT_EQ(back.edges(), g.edges());
}

TEST(edge_list, rejects_malformed_lines) {
    for (const char *text : {"3\n0 1 2\n", "3\n0\n", "3\n0 x\n", "3\n0 3\n", "3\n1 1\n", "", "x\n"}) {
        std::stringstream s(text);
        EXPECT_THROW(read_edge_list(s), std::invalid_argument) << text;
    }
    std::stringstream ok("# comment\n3\n\n0 1\n");
    EXPECT_EQ(read_edge_list(ok).edges().size(), 1u);
}
