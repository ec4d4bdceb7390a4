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

#include "worklab/ensembles.h"

#include <gtest/gtest.h>

#include <array>
#include <numbers>
#include <sstream>

#include "test_util.h"

using namespace worklab;

namespace {

double norm_sq(const PureState &s) {
    double total = 0;
    for (const auto &a : s.amplitudes()) {
        total += std::norm(a);
    }
    return total;
}

/// CZ gates applied one edge at a time to |+>^N.
Amplitudes sequential_cz(const Graph &g) {
    const size_t n = g.num_vertices(), dim = size_t{1} << n;
    Amplitudes a(dim, Complex(1 / std::sqrt(static_cast<double>(dim))));
    for (const auto &[i, j] : g.edges()) {
        for (size_t z = 0; z < dim; z++) {
            if ((z >> i & 1) && (z >> j & 1)) {
                a[z] = -a[z];
            }
        }
    }
    return a;
}

}  // namespace

TEST(sample_haar, examples) {
    PureState s = sample_haar(1, 2, 7);
    EXPECT_NEAR(norm_sq(s), 1.0, 1e-12);
    EXPECT_EQ(sample_haar(5, 2, 42).amplitudes(), sample_haar(5, 2, 42).amplitudes());
    EXPECT_NE(sample_haar(5, 2, 42).amplitudes(), sample_haar(5, 2, 43).amplitudes());
    EXPECT_THROW(sample_haar(64, 2, 1), std::overflow_error);
}

TEST(sample_haar, mean_overlap_is_one_over_dimension) {
    const size_t samples = 10000;
    double sum = 0, sum_sq = 0;
    for (size_t i = 0; i < samples; i++) {
        double v = std::norm(sample_haar(6, 2, 1000 + i)[0]);
        sum += v;
        sum_sq += v * v;
    }
    double mean = sum / samples;
    double se = std::sqrt((sum_sq / samples - mean * mean) / (samples - 1));
    EXPECT_NEAR(mean, 1.0 / 64, 5 * se);
}

TEST(sample_circuit, depth_zero_is_all_zeros) {
    PureState s = sample_circuit({5, 0, 3});
    EXPECT_DOUBLE_EQ(std::norm(s[0]), 1.0);
    EXPECT_THROW(sample_circuit({1, 3, 3}), std::invalid_argument);
}

TEST(sample_circuit, single_gate_matches_direct_unitary) {
    PureState s = sample_circuit({2, 1, 99});
    Rng rng(99);
    Matrix u = haar_unitary(4, rng);
    for (size_t k = 0; k < 4; k++) {
        EXPECT_LT(std::abs(s[k] - u(k, 0)), 1e-12);
    }
    Matrix rho = worklab::testing::naive_partial_trace(s, {0});
    Eigen::VectorXcd col = u.col(0);
    Matrix expected = Matrix::Zero(2, 2);
    for (size_t a = 0; a < 2; a++) {
        for (size_t b = 0; b < 2; b++) {
            for (size_t rest = 0; rest < 2; rest++) {
                expected(a, b) += col(a + 2 * rest) * std::conj(col(b + 2 * rest));
            }
        }
    }
    EXPECT_LT((rho - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(sample_circuit, norm_preserved) {
    for (uint64_t seed = 0; seed < 10; seed++) {
        EXPECT_NEAR(norm_sq(sample_circuit({7, 20, seed})), 1.0, 1e-9);
    }
}

TEST(haar_unitary, is_unitary) {
    Rng rng(5);
    Matrix u = haar_unitary(4, rng);
    EXPECT_LT((u.adjoint() * u - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(sample_circuit, frame_potential_near_haar) {
    std::vector<PureState> samples;
    for (uint64_t seed = 0; seed < 2000; seed++) {
        samples.push_back(sample_circuit({4, 20, seed}));
    }
    double haar = haar_frame_potential(2, 16);
    EXPECT_NEAR(haar, 2.0 / (16 * 17), 1e-15);
    EXPECT_NEAR(frame_potential(samples, 2), haar, 0.1 * haar);
}

TEST(graph_state, examples) {
    PureState empty = graph_state(Graph(3, {}));
    for (size_t z = 0; z < 8; z++) {
        EXPECT_NEAR(empty[z].real(), 1 / std::sqrt(8.0), 1e-15);
    }
    PureState edge = graph_state(Graph(2, {{0, 1}}));
    std::array<double, 4> expected = {0.5, 0.5, 0.5, -0.5};
    for (size_t z = 0; z < 4; z++) {
        EXPECT_NEAR(std::abs(edge[z] - expected[z]), 0, 1e-15);
    }
    std::array<size_t, 1> dims{4};
    Graph c4 = gen_lattice(LatticeKind::cycle, dims);
    Amplitudes oracle = sequential_cz(c4);
    PureState s = graph_state(c4);
    for (size_t z = 0; z < 16; z++) {
        EXPECT_LT(std::abs(s[z] - oracle[z]), 1e-15);
    }
}

TEST(graph_state, matches_sequential_cz_on_random_graphs) {
    for (uint64_t seed = 0; seed < 30; seed++) {
        Graph g = gen_random_graph(1 + seed % 9, seed);
        Amplitudes oracle = sequential_cz(g);
        PureState s = graph_state(g);
        for (size_t z = 0; z < s.dim(); z++) {
            ASSERT_LT(std::abs(s[z] - oracle[z]), 1e-14);
        }
    }
}

TEST(graph_state, connected_graphs_have_maximally_mixed_marginals) {
    std::mt19937_64 rng(8);
    int checked = 0;
    while (checked < 30) {
        size_t n = 2 + rng() % 9;
        Graph g = worklab::testing::random_graph_with_p(n, 0.4, rng);
        if (!g.is_connected()) {
            continue;
        }
        checked++;
        for (const auto &rho : single_site_marginals(graph_state(g))) {
            EXPECT_LT((rho - Matrix::Identity(2, 2) / 2).cwiseAbs().maxCoeff(), 1e-9);
        }
    }
}

TEST(subset_state, examples) {
    PureState single = subset_state(SubsetSpec(2, {0}));
    EXPECT_DOUBLE_EQ(std::norm(single[0]), 1.0);
    PureState full = subset_state(SubsetSpec(3, {0, 1, 2, 3, 4, 5, 6, 7}));
    for (size_t z = 0; z < 8; z++) {
        EXPECT_NEAR(full[z].real(), 1 / std::sqrt(8.0), 1e-15);
    }
    // Even-parity strings 000, 011, 101, 110.
    std::vector<uint64_t> even = {bitstring_from_text("000"), bitstring_from_text("011"),
                                  bitstring_from_text("101"), bitstring_from_text("110")};
    for (const auto &rho : single_site_marginals(subset_state(SubsetSpec(3, even)))) {
        EXPECT_LT((rho - Matrix::Identity(2, 2) / 2).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(subset_spec, validates_and_round_trips) {
    EXPECT_THROW(SubsetSpec(2, {}), std::invalid_argument);
    EXPECT_THROW(SubsetSpec(2, {1, 1}), std::invalid_argument);
    EXPECT_THROW(SubsetSpec(2, {4}), std::invalid_argument);
    EXPECT_EQ(bitstring_from_text("100"), 1u);
    EXPECT_EQ(bitstring_to_text(1, 3), "100");
    SubsetSpec spec = sample_subset(6, 9, 4);
    std::stringstream s;
    write_subset_spec(s, spec);
    SubsetSpec back = read_subset_spec(s);
    EXPECT_EQ(back.num_sites(), 6u);
    EXPECT_EQ(back.support(), spec.support());
    std::stringstream bad("010\n01\n");
    EXPECT_THROW(read_subset_spec(bad), std::invalid_argument);
}

TEST(sample_subset, examples) {
    EXPECT_EQ(sample_subset(4, 16, 1).size(), 16u);
    EXPECT_EQ(sample_subset(4, 1, 1).size(), 1u);
    EXPECT_EQ(sample_subset(8, 5, 3).support(), sample_subset(8, 5, 3).support());
    EXPECT_THROW(sample_subset(3, 0, 1), std::invalid_argument);
    EXPECT_THROW(sample_subset(3, 9, 1), std::invalid_argument);
    EXPECT_EQ(sample_subset(40, 3, 2).size(), 3u);
}

TEST(sample_subset, inclusion_frequency_is_uniform) {
    const size_t n = 10, k = 32, draws = 10000;
    std::vector<size_t> counts(size_t{1} << n, 0);
    for (size_t i = 0; i < draws; i++) {
        SubsetSpec spec = sample_subset(n, k, 5000 + i);
        for (uint64_t x : spec.support()) {
            counts[x]++;
        }
    }
    const double p = static_cast<double>(k) / (1 << n);
    const double sigma = std::sqrt(p * (1 - p) / draws);
    for (size_t x = 0; x < counts.size(); x++) {
        EXPECT_NEAR(static_cast<double>(counts[x]) / draws, p, 5 * sigma) << x;
    }
}

TEST(frame_potential, examples) {
    PureState s = sample_haar(3, 2, 1);
    std::vector<PureState> same(5, s);
    EXPECT_NEAR(frame_potential(same, 3), 1.0, 1e-12);

    std::vector<PureState> haar16, haar4;
    for (uint64_t i = 0; i < 600; i++) {
        haar16.push_back(sample_haar(4, 2, i));
        haar4.push_back(sample_haar(2, 2, 7000 + i));
    }
    EXPECT_NEAR(frame_potential(haar16, 1), 1.0 / 16, 0.1 / 16);
    EXPECT_NEAR(haar_frame_potential(2, 4), 0.1, 1e-15);
    EXPECT_NEAR(frame_potential(haar4, 2), 0.1, 0.01);
    EXPECT_THROW(frame_potential(std::vector<PureState>{s}, 1), std::invalid_argument);
    std::vector<PureState> mixed = {s, sample_haar(2, 2, 1)};
    EXPECT_THROW(frame_potential(mixed, 1), std::invalid_argument);
}

TEST(frame_potential, haar_estimate_tightens_with_more_samples) {
    const double haar = haar_frame_potential(2, 8);
    std::vector<double> errors, sigmas;
    for (size_t count : {40, 160, 640}) {
        std::vector<PureState> samples;
        for (size_t i = 0; i < count; i++) {
            samples.push_back(sample_haar(3, 2, 90000 + count * 1000 + i));
        }
        errors.push_back(std::abs(frame_potential(samples, 2) - haar));
        // Pair terms |<a|b>|^4 have variance below E|<a|b>|^8 = 4!/(8*9*10*11).
        sigmas.push_back(std::sqrt(24.0 / (8 * 9 * 10 * 11) / static_cast<double>(count)));
    }
    for (size_t k = 0; k + 1 < errors.size(); k++) {
        EXPECT_LE(errors[k + 1], errors[k] + 2 * sigmas[k]);
    }
}

TEST(named_states, ghz_w_plus) {
    PureState g = ghz_state(3);
    EXPECT_NEAR(std::norm(g[0]), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(g[7]), 0.5, 1e-15);
    PureState w = w_state(3);
    EXPECT_NEAR(std::norm(w[1]), 1.0 / 3, 1e-15);
    EXPECT_NEAR(std::norm(w[2]), 1.0 / 3, 1e-15);
    EXPECT_NEAR(std::norm(w[4]), 1.0 / 3, 1e-15);
    EXPECT_NEAR(std::norm(plus_state(2)[3]), 0.25, 1e-15);
}
