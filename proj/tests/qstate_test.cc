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

#include "worklab/qstate.h"

#include <gtest/gtest.h>

#include <numbers>

#include "test_util.h"

using namespace worklab;
using worklab::testing::kLn2;
using worklab::testing::naive_partial_trace;
using worklab::testing::random_state;

namespace {

PureState ghz3() {
    Amplitudes a(8, 0.0);
    a[0] = a[7] = 1 / std::numbers::sqrt2;
    return make_pure(a, 3, 2);
}

}  // namespace

TEST(make_pure, basis_state) {
    PureState s = make_pure({1, 0, 0, 0}, 2, 2);
    EXPECT_EQ(s.dim(), 4u);
    EXPECT_DOUBLE_EQ(std::norm(s[0]), 1.0);
}

TEST(make_pure, renormalizes_near_unit_input) {
    PureState s = make_pure({1 / std::numbers::sqrt2 + 1e-8, 1 / std::numbers::sqrt2}, 1, 2);
    EXPECT_NEAR(std::norm(s[0]) + std::norm(s[1]), 1.0, 1e-15);
    PureState plus = normalized({2, 2}, 1, 2);
    EXPECT_NEAR(plus[0].real(), 1 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(plus[1].real(), 1 / std::numbers::sqrt2, 1e-15);
}

TEST(make_pure, rejects_bad_input) {
    EXPECT_THROW(make_pure(Amplitudes(5, 0.5), 2, 2), std::invalid_argument);
    EXPECT_THROW(make_pure(Amplitudes(4, 0.0), 2, 2), std::invalid_argument);
    EXPECT_THROW(normalized(Amplitudes(4, 0.0), 2, 2), std::invalid_argument);
    EXPECT_THROW(make_pure({2, 2}, 1, 2), std::invalid_argument);
    EXPECT_THROW(make_pure({1, 0}, 1, 1), std::invalid_argument);
}

TEST(pure_state, little_endian_basis) {
    std::vector<size_t> digits = {1, 0, 2};
    PureState s = PureState::basis(digits, 3);
    EXPECT_EQ(std::norm(s[1 + 0 * 3 + 2 * 9]), 1.0);
    EXPECT_EQ(s.stride(2), 9u);
}

TEST(site_subset, validates) {
    SiteSubset s({2, 0}, 3);
    EXPECT_EQ(s.sites(), (std::vector<size_t>{0, 2}));
    EXPECT_EQ(s.complement().sites(), (std::vector<size_t>{1}));
    EXPECT_THROW(SiteSubset({0, 0}, 3), std::invalid_argument);
    EXPECT_THROW(SiteSubset({3}, 3), std::invalid_argument);
}

TEST(reduced_density, product_state) {
    PureState s = make_pure({1, 0, 0, 0}, 2, 2);
    Matrix rho = reduced_density(s, SiteSubset({0}, 2)).matrix();
    EXPECT_NEAR(std::abs(rho(0, 0) - 1.0), 0, 1e-15);
    EXPECT_NEAR(std::abs(rho(1, 1)), 0, 1e-15);
}

TEST(reduced_density, ghz_marginal) {
    Matrix rho = reduced_density(ghz3(), SiteSubset({1}, 3)).matrix();
    EXPECT_NEAR(rho(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(rho(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(rho(0, 1)), 0, 1e-15);
}

TEST(reduced_density, random_three_qubits_against_naive_trace) {
    std::mt19937_64 rng(11);
    PureState s = random_state(3, 2, rng);
    Matrix rho = reduced_density(s, SiteSubset({0, 2}, 3)).matrix();
    Matrix oracle = naive_partial_trace(s, {0, 2});
    EXPECT_LT((rho - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(reduced_density, rejects_empty_subset) {
    std::mt19937_64 rng(1);
    EXPECT_THROW(reduced_density(random_state(2, 2, rng), SiteSubset({}, 2)), std::invalid_argument);
}

TEST(reduced_density, property_matches_naive_trace) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = 1 + rng() % 4;
        size_t d = (n <= 2 && rng() % 3 == 0) ? 3 : 2;
        PureState s = random_state(n, d, rng);
        std::vector<size_t> keep;
        for (size_t site = 0; site < n; site++) {
            if (rng() % 2) {
                keep.push_back(site);
            }
        }
        if (keep.empty()) {
            keep.push_back(rng() % n);
        }
        Matrix rho = reduced_density(s, SiteSubset(keep, n)).matrix();
        EXPECT_LT((rho - naive_partial_trace(s, keep)).cwiseAbs().maxCoeff(), 1e-12) << "trial " << trial;
    }
}

TEST(single_site_marginals, agree_with_reduced_density) {
    std::mt19937_64 rng(5);
    PureState s = random_state(4, 2, rng);
    auto marginals = single_site_marginals(s);
    ASSERT_EQ(marginals.size(), 4u);
    for (size_t n = 0; n < 4; n++) {
        EXPECT_LT((marginals[n] - naive_partial_trace(s, {n})).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(von_neumann_entropy, examples) {
    std::vector<double> half = {0.5, 0.5};
    EXPECT_NEAR(von_neumann_entropy(DensityOperator::diagonal(half)), kLn2, 1e-15);
    std::vector<double> pure = {1, 0};
    EXPECT_EQ(von_neumann_entropy(DensityOperator::diagonal(pure)), 0.0);
    std::vector<double> biased = {0.75, 0.25};
    EXPECT_NEAR(von_neumann_entropy(DensityOperator::diagonal(biased)), 0.5623351446188083, 1e-15);
}

TEST(von_neumann_entropy, rejects_non_hermitian) {
    Matrix m(2, 2);
    m << 0.5, 0.3, 0.0, 0.5;
    EXPECT_THROW(von_neumann_entropy(m), std::invalid_argument);
    EXPECT_THROW(DensityOperator::from_matrix(m), std::invalid_argument);
}

TEST(density_operator, validates) {
    Matrix m = Matrix::Identity(2, 2);
    EXPECT_THROW(DensityOperator::from_matrix(m), std::invalid_argument);
    Matrix neg(2, 2);
    neg << 1.5, 0, 0, -0.5;
    EXPECT_THROW(DensityOperator::from_matrix(neg), std::invalid_argument);
    EXPECT_NO_THROW(DensityOperator::from_matrix(m / 2));
}

TEST(shannon_entropy, examples) {
    EXPECT_EQ(shannon_entropy(std::map<std::string, double>{{"a", 1.0}}), 0.0);
    std::vector<double> uniform(8, 0.125);
    EXPECT_NEAR(shannon_entropy(uniform), 3 * kLn2, 1e-15);
    std::vector<double> biased = {0.75, 0.25};
    std::map<std::string, double> dist = {{"a", 0.75}, {"b", 0.25}};
    EXPECT_NEAR(shannon_entropy(dist), von_neumann_entropy(DensityOperator::diagonal(biased)), 1e-15);
}

TEST(shannon_entropy, rejects_bad_distributions) {
    std::vector<double> negative = {1.5, -0.5};
    EXPECT_THROW(shannon_entropy(negative), std::invalid_argument);
    std::vector<double> short_mass = {0.5, 0.4};
    EXPECT_THROW(shannon_entropy(short_mass), std::invalid_argument);
}

TEST(overlap, examples) {
    PureState zz = make_pure({1, 0, 0, 0}, 2, 2);
    PureState oz = make_pure({0, 0, 1, 0}, 2, 2);
    EXPECT_NEAR(std::abs(overlap(zz, zz) - 1.0), 0, 1e-15);
    EXPECT_EQ(std::abs(overlap(oz, zz)), 0.0);
    PureState pp = normalized({1, 1, 1, 1}, 2, 2);
    PureState ghz2 = normalized({1, 0, 0, 1}, 2, 2);
    EXPECT_NEAR(std::abs(overlap(pp, ghz2) - 1 / std::numbers::sqrt2), 0, 1e-15);
    EXPECT_THROW(overlap(pp, make_pure({1, 0}, 1, 2)), std::invalid_argument);
}

TEST(apply_kraus, examples) {
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    KrausResult r = apply_kraus(make_pure({1, 0}, 1, 2), 0, p0);
    EXPECT_DOUBLE_EQ(r.probability, 1.0);
    EXPECT_DOUBLE_EQ(r.vector[0].real(), 1.0);

    KrausResult plus = apply_kraus(normalized({1, 1}, 1, 2), 0, p1);
    EXPECT_NEAR(plus.probability, 0.5, 1e-15);
    EXPECT_NEAR(plus.vector[1].real(), 1 / std::numbers::sqrt2, 1e-15);
    EXPECT_EQ(plus.vector[0], Complex(0));

    std::mt19937_64 rng(3);
    PureState s = random_state(2, 2, rng);
    Matrix h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::numbers::sqrt2;
    KrausResult hr = apply_kraus(s, 1, h);
    EXPECT_NEAR(hr.probability, 1.0, 1e-12);
    EXPECT_THROW(apply_kraus(s, 2, h), std::out_of_range);
}

TEST(qstate_properties, full_state_entropy_vanishes) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; trial++) {
        size_t n = 1 + rng() % 4;
        PureState s = random_state(n, 2, rng);
        EXPECT_NEAR(von_neumann_entropy(reduced_density(s, SiteSubset::all(n))), 0.0, 1e-9);
    }
}

TEST(qstate_properties, subadditivity_on_site_pairs) {
    std::mt19937_64 rng(78);
    for (int trial = 0; trial < 50; trial++) {
        size_t n = 2 + rng() % 3;
        PureState s = random_state(n, 2, rng);
        size_t a = rng() % n, b = (a + 1 + rng() % (n - 1)) % n;
        double sab = von_neumann_entropy(reduced_density(s, SiteSubset({a, b}, n)));
        double sa = von_neumann_entropy(reduced_density(s, SiteSubset::single(a, n)));
        double sb = von_neumann_entropy(reduced_density(s, SiteSubset::single(b, n)));
        EXPECT_LE(sab, sa + sb + 1e-9);
    }
}

TEST(qstate_properties, complete_kraus_probabilities_sum_to_one) {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 30; trial++) {
        size_t d = 2 + rng() % 2;
        size_t n = d == 2 ? 3 : 2;
        PureState s = random_state(n, d, rng);
        // K_k = U diag(c_k) V with sum_k c_k^2 = 1 is a complete set.
        Matrix u = worklab::testing::random_unitary(d, rng);
        Matrix v = worklab::testing::random_unitary(d, rng);
        std::uniform_real_distribution<double> angle(0, std::numbers::pi / 2);
        Eigen::VectorXd c(d), sn(d);
        for (size_t i = 0; i < d; i++) {
            double t = angle(rng);
            c(i) = std::cos(t);
            sn(i) = std::sin(t);
        }
        Matrix k0 = u * c.cast<Complex>().asDiagonal() * v;
        Matrix k1 = v.adjoint() * sn.cast<Complex>().asDiagonal() * v;
        size_t site = rng() % n;
        double total = apply_kraus(s, site, k0).probability + apply_kraus(s, site, k1).probability;
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}
