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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace worklab {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kEigenClamp = 1e-12;

double squared_norm(const Amplitudes &v) {
    double total = 0;
    for (const auto &a : v) {
        total += std::norm(a);
    }
    return total;
}

void require_hermitian(const Matrix &m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    double worst = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (worst > kHermitianTol) {
        throw std::invalid_argument("matrix is not Hermitian (deviation " + std::to_string(worst) + ")");
    }
}

}  // namespace

size_t checked_pow(size_t d, size_t n) {
    size_t result = 1;
    for (size_t k = 0; k < n; k++) {
        if (result > std::numeric_limits<size_t>::max() / d) {
            throw std::overflow_error("d^N overflows: d=" + std::to_string(d) + " N=" + std::to_string(n));
        }
        result *= d;
    }
    return result;
}

size_t PureState::stride(size_t site) const {
    if (site >= num_sites_) {
        throw std::out_of_range("site " + std::to_string(site) + " out of range");
    }
    size_t s = 1;
    for (size_t k = 0; k < site; k++) {
        s *= local_dim_;
    }
    return s;
}

PureState PureState::basis(std::span<const size_t> digits, size_t local_dim) {
    size_t dim = checked_pow(local_dim, digits.size());
    Amplitudes amps(dim, Complex(0));
    size_t index = 0;
    size_t stride = 1;
    for (size_t digit : digits) {
        if (digit >= local_dim) {
            throw std::invalid_argument("basis digit out of range");
        }
        index += digit * stride;
        stride *= local_dim;
    }
    amps[index] = 1;
    return make_pure(std::move(amps), digits.size(), local_dim);
}

PureState make_pure(Amplitudes amplitudes, size_t num_sites, size_t local_dim) {
    if (num_sites == 0) {
        throw std::invalid_argument("num_sites must be positive");
    }
    if (local_dim < 2) {
        throw std::invalid_argument("local_dim must be at least 2");
    }
    size_t expected = checked_pow(local_dim, num_sites);
    if (amplitudes.size() != expected) {
        throw std::invalid_argument("dimension mismatch: got " + std::to_string(amplitudes.size()) +
                                    " amplitudes, expected " + std::to_string(expected));
    }
    double norm = std::sqrt(squared_norm(amplitudes));
    if (norm == 0) {
        throw std::invalid_argument("zero vector is not a state");
    }
    if (std::abs(norm - 1) > 1e-6) {
        throw std::invalid_argument("amplitude norm " + std::to_string(norm) + " is not within 1e-6 of 1");
    }
    for (auto &a : amplitudes) {
        a /= norm;
    }
    return PureState(std::move(amplitudes), num_sites, local_dim);
}

PureState normalized(Amplitudes amplitudes, size_t num_sites, size_t local_dim) {
    double norm = std::sqrt(squared_norm(amplitudes));
    if (norm == 0) {
        throw std::invalid_argument("zero vector is not a state");
    }
    for (auto &a : amplitudes) {
        a /= norm;
    }
    return make_pure(std::move(amplitudes), num_sites, local_dim);
}

DensityOperator DensityOperator::from_matrix(Matrix matrix) {
    require_hermitian(matrix);
    double trace = matrix.trace().real();
    if (std::abs(trace - 1) > kHermitianTol) {
        throw std::invalid_argument("density matrix trace " + std::to_string(trace) + " is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kHermitianTol) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
    return DensityOperator(std::move(matrix));
}

DensityOperator DensityOperator::diagonal(std::span<const double> probabilities) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(probabilities.size()),
                            static_cast<Eigen::Index>(probabilities.size()));
    for (size_t k = 0; k < probabilities.size(); k++) {
        m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = probabilities[k];
    }
    return from_matrix(std::move(m));
}

SiteSubset::SiteSubset(std::vector<size_t> sites, size_t num_sites) : sites_(std::move(sites)), num_sites_(num_sites) {
    std::sort(sites_.begin(), sites_.end());
    if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end()) {
        throw std::invalid_argument("duplicate site in subset");
    }
    if (!sites_.empty() && sites_.back() >= num_sites_) {
        throw std::invalid_argument("site " + std::to_string(sites_.back()) + " out of range [0, " +
                                    std::to_string(num_sites_) + ")");
    }
}

SiteSubset SiteSubset::all(size_t num_sites) {
    std::vector<size_t> sites(num_sites);
    std::iota(sites.begin(), sites.end(), size_t{0});
    return SiteSubset(std::move(sites), num_sites);
}

SiteSubset SiteSubset::single(size_t site, size_t num_sites) {
    return SiteSubset({site}, num_sites);
}

bool SiteSubset::contains(size_t site) const {
    return std::binary_search(sites_.begin(), sites_.end(), site);
}

SiteSubset SiteSubset::complement() const {
    std::vector<size_t> rest;
    for (size_t n = 0; n < num_sites_; n++) {
        if (!contains(n)) {
            rest.push_back(n);
        }
    }
    return SiteSubset(std::move(rest), num_sites_);
}

DensityOperator reduced_density(const PureState &state, const SiteSubset &keep) {
    if (keep.empty()) {
        throw std::invalid_argument("reduced_density needs a nonempty subset");
    }
    if (keep.num_sites() != state.num_sites()) {
        throw std::invalid_argument("subset was built for a different number of sites");
    }
    const size_t d = state.local_dim();
    const size_t kept_dim = checked_pow(d, keep.size());
    const size_t rest_dim = state.dim() / kept_dim;

    // Reshape psi into a (kept x rest) matrix M; rho = M M^dagger.
    std::vector<size_t> kept_weight(state.num_sites(), 0);
    std::vector<size_t> rest_weight(state.num_sites(), 0);
    size_t kw = 1;
    size_t rw = 1;
    for (size_t n = 0; n < state.num_sites(); n++) {
        if (keep.contains(n)) {
            kept_weight[n] = kw;
            kw *= d;
        } else {
            rest_weight[n] = rw;
            rw *= d;
        }
    }
    Matrix m(static_cast<Eigen::Index>(kept_dim), static_cast<Eigen::Index>(rest_dim));
    for (size_t index = 0; index < state.dim(); index++) {
        size_t row = 0;
        size_t col = 0;
        size_t rem = index;
        for (size_t n = 0; n < state.num_sites(); n++) {
            size_t digit = rem % d;
            rem /= d;
            row += digit * kept_weight[n];
            col += digit * rest_weight[n];
        }
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = state[index];
    }
    Matrix rho = m * m.adjoint();
    // Exact Hermiticity so downstream eigen-solvers see a symmetric input.
    rho = (rho + rho.adjoint()) * 0.5;
    return DensityOperator(std::move(rho));
}

std::vector<Matrix> single_site_marginals(const PureState &state) {
    const size_t d = state.local_dim();
    std::vector<Matrix> out;
    out.reserve(state.num_sites());
    const auto &amps = state.amplitudes();
    size_t stride = 1;
    for (size_t n = 0; n < state.num_sites(); n++) {
        Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        const size_t block = stride * d;
        for (size_t base = 0; base < amps.size(); base += block) {
            for (size_t low = 0; low < stride; low++) {
                size_t i0 = base + low;
                for (size_t a = 0; a < d; a++) {
                    const Complex &ca = amps[i0 + a * stride];
                    for (size_t b = 0; b < d; b++) {
                        rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                            ca * std::conj(amps[i0 + b * stride]);
                    }
                }
            }
        }
        out.push_back((rho + rho.adjoint()) * 0.5);
        stride *= d;
    }
    return out;
}

double von_neumann_entropy(const Matrix &rho) {
    require_hermitian(rho);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
    double s = 0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); k++) {
        double lambda = solver.eigenvalues()(k);
        if (lambda > kEigenClamp) {
            s -= lambda * std::log(lambda);
        }
    }
    return std::max(s, 0.0);
}

double von_neumann_entropy(const DensityOperator &rho) {
    return von_neumann_entropy(rho.matrix());
}

double shannon_entropy(std::span<const double> probabilities) {
    double total = 0;
    double h = 0;
    for (double p : probabilities) {
        if (p < 0) {
            throw std::invalid_argument("negative probability " + std::to_string(p));
        }
        total += p;
        if (p > 0) {
            h -= p * std::log(p);
        }
    }
    if (std::abs(total - 1) > 1e-9) {
        throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", not 1");
    }
    return h;
}

double shannon_entropy(const std::map<std::string, double> &distribution) {
    std::vector<double> values;
    values.reserve(distribution.size());
    for (const auto &[label, p] : distribution) {
        values.push_back(p);
    }
    return shannon_entropy(values);
}

Complex overlap(const PureState &a, const PureState &b) {
    if (a.num_sites() != b.num_sites() || a.local_dim() != b.local_dim()) {
        throw std::invalid_argument("overlap of states with different shapes");
    }
    Complex total = 0;
    for (size_t k = 0; k < a.dim(); k++) {
        total += std::conj(a[k]) * b[k];
    }
    return total;
}

double apply_site_operator(Amplitudes &amplitudes, size_t stride, size_t local_dim, const Matrix &op) {
    const size_t d = local_dim;
    if (static_cast<size_t>(op.rows()) != d || static_cast<size_t>(op.cols()) != d) {
        throw std::invalid_argument("site operator must be d x d");
    }
    const size_t block = stride * d;
    std::vector<Complex> in(d);
    double norm = 0;
    for (size_t base = 0; base < amplitudes.size(); base += block) {
        for (size_t low = 0; low < stride; low++) {
            size_t i0 = base + low;
            for (size_t a = 0; a < d; a++) {
                in[a] = amplitudes[i0 + a * stride];
            }
            for (size_t a = 0; a < d; a++) {
                Complex acc = 0;
                for (size_t b = 0; b < d; b++) {
                    acc += op(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * in[b];
                }
                amplitudes[i0 + a * stride] = acc;
                norm += std::norm(acc);
            }
        }
    }
    return norm;
}

KrausResult apply_kraus(const PureState &state, size_t site, const Matrix &kraus) {
    if (site >= state.num_sites()) {
        throw std::out_of_range("site " + std::to_string(site) + " out of range");
    }
    KrausResult result{state.amplitudes(), 0.0};
    result.probability = apply_site_operator(result.vector, state.stride(site), state.local_dim(), kraus);
    return result;
}

}  // namespace worklab
