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

#include "worklab/workbounds.h"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "worklab/parallel.h"
#include "worklab/rng.h"

namespace worklab {

namespace {

constexpr size_t kPolishSweeps = 20000;

constexpr double kFactorNormTol = 1e-10;

double vector_norm(const Amplitudes &v) {
    double total = 0;
    for (const auto &a : v) {
        total += std::norm(a);
    }
    return std::sqrt(total);
}

/// Makes the largest-magnitude component real and positive.
void fix_phase(Amplitudes &v) {
    size_t best = 0;
    for (size_t k = 1; k < v.size(); k++) {
        if (std::abs(v[k]) > std::abs(v[best]) + 1e-14) {
            best = k;
        }
    }
    double mag = std::abs(v[best]);
    if (mag == 0) {
        return;
    }
    Complex phase = std::conj(v[best]) / mag;
    for (auto &a : v) {
        a *= phase;
    }
    v[best] = mag;
}

/// Contracts psi with conj(factor) on every site except `keep`, returning
/// the length-d environment vector of site `keep`. `scratch` is reused.
void contract_except(const Amplitudes &psi, const std::vector<Amplitudes> &factors, size_t keep,
                     Amplitudes &scratch, Amplitudes &out) {
    const size_t n_sites = factors.size();
    const size_t d = factors.front().size();
    scratch.assign(psi.begin(), psi.end());
    size_t size = scratch.size();
    // Top sites: the highest site is the slowest digit.
    for (size_t m = n_sites; m-- > keep + 1;) {
        const size_t stride = size / d;
        const Amplitudes &u = factors[m];
        for (size_t i = 0; i < stride; i++) {
            Complex acc = 0;
            for (size_t a = 0; a < d; a++) {
                acc += std::conj(u[a]) * scratch[i + a * stride];
            }
            scratch[i] = acc;
        }
        size = stride;
    }
    // Low sites: the lowest remaining site is the fastest digit.
    for (size_t m = 0; m < keep; m++) {
        const size_t next = size / d;
        const Amplitudes &u = factors[m];
        for (size_t r = 0; r < next; r++) {
            Complex acc = 0;
            for (size_t a = 0; a < d; a++) {
                acc += std::conj(u[a]) * scratch[a + d * r];
            }
            scratch[r] = acc;
        }
        size = next;
    }
    out.assign(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(d));
}

ProductState random_product(size_t num_sites, size_t local_dim, Rng &rng) {
    std::vector<Amplitudes> factors(num_sites, Amplitudes(local_dim));
    for (auto &f : factors) {
        for (auto &a : f) {
            a = complex_gaussian(rng);
        }
        double norm = vector_norm(f);
        for (auto &a : f) {
            a /= norm;
        }
    }
    return ProductState(std::move(factors));
}

void require_product_shape(const ProductState &u, const PureState &state) {
    if (u.num_sites() != state.num_sites() || u.local_dim() != state.local_dim()) {
        throw std::invalid_argument("product state and state have different shapes");
    }
}

}  // namespace

ProductState::ProductState(std::vector<Amplitudes> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) {
        throw std::invalid_argument("product state needs at least one factor");
    }
    const size_t d = factors_.front().size();
    if (d < 2) {
        throw std::invalid_argument("product factors need length >= 2");
    }
    for (const auto &f : factors_) {
        if (f.size() != d) {
            throw std::invalid_argument("product factors have unequal lengths");
        }
        if (std::abs(vector_norm(f) - 1) > kFactorNormTol) {
            throw std::invalid_argument("product factor is not unit norm");
        }
    }
}

Complex ProductState::overlap_with(const PureState &state) const {
    require_product_shape(*this, state);
    Amplitudes scratch;
    Amplitudes env;
    const size_t last = num_sites() - 1;
    contract_except(state.amplitudes(), factors_, last, scratch, env);
    Complex total = 0;
    for (size_t a = 0; a < env.size(); a++) {
        total += std::conj(factors_[last][a]) * env[a];
    }
    return total;
}

PureState ProductState::to_state() const {
    Amplitudes amps{Complex(1)};
    // Site 0 is the fastest digit, so later factors multiply in as outer blocks.
    for (const auto &f : factors_) {
        Amplitudes next;
        next.reserve(amps.size() * f.size());
        for (const auto &fa : f) {
            for (const auto &prev : amps) {
                next.push_back(prev * fa);
            }
        }
        amps = std::move(next);
    }
    return make_pure(std::move(amps), num_sites(), local_dim());
}

std::string to_string(EgCertification c) {
    switch (c) {
        case EgCertification::bruteforce_certified:
            return "bruteforce_certified";
        case EgCertification::schmidt_exact:
            return "schmidt_exact";
        case EgCertification::heuristic_local_max:
            return "heuristic_local_max";
    }
    return "?";
}

EgCertification parse_certification(const std::string &name) {
    if (name == "bruteforce_certified") return EgCertification::bruteforce_certified;
    if (name == "schmidt_exact") return EgCertification::schmidt_exact;
    if (name == "heuristic_local_max") return EgCertification::heuristic_local_max;
    throw std::invalid_argument("unknown certification '" + name + "'");
}

double w_global(const PureState &state) {
    return std::log(static_cast<double>(state.dim()));
}

double w_global(const DensityOperator &rho) {
    return std::log(static_cast<double>(rho.dim())) - von_neumann_entropy(rho);
}

double w_local(const PureState &state) {
    double total = static_cast<double>(state.num_sites()) * std::log(static_cast<double>(state.local_dim()));
    for (const auto &rho : single_site_marginals(state)) {
        total -= von_neumann_entropy(rho);
    }
    return total;
}

ProductState alternating_maximize(const PureState &state, ProductState start, double tol, size_t max_iters,
                                  size_t *iterations_used) {
    require_product_shape(start, state);
    std::vector<Amplitudes> factors = start.factors();
    Amplitudes scratch;
    Amplitudes env;
    double current = std::abs(start.overlap_with(state));
    size_t iter = 0;
    while (iter < max_iters) {
        iter++;
        const double sweep_start = current;
        for (size_t n = 0; n < factors.size(); n++) {
            contract_except(state.amplitudes(), factors, n, scratch, env);
            double norm = vector_norm(env);
            if (norm == 0) {
                continue;
            }
            // Each single-site update is an exact maximization, so the
            // overlap can only grow (up to roundoff).
            if (norm < current - 1e-12) {
                throw std::logic_error("alternating overlap decreased from " + std::to_string(current) + " to " +
                                       std::to_string(norm));
            }
            for (size_t a = 0; a < env.size(); a++) {
                factors[n][a] = env[a] / norm;
            }
            current = std::max(current, norm);
        }
        if (current - sweep_start < tol) {
            break;
        }
    }
    if (iterations_used != nullptr) {
        *iterations_used = iter;
    }
    for (auto &f : factors) {
        fix_phase(f);
    }
    return ProductState(std::move(factors));
}

EgEstimate eg_alternating(const PureState &state, const EgOptions &options) {
    if (options.restarts < 1) {
        throw std::invalid_argument("eg_alternating needs at least one restart");
    }
    if (!(options.tol > 0)) {
        throw std::invalid_argument("eg_alternating needs tol > 0");
    }
    std::vector<std::optional<ProductState>> results(options.restarts);
    std::vector<double> overlaps(options.restarts, 0.0);
    parallel_for(options.restarts, resolve_threads(options.threads), [&](size_t r) {
        Rng rng(options.seed + r);
        ProductState start = random_product(state.num_sites(), state.local_dim(), rng);
        results[r] = alternating_maximize(state, std::move(start), options.tol, options.max_iters);
        overlaps[r] = std::norm(results[r]->overlap_with(state));
    });
    size_t best = 0;
    for (size_t r = 1; r < options.restarts; r++) {
        if (overlaps[r] > overlaps[best]) {
            best = r;
        }
    }
    EgCertification cert =
        state.num_sites() == 2 ? EgCertification::schmidt_exact : EgCertification::heuristic_local_max;
    return EgEstimate{-std::log(overlaps[best]), std::move(*results[best]), cert, options.restarts};
}

double eg_schmidt(const PureState &state, const SiteSubset &cut) {
    if (cut.num_sites() != state.num_sites() || cut.empty() || cut.size() == state.num_sites()) {
        throw std::invalid_argument("Schmidt cut must be a proper nonempty subset of the sites");
    }
    const DensityOperator rho = reduced_density(state, cut);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    return -std::log(solver.eigenvalues().maxCoeff());
}

EgEstimate eg_bruteforce(const PureState &state, size_t grid_points_per_axis) {
    const size_t n_sites = state.num_sites();
    if (state.local_dim() != 2) {
        throw std::invalid_argument("eg_bruteforce supports qubits only");
    }
    if (n_sites > kBruteforceMaxSites) {
        throw std::invalid_argument("eg_bruteforce is limited to N <= 4 (got N=" + std::to_string(n_sites) + ")");
    }
    if (grid_points_per_axis < 2) {
        throw std::invalid_argument("eg_bruteforce needs at least 2 grid points per axis");
    }
    const EgCertification cert = grid_points_per_axis >= kCertifiedGrid ? EgCertification::bruteforce_certified
                                                                        : EgCertification::heuristic_local_max;
    if (n_sites == 1) {
        Amplitudes f = state.amplitudes();
        fix_phase(f);
        ProductState u({f});
        return EgEstimate{-std::log(std::norm(u.overlap_with(state))), std::move(u),
                          EgCertification::bruteforce_certified, 1};
    }

    // Bloch-sphere grid: polar angles include both poles.
    const size_t g = grid_points_per_axis;
    std::vector<std::array<Complex, 2>> grid;
    grid.reserve(g * g);
    for (size_t i = 0; i < g; i++) {
        double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(g - 1);
        for (size_t j = 0; j < g; j++) {
            double phi = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(g);
            grid.push_back({Complex(std::cos(theta / 2)), std::polar(std::sin(theta / 2), phi)});
        }
    }
    const size_t points = grid.size();
    const size_t grid_sites = n_sites - 2;
    size_t combos = 1;
    for (size_t k = 0; k < grid_sites; k++) {
        combos *= points;
    }

    const Amplitudes &psi = state.amplitudes();
    double best_sigma2 = -1;
    size_t best_combo = 0;
    std::vector<size_t> choice(grid_sites);
    for (size_t combo = 0; combo < combos; combo++) {
        size_t rem = combo;
        for (size_t k = 0; k < grid_sites; k++) {
            choice[k] = rem % points;
            rem /= points;
        }
        // M[x0 + 2 x1] = sum over higher digits of conj(u) * psi.
        Complex m[4] = {0, 0, 0, 0};
        const size_t high_dim = psi.size() / 4;
        for (size_t high = 0; high < high_dim; high++) {
            Complex w = 1;
            for (size_t k = 0; k < grid_sites; k++) {
                w *= std::conj(grid[choice[k]][(high >> k) & 1]);
            }
            for (size_t low = 0; low < 4; low++) {
                m[low] += w * psi[high * 4 + low];
            }
        }
        // Largest squared singular value of [[m0, m2], [m1, m3]].
        double fro = std::norm(m[0]) + std::norm(m[1]) + std::norm(m[2]) + std::norm(m[3]);
        double det = std::norm(m[0] * m[3] - m[2] * m[1]);
        double sigma2 = 0.5 * (fro + std::sqrt(std::max(0.0, fro * fro - 4 * det)));
        if (sigma2 > best_sigma2) {
            best_sigma2 = sigma2;
            best_combo = combo;
        }
    }

    // Rebuild the best grid point's factors, with the exact top singular pair on sites 0, 1.
    std::vector<Amplitudes> factors(n_sites, Amplitudes(2));
    size_t rem = best_combo;
    for (size_t k = 0; k < grid_sites; k++) {
        factors[k + 2] = {grid[rem % points][0], grid[rem % points][1]};
        rem /= points;
    }
    Matrix m = Matrix::Zero(2, 2);
    for (size_t index = 0; index < psi.size(); index++) {
        Complex w = 1;
        for (size_t k = 0; k < grid_sites; k++) {
            w *= std::conj(factors[k + 2][(index >> (k + 2)) & 1]);
        }
        m(static_cast<Eigen::Index>(index & 1), static_cast<Eigen::Index>((index >> 1) & 1)) += w * psi[index];
    }
    // overlap = u0^dagger M conj(u1): take u0 = U e0 and u1 = conj(V e0).
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    for (Eigen::Index a = 0; a < 2; a++) {
        factors[0][static_cast<size_t>(a)] = svd.matrixU()(a, 0);
        factors[1][static_cast<size_t>(a)] = std::conj(svd.matrixV()(a, 0));
    }
    for (auto &f : factors) {
        double norm = vector_norm(f);
        for (auto &a : f) {
            a /= norm;
        }
    }
    ProductState start(std::move(factors));
    ProductState refined = n_sites == 2 ? std::move(start) : alternating_maximize(state, std::move(start), 1e-15, kPolishSweeps);
    if (n_sites == 2) {
        std::vector<Amplitudes> fs = refined.factors();
        for (auto &f : fs) {
            fix_phase(f);
        }
        refined = ProductState(std::move(fs));
    }
    double value = -std::log(std::norm(refined.overlap_with(state)));
    return EgEstimate{value, std::move(refined), n_sites == 2 ? EgCertification::schmidt_exact : cert, 1};
}

WorkUpperBound w_locc_upper(const PureState &state, const EgEstimate &eg) {
    require_product_shape(eg.maximizer, state);
    double achieved = std::norm(eg.maximizer.overlap_with(state));
    if (std::abs(achieved - std::exp(-eg.value)) > 1e-8) {
        throw std::invalid_argument("E_g estimate does not belong to this state");
    }
    return WorkUpperBound{w_global(state) - eg.value, eg.certification, is_rigorous(eg.certification)};
}

}  // namespace worklab
