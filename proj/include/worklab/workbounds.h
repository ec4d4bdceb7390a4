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

#include <cstdint>
#include <string>
#include <vector>

#include "worklab/qstate.h"

namespace worklab {

/// Tensor product of N unit vectors of length d.
class ProductState {
   public:
    /// Throws std::invalid_argument unless every factor has the same length
    /// d >= 2 and unit norm within 1e-10.
    explicit ProductState(std::vector<Amplitudes> factors);

    size_t num_sites() const { return factors_.size(); }
    size_t local_dim() const { return factors_.front().size(); }
    const std::vector<Amplitudes> &factors() const { return factors_; }

    /// <u|psi> by successive contraction, O(d^N).
    Complex overlap_with(const PureState &state) const;
    /// Dense expansion; only sensible for small N.
    PureState to_state() const;

   private:
    std::vector<Amplitudes> factors_;
};

enum class EgCertification { bruteforce_certified, schmidt_exact, heuristic_local_max };

std::string to_string(EgCertification c);
EgCertification parse_certification(const std::string &name);
inline bool is_rigorous(EgCertification c) { return c != EgCertification::heuristic_local_max; }

/// Geometric entanglement estimate -ln max |<u|psi>|^2 with the product
/// state that attains it.
struct EgEstimate {
    double value = 0;
    ProductState maximizer;
    EgCertification certification = EgCertification::heuristic_local_max;
    size_t restarts_used = 0;
};

struct EgOptions {
    size_t restarts = 32;
    double tol = 1e-10;
    size_t max_iters = 1000;
    uint64_t seed = 0;
    /// 0 picks the WORKLAB_THREADS environment variable, else hardware concurrency.
    size_t threads = 1;
};

/// ln D - S(rho) with D the full Hilbert-space dimension.
double w_global(const PureState &state);
double w_global(const DensityOperator &rho);

/// N ln d - sum_n S(rho_n).
double w_local(const PureState &state);

/// Alternating single-site maximization of |<u|psi>| from random product
/// starts. Restart r uses seed `options.seed + r`. Certified
/// schmidt_exact when N = 2, heuristic otherwise.
EgEstimate eg_alternating(const PureState &state, const EgOptions &options);

/// One alternating run from a given start; returns the converged product
/// state. Throws std::logic_error if the overlap ever decreases.
ProductState alternating_maximize(const PureState &state, ProductState start, double tol, size_t max_iters,
                                  size_t *iterations_used = nullptr);

/// -ln sigma_max^2 of the amplitude matrix reshaped across `cut`.
///
/// Throws std::invalid_argument if the cut is empty or covers all sites.
double eg_schmidt(const PureState &state, const SiteSubset &cut);

/// Exhaustive Bloch-sphere grid search (qubits, N <= 4).
///
/// Sites 2..N-1 range over a polar x azimuthal grid; for each grid point the
/// best factors on sites 0 and 1 are found exactly from the top singular
/// pair of the contracted 2x2 matrix. The best point is then polished with
/// 50 alternating sweeps. Certified when grid_points_per_axis >= 24.
EgEstimate eg_bruteforce(const PureState &state, size_t grid_points_per_axis);

inline constexpr size_t kBruteforceMaxSites = 4;
inline constexpr size_t kCertifiedGrid = 24;

struct WorkUpperBound {
    double value = 0;
    EgCertification certification = EgCertification::heuristic_local_max;
    /// False when the E_g behind it is heuristic, in which case `value`
    /// may underestimate the true bound.
    bool rigorous = false;
};

/// N ln d - E_g. Throws std::invalid_argument when the estimate's maximizer
/// does not reproduce exp(-value) on this state within 1e-8.
WorkUpperBound w_locc_upper(const PureState &state, const EgEstimate &eg);

}  // namespace worklab
