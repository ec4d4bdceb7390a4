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

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "worklab/graphs.h"
#include "worklab/qstate.h"

namespace worklab::testing {

inline const double kLn2 = std::log(2.0);

/// Gaussian amplitudes, normalized; independent of the library samplers.
inline PureState random_state(size_t n, size_t d, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    size_t dim = 1;
    for (size_t k = 0; k < n; k++) {
        dim *= d;
    }
    Amplitudes a(dim);
    for (auto &z : a) {
        z = Complex(g(rng), g(rng));
    }
    return normalized(std::move(a), n, d);
}

inline Matrix random_unitary(size_t d, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(d, d);
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            m(i, j) = Complex(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ();
}

/// Entry (i, j) of the reduced state by summing over every pair of full
/// indices that agree off `keep`.
inline Matrix naive_partial_trace(const PureState &s, const std::vector<size_t> &keep) {
    const size_t n = s.num_sites(), d = s.local_dim();
    size_t kd = 1;
    for (size_t k = 0; k < keep.size(); k++) {
        kd *= d;
    }
    auto digit = [&](size_t index, size_t site) {
        for (size_t k = 0; k < site; k++) {
            index /= d;
        }
        return index % d;
    };
    auto kept_index = [&](size_t index) {
        size_t r = 0, mult = 1;
        for (size_t site : keep) {
            r += digit(index, site) * mult;
            mult *= d;
        }
        return r;
    };
    Matrix rho = Matrix::Zero(kd, kd);
    for (size_t x = 0; x < s.dim(); x++) {
        for (size_t y = 0; y < s.dim(); y++) {
            bool same_rest = true;
            for (size_t site = 0; site < n && same_rest; site++) {
                bool kept = false;
                for (size_t k : keep) {
                    kept |= k == site;
                }
                if (!kept && digit(x, site) != digit(y, site)) {
                    same_rest = false;
                }
            }
            if (same_rest) {
                rho(kept_index(x), kept_index(y)) += s[x] * std::conj(s[y]);
            }
        }
    }
    return rho;
}

inline Graph random_graph_with_p(size_t n, double p, std::mt19937_64 &rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (size_t i = 0; i < n; i++) {
        for (size_t j = i + 1; j < n; j++) {
            if (coin(rng)) {
                edges.push_back({i, j});
            }
        }
    }
    return Graph(n, edges);
}

}  // namespace worklab::testing
