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

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace worklab {

namespace {

size_t sampled_dim(size_t num_sites, size_t local_dim) {
    size_t dim = checked_pow(local_dim, num_sites);
    if (dim > kMaxSampledDim) {
        throw std::overflow_error("state dimension " + std::to_string(dim) + " exceeds the sampler limit");
    }
    return dim;
}

void require_qubit_register(size_t num_sites) {
    if (num_sites == 0 || num_sites > 30) {
        throw std::invalid_argument("qubit register size must be in [1, 30]");
    }
}

}  // namespace

SubsetSpec::SubsetSpec(size_t num_sites, std::vector<uint64_t> support)
    : num_sites_(num_sites), support_(std::move(support)) {
    if (num_sites == 0 || num_sites > 63) {
        throw std::invalid_argument("subset spec needs 1 <= N <= 63");
    }
    if (support_.empty()) {
        throw std::invalid_argument("subset support is empty");
    }
    for (uint64_t s : support_) {
        if (s >> num_sites != 0) {
            throw std::invalid_argument("bitstring longer than N");
        }
    }
    std::sort(support_.begin(), support_.end());
    if (std::adjacent_find(support_.begin(), support_.end()) != support_.end()) {
        throw std::invalid_argument("duplicate bitstring in subset support");
    }
}

std::string bitstring_to_text(uint64_t bits, size_t num_sites) {
    std::string out(num_sites, '0');
    for (size_t n = 0; n < num_sites; n++) {
        if (bits >> n & 1) {
            out[n] = '1';
        }
    }
    return out;
}

uint64_t bitstring_from_text(const std::string &text) {
    if (text.empty() || text.size() > 63) {
        throw std::invalid_argument("bitstring length must be in [1, 63]");
    }
    uint64_t bits = 0;
    for (size_t n = 0; n < text.size(); n++) {
        if (text[n] == '1') {
            bits |= uint64_t{1} << n;
        } else if (text[n] != '0') {
            throw std::invalid_argument("bitstring '" + text + "' has a non-binary character");
        }
    }
    return bits;
}

SubsetSpec read_subset_spec(std::istream &in) {
    std::string line;
    size_t width = 0;
    std::vector<uint64_t> support;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        auto last = line.find_last_not_of(" \t\r");
        std::string token = line.substr(first, last - first + 1);
        if (width == 0) {
            width = token.size();
        } else if (token.size() != width) {
            throw std::invalid_argument("bitstrings of unequal length in subset file");
        }
        support.push_back(bitstring_from_text(token));
    }
    if (support.empty()) {
        throw std::invalid_argument("subset file has no bitstrings");
    }
    return SubsetSpec(width, std::move(support));
}

void write_subset_spec(std::ostream &out, const SubsetSpec &spec) {
    for (uint64_t s : spec.support()) {
        out << bitstring_to_text(s, spec.num_sites()) << "\n";
    }
}

PureState sample_haar(size_t num_sites, size_t local_dim, Rng &rng) {
    size_t dim = sampled_dim(num_sites, local_dim);
    Amplitudes amps(dim);
    for (auto &a : amps) {
        a = complex_gaussian(rng);
    }
    return normalized(std::move(amps), num_sites, local_dim);
}

PureState sample_haar(size_t num_sites, size_t local_dim, uint64_t seed) {
    Rng rng(seed);
    return sample_haar(num_sites, local_dim, rng);
}

Matrix haar_unitary(size_t dim, Rng &rng) {
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix z(n, n);
    for (Eigen::Index i = 0; i < n; i++) {
        for (Eigen::Index j = 0; j < n; j++) {
            z(i, j) = complex_gaussian(rng);
        }
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; k++) {
        Complex diag = r(k, k);
        double mag = std::abs(diag);
        Complex phase = mag > 0 ? diag / mag : Complex(1);
        q.col(k) *= phase;
    }
    return q;
}

void apply_two_qubit_gate(Amplitudes &amplitudes, size_t site_a, size_t site_b, const Matrix &gate) {
    const size_t ma = size_t{1} << site_a;
    const size_t mb = size_t{1} << site_b;
    Complex in[4];
    for (size_t index = 0; index < amplitudes.size(); index++) {
        if ((index & ma) || (index & mb)) {
            continue;
        }
        const size_t idx[4] = {index, index | ma, index | mb, index | ma | mb};
        for (int k = 0; k < 4; k++) {
            in[k] = amplitudes[idx[k]];
        }
        for (int r = 0; r < 4; r++) {
            Complex acc = 0;
            for (int c = 0; c < 4; c++) {
                acc += gate(r, c) * in[c];
            }
            amplitudes[idx[r]] = acc;
        }
    }
}

PureState sample_circuit(const CircuitSpec &spec) {
    if (spec.num_sites < 2) {
        throw std::invalid_argument("brickwork circuit needs N >= 2");
    }
    require_qubit_register(spec.num_sites);
    Rng rng(spec.seed);
    Amplitudes amps(size_t{1} << spec.num_sites, Complex(0));
    amps[0] = 1;
    for (size_t layer = 0; layer < spec.depth; layer++) {
        for (size_t a = layer % 2; a + 1 < spec.num_sites; a += 2) {
            apply_two_qubit_gate(amps, a, a + 1, haar_unitary(4, rng));
        }
    }
    return normalized(std::move(amps), spec.num_sites, 2);
}

PureState graph_state(const Graph &g) {
    const size_t n = g.num_vertices();
    require_qubit_register(n);
    // Lower-neighbour masks: the sign of z is built up from its lower bits.
    std::vector<uint64_t> lower(n, 0);
    for (const auto &[i, j] : g.edges()) {
        lower[j] |= uint64_t{1} << i;
    }
    const size_t dim = size_t{1} << n;
    std::vector<int8_t> sign(dim, 1);
    for (size_t z = 1; z < dim; z++) {
        size_t top = static_cast<size_t>(std::bit_width(z) - 1);
        size_t rest = z ^ (size_t{1} << top);
        bool flip = std::popcount(lower[top] & rest) & 1;
        sign[z] = static_cast<int8_t>(flip ? -sign[rest] : sign[rest]);
    }
    const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
    Amplitudes amps(dim);
    for (size_t z = 0; z < dim; z++) {
        amps[z] = sign[z] * amp;
    }
    return make_pure(std::move(amps), n, 2);
}

PureState subset_state(const SubsetSpec &spec) {
    require_qubit_register(spec.num_sites());
    Amplitudes amps(size_t{1} << spec.num_sites(), Complex(0));
    const double amp = 1.0 / std::sqrt(static_cast<double>(spec.size()));
    for (uint64_t s : spec.support()) {
        amps[s] = amp;
    }
    return make_pure(std::move(amps), spec.num_sites(), 2);
}

SubsetSpec sample_subset(size_t n, size_t k, uint64_t seed) {
    if (n == 0 || n > 63) {
        throw std::invalid_argument("sample_subset needs 1 <= n <= 63");
    }
    const uint64_t universe = uint64_t{1} << n;
    if (k == 0 || k > universe) {
        throw std::invalid_argument("k must be in [1, 2^n]");
    }
    Rng rng(seed);
    std::vector<uint64_t> support;
    support.reserve(k);
    if (universe <= (uint64_t{1} << 22) && k * 4 > universe) {
        // Partial Fisher-Yates over the whole universe.
        std::vector<uint64_t> pool(universe);
        std::iota(pool.begin(), pool.end(), uint64_t{0});
        for (size_t i = 0; i < k; i++) {
            std::uniform_int_distribution<uint64_t> pick(i, universe - 1);
            std::swap(pool[i], pool[pick(rng)]);
            support.push_back(pool[i]);
        }
    } else {
        std::uniform_int_distribution<uint64_t> pick(0, universe - 1);
        std::unordered_set<uint64_t> seen;
        while (support.size() < k) {
            uint64_t s = pick(rng);
            if (seen.insert(s).second) {
                support.push_back(s);
            }
        }
    }
    return SubsetSpec(n, std::move(support));
}

PureState ghz_state(size_t num_sites) {
    require_qubit_register(num_sites);
    Amplitudes amps(size_t{1} << num_sites, Complex(0));
    amps.front() = 1 / std::numbers::sqrt2;
    amps.back() = 1 / std::numbers::sqrt2;
    return make_pure(std::move(amps), num_sites, 2);
}

PureState w_state(size_t num_sites) {
    require_qubit_register(num_sites);
    Amplitudes amps(size_t{1} << num_sites, Complex(0));
    const double amp = 1.0 / std::sqrt(static_cast<double>(num_sites));
    for (size_t n = 0; n < num_sites; n++) {
        amps[size_t{1} << n] = amp;
    }
    return make_pure(std::move(amps), num_sites, 2);
}

PureState plus_state(size_t num_sites) {
    require_qubit_register(num_sites);
    const size_t dim = size_t{1} << num_sites;
    return make_pure(Amplitudes(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)))), num_sites, 2);
}

double frame_potential(std::span<const PureState> samples, int t) {
    if (samples.size() < 2) {
        throw std::invalid_argument("frame potential needs at least 2 samples");
    }
    if (t < 1) {
        throw std::invalid_argument("frame potential order t must be >= 1");
    }
    for (const auto &s : samples) {
        if (s.num_sites() != samples[0].num_sites() || s.local_dim() != samples[0].local_dim()) {
            throw std::invalid_argument("frame potential samples have mismatched shapes");
        }
    }
    // Ordered pairs (a,b) and (b,a) contribute equally.
    double total = 0;
    for (size_t a = 0; a < samples.size(); a++) {
        for (size_t b = a + 1; b < samples.size(); b++) {
            total += std::pow(std::norm(overlap(samples[a], samples[b])), t);
        }
    }
    double pairs = static_cast<double>(samples.size()) * static_cast<double>(samples.size() - 1) / 2;
    return total / pairs;
}

double haar_frame_potential(int t, size_t dim) {
    double value = 1;
    for (int k = 1; k <= t; k++) {
        value *= static_cast<double>(k) / (static_cast<double>(dim) - 1 + k);
    }
    return value;
}

}  // namespace worklab
