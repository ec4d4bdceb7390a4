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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "worklab/graphs.h"
#include "worklab/qstate.h"
#include "worklab/rng.h"

namespace worklab {

/// Largest state dimension the samplers will allocate.
inline constexpr size_t kMaxSampledDim = size_t{1} << 30;

/// Support of a uniform superposition over K computational basis strings.
///
/// Bitstrings are stored as integers with bit n holding site n. In text
/// form, character n of a bitstring is the value of site n.
class SubsetSpec {
   public:
    /// Throws std::invalid_argument if the support is empty, contains
    /// duplicates, or has a string outside {0,1}^N.
    SubsetSpec(size_t num_sites, std::vector<uint64_t> support);

    size_t num_sites() const { return num_sites_; }
    const std::vector<uint64_t> &support() const { return support_; }
    size_t size() const { return support_.size(); }

   private:
    size_t num_sites_;
    std::vector<uint64_t> support_;
};

std::string bitstring_to_text(uint64_t bits, size_t num_sites);
uint64_t bitstring_from_text(const std::string &text);

/// One bitstring per line; all lines must have equal length.
SubsetSpec read_subset_spec(std::istream &in);
void write_subset_spec(std::ostream &out, const SubsetSpec &spec);

struct CircuitSpec {
    size_t num_sites = 2;
    /// Brickwork layers; layer l pairs (0,1),(2,3),... when l is even and
    /// (1,2),(3,4),... when l is odd. Open boundary.
    size_t depth = 0;
    uint64_t seed = 0;
};

/// Haar-random state from normalized i.i.d. complex Gaussians.
PureState sample_haar(size_t num_sites, size_t local_dim, uint64_t seed);
PureState sample_haar(size_t num_sites, size_t local_dim, Rng &rng);

/// Haar-random unitary by QR of a complex Ginibre matrix with the phases of
/// R's diagonal moved into Q.
Matrix haar_unitary(size_t dim, Rng &rng);

/// Applies a 4x4 gate to sites (a, b). The gate's basis index is x_a + 2 x_b.
void apply_two_qubit_gate(Amplitudes &amplitudes, size_t site_a, size_t site_b, const Matrix &gate);

/// Brickwork of Haar 2-qubit gates applied to |0...0>.
PureState sample_circuit(const CircuitSpec &spec);

/// prod_{(i,j) in E} CZ_ij |+>^N, written directly from the adjacency phases.
PureState graph_state(const Graph &g);

PureState subset_state(const SubsetSpec &spec);

/// Uniform k-subset of {0,1}^n.
SubsetSpec sample_subset(size_t n, size_t k, uint64_t seed);

/// (|0...0> + |1...1>)/sqrt(2)
PureState ghz_state(size_t num_sites);
/// Uniform superposition of the N single-excitation strings.
PureState w_state(size_t num_sites);
/// |+>^N
PureState plus_state(size_t num_sites);

/// Mean of |<a|b>|^{2t} over distinct ordered pairs.
double frame_potential(std::span<const PureState> samples, int t);

/// t! (D-1)! / (t+D-1)!, the Haar-ensemble frame potential.
double haar_frame_potential(int t, size_t dim);

}  // namespace worklab
