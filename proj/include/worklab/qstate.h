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

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace worklab {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;
using Matrix = Eigen::MatrixXcd;

class SiteSubset;

/// Returns d^n, throwing std::overflow_error when it does not fit in a size_t.
size_t checked_pow(size_t d, size_t n);

/// Digit of `site` in the little-endian base-d expansion of `index`.
inline size_t site_digit(size_t index, size_t site_stride, size_t local_dim) {
    return (index / site_stride) % local_dim;
}

/// Normalized amplitude vector on N sites of local dimension d.
///
/// Amplitudes are indexed little-endian: basis string (x_0, ..., x_{N-1})
/// lives at index sum_n x_n d^n, so site 0 is the fastest-varying digit.
class PureState {
   public:
    size_t num_sites() const { return num_sites_; }
    size_t local_dim() const { return local_dim_; }
    size_t dim() const { return amplitudes_.size(); }
    /// Stride of a site's digit, d^site.
    size_t stride(size_t site) const;

    const Amplitudes &amplitudes() const { return amplitudes_; }
    const Complex &operator[](size_t index) const { return amplitudes_[index]; }

    /// Computational basis state; `digits[n]` is the value on site n.
    static PureState basis(std::span<const size_t> digits, size_t local_dim);

   private:
    friend PureState make_pure(Amplitudes amplitudes, size_t num_sites, size_t local_dim);
    PureState(Amplitudes amplitudes, size_t num_sites, size_t local_dim)
        : num_sites_(num_sites), local_dim_(local_dim), amplitudes_(std::move(amplitudes)) {}

    size_t num_sites_;
    size_t local_dim_;
    Amplitudes amplitudes_;
};

/// Builds a PureState, renormalizing when the norm is within 1e-6 of one.
///
/// Throws std::invalid_argument on a length mismatch, a zero vector, d < 2,
/// N = 0, or a norm further than 1e-6 from one.
PureState make_pure(Amplitudes amplitudes, size_t num_sites, size_t local_dim);

/// Builds a PureState from any nonzero vector by dividing by its norm.
PureState normalized(Amplitudes amplitudes, size_t num_sites, size_t local_dim);

/// Hermitian, PSD, unit-trace matrix.
class DensityOperator {
   public:
    /// Validates all invariants (Hermitian and unit trace within 1e-10,
    /// eigenvalues >= -1e-10) and throws std::invalid_argument otherwise.
    static DensityOperator from_matrix(Matrix matrix);

    /// Diagonal density operator with the given eigenvalues.
    static DensityOperator diagonal(std::span<const double> probabilities);

    size_t dim() const { return static_cast<size_t>(matrix_.rows()); }
    const Matrix &matrix() const { return matrix_; }

   private:
    friend DensityOperator reduced_density(const PureState &state, const SiteSubset &keep);
    explicit DensityOperator(Matrix matrix) : matrix_(std::move(matrix)) {}

    Matrix matrix_;
};

/// Sorted list of distinct sites in [0, num_sites).
class SiteSubset {
   public:
    /// Sorts the sites; throws std::invalid_argument on duplicates or when a
    /// site is outside [0, num_sites).
    SiteSubset(std::vector<size_t> sites, size_t num_sites);

    static SiteSubset all(size_t num_sites);
    static SiteSubset single(size_t site, size_t num_sites);

    const std::vector<size_t> &sites() const { return sites_; }
    size_t size() const { return sites_.size(); }
    bool empty() const { return sites_.empty(); }
    size_t num_sites() const { return num_sites_; }
    bool contains(size_t site) const;
    /// The sites of [0, num_sites) not in this subset.
    SiteSubset complement() const;

   private:
    std::vector<size_t> sites_;
    size_t num_sites_;
};

/// Partial trace over the complement of `keep`.
///
/// The kept sites form the row/column index in the same little-endian order,
/// i.e. keep.sites()[0] is the fastest digit of the reduced index.
DensityOperator reduced_density(const PureState &state, const SiteSubset &keep);

/// All single-site reduced density matrices, computed in one pass.
std::vector<Matrix> single_site_marginals(const PureState &state);

/// Entropy -sum lambda ln lambda in nats; eigenvalues <= 1e-12 contribute 0.
double von_neumann_entropy(const DensityOperator &rho);

/// Same functional on a raw Hermitian matrix (throws if not Hermitian within 1e-10).
double von_neumann_entropy(const Matrix &rho);

/// Shannon entropy in nats with 0 ln 0 = 0.
///
/// Throws std::invalid_argument on a negative entry or when the entries do
/// not sum to one within 1e-9.
double shannon_entropy(std::span<const double> probabilities);
double shannon_entropy(const std::map<std::string, double> &distribution);

/// <a|b>, conjugating the first argument.
Complex overlap(const PureState &a, const PureState &b);

struct KrausResult {
    /// (K_site (x) I_rest)|psi>, unnormalized.
    Amplitudes vector;
    /// Squared norm of `vector`.
    double probability;
};

/// Applies a d x d operator to one site without renormalizing.
KrausResult apply_kraus(const PureState &state, size_t site, const Matrix &kraus);

/// In-place variant on a raw amplitude vector; returns the squared norm.
double apply_site_operator(Amplitudes &amplitudes, size_t stride, size_t local_dim, const Matrix &op);

}  // namespace worklab
