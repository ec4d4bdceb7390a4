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
#include <optional>
#include <string>
#include <vector>

#include "worklab/graphs.h"
#include "worklab/locc.h"
#include "worklab/qstate.h"

namespace worklab {

enum class EnsembleKind {
    haar,
    circuit,
    subset,
    graph_random,
    cycle,
    square_torus,
    triangular_torus,
    hexagonal,
    ghz,
    w,
    plus,
    product,
};

EnsembleKind parse_ensemble_kind(const std::string &name);
std::string to_string(EnsembleKind kind);
/// True when the drawn state depends on the seed.
bool is_stochastic(EnsembleKind kind);
bool is_graph_ensemble(EnsembleKind kind);

struct EnsembleParams {
    EnsembleKind kind = EnsembleKind::haar;
    /// Local dimension; everything except haar and product needs 2.
    size_t local_dim = 2;
    /// Subset size K. When unset, K = 2^round(N * k_log2_fraction).
    std::optional<uint64_t> subset_k;
    double k_log2_fraction = 0.5;
    /// Brickwork depth for the circuit ensemble.
    size_t depth = 20;
    /// Lattice rows for the torus and hexagonal ensembles; columns are N / rows.
    size_t rows = 0;
};

/// Throws std::invalid_argument when the ensemble cannot produce N sites.
void validate_ensemble(const EnsembleParams &params, size_t num_sites);

/// Graph underlying a graph-state ensemble member.
Graph ensemble_graph(const EnsembleParams &params, size_t num_sites, uint64_t seed);

PureState draw_state(const EnsembleParams &params, size_t num_sites, uint64_t seed);

enum class EgMethod { alternating, bruteforce, schmidt, none };

EgMethod parse_eg_method(const std::string &name);
std::string to_string(EgMethod method);

struct EstimatorConfig {
    EgMethod eg_method = EgMethod::alternating;
    size_t restarts = 32;
    size_t grid = 24;
    /// Menu for the LOCC lower bound; any of subset, null, refined_null,
    /// independent_set. The null protocol is always evaluated as well.
    std::vector<std::string> protocols = {"null", "subset"};
};

struct ExperimentConfig {
    EnsembleParams ensemble;
    std::vector<size_t> sizes;
    size_t samples = 1;
    EstimatorConfig estimators;
    std::optional<uint64_t> seed;
    /// Empty means no file.
    std::string output;
    std::string format = "csv";
    /// 0 selects WORKLAB_THREADS or the hardware concurrency.
    size_t threads = 0;
};

/// Throws std::invalid_argument on a missing seed, an empty or unsorted N
/// list, zero samples, an unknown format, or an estimator that cannot run on
/// the ensemble at some N (bruteforce above 4 sites, schmidt away from 2).
void validate_config(const ExperimentConfig &config);

ExperimentConfig parse_config_json(const std::string &text);
ExperimentConfig read_config_file(const std::string &path);

struct ResultRow {
    std::string ensemble;
    size_t num_sites = 0;
    size_t sample = 0;
    uint64_t seed = 0;
    double w_global = 0;
    double w_local = 0;
    double eg_value = 0;
    /// A certification name, or "none" when E_g was not estimated.
    std::string eg_cert;
    double w_locc_upper = 0;
    double w_locc_lower = 0;
    std::string best_protocol;
    double wall_ms = 0;

    bool operator==(const ResultRow &other) const = default;
};

/// Column order of the CSV report.
inline constexpr const char *kCsvHeader =
    "ensemble,N,sample,seed,w_global,w_local,eg_value,eg_cert,w_locc_upper,w_locc_lower,best_protocol,wall_ms";

/// Row for one sample. Throws std::logic_error if the result breaks the
/// ordering w_local <= w_locc_lower <= w_global, or w_locc_lower exceeds a
/// rigorous w_locc_upper by more than 1e-6.
ResultRow evaluate_row(const ExperimentConfig &config, size_t num_sites, size_t sample);

struct SlopeFit {
    std::string quantity;
    double slope = 0;
    double intercept = 0;
    /// NaN with fewer than three points.
    double slope_stderr = 0;
    size_t points = 0;
};

/// Ordinary least squares y = intercept + slope x.
SlopeFit fit_slope(const std::vector<double> &x, const std::vector<double> &y, std::string quantity = "");

struct ScalingResult {
    std::vector<ResultRow> rows;
    /// Fits of w_local, w_locc_lower and w_locc_upper against N over all rows.
    std::vector<SlopeFit> fits;
};

/// Rows are computed in parallel and written to config.output in (N,
/// sample) order as soon as each prefix completes.
ScalingResult run_scaling(const ExperimentConfig &config);

void write_csv(std::ostream &out, const std::vector<ResultRow> &rows);
void write_csv_row(std::ostream &out, const ResultRow &row);
std::vector<ResultRow> read_csv(std::istream &in);
void write_json(std::ostream &out, const std::vector<ResultRow> &rows);
std::vector<ResultRow> read_json(std::istream &in);

/// Writes rows to `path` as "csv" or "json". Throws std::invalid_argument on
/// empty rows or an unknown format, std::runtime_error on I/O failure.
void emit_report(const std::vector<ResultRow> &rows, const std::string &format, const std::string &path);

enum class TailMode {
    /// Threshold 4 alpha / D, bound 2 exp(-C1 alpha).
    haar_exponential,
    /// Threshold alpha / D, bound (t / alpha)^t (1 + epsilon).
    design_moment,
};

TailMode parse_tail_mode(const std::string &name);
std::string to_string(TailMode mode);

/// 2 / (9 pi^3 ln 2).
double tail_constant_c1();

struct TailConfig {
    EnsembleParams ensemble;
    size_t num_sites = 8;
    size_t samples = 1000;
    std::vector<double> alphas;
    uint64_t seed = 0;
    TailMode mode = TailMode::haar_exponential;
    int t = 2;
    double epsilon = 0.5;
    size_t threads = 0;
};

struct TailRow {
    double alpha = 0;
    double threshold = 0;
    size_t exceed_count = 0;
    double empirical = 0;
    double wilson_low = 0;
    double wilson_high = 0;
    double bound = 0;
    /// empirical > bound.
    bool violated = false;
};

/// Wilson score interval at 99%.
std::pair<double, double> wilson_interval(size_t successes, size_t trials);

/// Samples |<0...0|psi>|^2 and reports exceedance frequencies per alpha.
/// Throws std::invalid_argument when samples < 1000.
std::vector<TailRow> run_tail(const TailConfig &config);

void write_tail_csv(std::ostream &out, const std::vector<TailRow> &rows);

}  // namespace worklab
