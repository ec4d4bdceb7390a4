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

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "worklab/graphs.h"
#include "worklab/qstate.h"

namespace worklab {

/// Label of the deterministic outcome recorded by a site that does nothing.
inline const std::string kNullOutcome = "phi";

struct KrausOutcome {
    std::string label;
    Matrix op;
};

/// Generalized measurement on one site, or the null operation.
class SiteMeasurement {
   public:
    enum class Kind { null, z_basis, x_basis, general };

    static SiteMeasurement null_op();
    /// Computational basis, labels "0", "1", ...
    static SiteMeasurement z_basis(size_t local_dim = 2);
    /// {|+>, |->}, labels "+", "-".
    static SiteMeasurement x_basis();
    /// Rank-one projectors onto the columns of a unitary `basis`.
    static SiteMeasurement projective(const Matrix &basis, std::vector<std::string> labels);
    /// Throws std::invalid_argument unless the operators are square of one
    /// size, labels are distinct (and not "phi"), and sum K^dagger K = I
    /// within 1e-9.
    static SiteMeasurement from_kraus(std::vector<KrausOutcome> outcomes);

    Kind kind() const { return kind_; }
    bool is_null() const { return kind_ == Kind::null; }
    const std::vector<KrausOutcome> &outcomes() const { return outcomes_; }
    /// Every Kraus operator has rank one (the null op does not count).
    bool is_rank_one() const;

   private:
    SiteMeasurement(Kind kind, std::vector<KrausOutcome> outcomes) : kind_(kind), outcomes_(std::move(outcomes)) {}

    Kind kind_;
    std::vector<KrausOutcome> outcomes_;
};

/// Outcome labels indexed [round][site].
using OutcomeHistory = std::vector<std::vector<std::string>>;

/// Canonical text key for a history: sites joined by ',' and rounds by '|'.
std::string history_key(const OutcomeHistory &history);

/// Maps (round, outcomes of earlier rounds) to one measurement per site.
/// Rounds are numbered from 0.
using Strategy = std::function<std::vector<SiteMeasurement>(size_t round, const OutcomeHistory &history)>;

/// Raised when a strategy has no rule for a reachable history.
class StrategyUndefined : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Adaptive L-round LOCC protocol.
class Protocol {
   public:
    Protocol(std::string name, size_t num_rounds, size_t num_sites, Strategy strategy);

    /// Non-adaptive protocol; rounds[l][n] is the measurement of site n in round l.
    static Protocol fixed(std::string name, std::vector<std::vector<SiteMeasurement>> rounds);

    const std::string &name() const { return name_; }
    size_t num_rounds() const { return num_rounds_; }
    size_t num_sites() const { return num_sites_; }
    /// Present only for protocols built with fixed().
    const std::optional<std::vector<std::vector<SiteMeasurement>>> &static_rounds() const { return static_rounds_; }

    /// Queries the strategy; throws StrategyUndefined if it has no rule or
    /// returns the wrong number of measurements.
    std::vector<SiteMeasurement> measurements(size_t round, const OutcomeHistory &history) const;

   private:
    std::string name_;
    size_t num_rounds_;
    size_t num_sites_;
    Strategy strategy_;
    std::optional<std::vector<std::vector<SiteMeasurement>>> static_rounds_;
};

struct BranchNode {
    OutcomeHistory history;
    /// Absolute probability P(Y^l) of the history.
    double probability = 0;
    /// Conditional state after the last round in `history`. Always present on
    /// leaves when ExecuteOptions::keep_states is set; internal nodes keep it
    /// only under the same option.
    std::optional<PureState> state;
    /// Single-site reduced states of the conditional state (leaves only).
    std::vector<Matrix> marginals;
};

struct BranchTree {
    size_t num_sites = 0;
    size_t local_dim = 0;
    /// levels[0] is the root; levels[l] holds the histories after l rounds.
    std::vector<std::vector<BranchNode>> levels;
    /// Total probability of discarded branches.
    double dropped_mass = 0;

    const std::vector<BranchNode> &leaves() const { return levels.back(); }
};

/// Branches below this absolute probability are treated as numerically
/// zero and discarded even in exact mode; their mass is added to dropped_mass.
inline constexpr double kZeroProbabilityFloor = 1e-20;

struct ExecuteOptions {
    /// In [0, 1e-12]; 0 means exact.
    double prune_below = 0;
    bool keep_states = true;
    /// Workers used to expand sibling branches.
    size_t threads = 1;
};

/// Expands every reachable outcome history breadth-first.
BranchTree execute(const Protocol &protocol, const PureState &state, const ExecuteOptions &options);
BranchTree execute(const Protocol &protocol, const PureState &state, double prune_below = 0);

struct ProtocolWork {
    double w_lambda = 0;
    /// Shannon entropy H(Y^L) of the leaf distribution.
    double outcome_entropy = 0;
    /// sum_n (ln d - sum_Y P(Y) S(rho_n^Y)).
    double local_term = 0;
    size_t leaf_count = 0;
};

/// Throws std::invalid_argument when the tree dropped 1e-9 or more probability mass.
ProtocolWork protocol_work(const BranchTree &tree);

/// Leaf distribution keyed by history_key().
std::map<std::string, double> outcome_distribution(const BranchTree &tree);

/// Appends a round measuring each site in the eigenbasis of its conditional
/// reduced state (eigenvalues descending; each eigenvector's first
/// component above 1e-12 made real positive). Outcome labels are "e0", "e1", ...
Protocol refine_rank_one(const Protocol &protocol, const PureState &state);

/// One round, every site measured in the computational basis.
Protocol subset_protocol(size_t num_sites);

/// One round, every site left alone (outcome "phi").
Protocol null_op_protocol(size_t num_sites);

/// One round: X basis on a greedy independent set S, Z basis elsewhere.
Protocol independent_set_protocol(const Graph &g);

struct LowerBound {
    double value = 0;
    size_t best_index = 0;
    std::vector<ProtocolWork> works;
};

/// Max of W_Lambda over a menu; lowest index wins ties.
LowerBound best_lower_bound(const PureState &state, std::span<const Protocol> protocols);

/// Text protocol description for static qubit protocols:
///
///     # comment
///     protocol <name>
///     sites <N>
///     round
///     all Z
///     site 2 X
///     site 3 null
///     site 0 kraus k0 1,0 0,0 0,0 0,0 k1 0,0 0,0 0,0 1,0
///
/// Each "round" starts with every site null. Kraus entries are row-major
/// "re,im" (or plain "re") tokens.
Protocol read_protocol(std::istream &in);
Protocol read_protocol_file(const std::string &path);
/// Throws std::invalid_argument for adaptive protocols or non-qubit operators.
void write_protocol(std::ostream &out, const Protocol &protocol);

}  // namespace worklab
