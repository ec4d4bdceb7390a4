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

#include "worklab/locc.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>

#include "worklab/parallel.h"

namespace worklab {

namespace {

constexpr double kCompletenessTol = 1e-9;
constexpr double kMaxDroppedMass = 1e-9;

void require_label(const std::string &label) {
    if (label.empty() || label == kNullOutcome) {
        throw std::invalid_argument("outcome label must be nonempty and not '" + kNullOutcome + "'");
    }
    for (char c : label) {
        if (c == ',' || c == '|' || std::isspace(static_cast<unsigned char>(c))) {
            throw std::invalid_argument("outcome label '" + label + "' contains a reserved character");
        }
    }
}

Matrix projector(const Matrix &basis, Eigen::Index column) {
    return basis.col(column) * basis.col(column).adjoint();
}

/// Eigenbasis of a Hermitian matrix, eigenvalues descending, each vector's
/// first non-negligible component made real positive.
Matrix sorted_eigenbasis(const Matrix &rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
    const Eigen::Index d = rho.rows();
    std::vector<Eigen::Index> order(static_cast<size_t>(d));
    for (Eigen::Index k = 0; k < d; k++) {
        order[static_cast<size_t>(k)] = k;
    }
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return solver.eigenvalues()(a) > solver.eigenvalues()(b);
    });
    Matrix basis(d, d);
    for (Eigen::Index k = 0; k < d; k++) {
        Eigen::VectorXcd v = solver.eigenvectors().col(order[static_cast<size_t>(k)]);
        for (Eigen::Index a = 0; a < d; a++) {
            double mag = std::abs(v(a));
            if (mag > 1e-12) {
                v *= std::conj(v(a)) / mag;
                break;
            }
        }
        basis.col(k) = v;
    }
    return basis;
}


}  // namespace

SiteMeasurement SiteMeasurement::null_op() {
    return SiteMeasurement(Kind::null, {});
}

SiteMeasurement SiteMeasurement::z_basis(size_t local_dim) {
    Matrix identity = Matrix::Identity(static_cast<Eigen::Index>(local_dim), static_cast<Eigen::Index>(local_dim));
    std::vector<std::string> labels;
    for (size_t k = 0; k < local_dim; k++) {
        labels.push_back(std::to_string(k));
    }
    SiteMeasurement m = projective(identity, std::move(labels));
    m.kind_ = Kind::z_basis;
    return m;
}

SiteMeasurement SiteMeasurement::x_basis() {
    Matrix h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::numbers::sqrt2;
    SiteMeasurement m = projective(h, {"+", "-"});
    m.kind_ = Kind::x_basis;
    return m;
}

SiteMeasurement SiteMeasurement::projective(const Matrix &basis, std::vector<std::string> labels) {
    if (basis.rows() != basis.cols() || static_cast<size_t>(basis.cols()) != labels.size()) {
        throw std::invalid_argument("projective measurement needs a square basis and one label per column");
    }
    std::vector<KrausOutcome> outcomes;
    for (Eigen::Index k = 0; k < basis.cols(); k++) {
        outcomes.push_back({std::move(labels[static_cast<size_t>(k)]), projector(basis, k)});
    }
    return from_kraus(std::move(outcomes));
}

SiteMeasurement SiteMeasurement::from_kraus(std::vector<KrausOutcome> outcomes) {
    if (outcomes.empty()) {
        throw std::invalid_argument("measurement needs at least one Kraus operator");
    }
    const Eigen::Index d = outcomes.front().op.rows();
    if (d < 2) {
        throw std::invalid_argument("Kraus operators must be at least 2x2");
    }
    std::set<std::string> seen;
    Matrix total = Matrix::Zero(d, d);
    for (const auto &o : outcomes) {
        require_label(o.label);
        if (!seen.insert(o.label).second) {
            throw std::invalid_argument("duplicate outcome label '" + o.label + "'");
        }
        if (o.op.rows() != d || o.op.cols() != d) {
            throw std::invalid_argument("Kraus operators must all be d x d");
        }
        total += o.op.adjoint() * o.op;
    }
    double deviation = (total - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (deviation > kCompletenessTol) {
        throw std::invalid_argument("incomplete Kraus set: sum K^dagger K deviates from I by " +
                                    std::to_string(deviation));
    }
    return SiteMeasurement(Kind::general, std::move(outcomes));
}

bool SiteMeasurement::is_rank_one() const {
    if (is_null()) {
        return false;
    }
    for (const auto &o : outcomes_) {
        Eigen::JacobiSVD<Matrix> svd(o.op);
        const auto &s = svd.singularValues();
        Eigen::Index rank = 0;
        for (Eigen::Index k = 0; k < s.size(); k++) {
            if (s(k) > 1e-10) {
                rank++;
            }
        }
        if (rank > 1) {
            return false;
        }
    }
    return true;
}

std::string history_key(const OutcomeHistory &history) {
    std::string key;
    for (size_t l = 0; l < history.size(); l++) {
        if (l > 0) {
            key += '|';
        }
        for (size_t n = 0; n < history[l].size(); n++) {
            if (n > 0) {
                key += ',';
            }
            key += history[l][n];
        }
    }
    return key;
}

Protocol::Protocol(std::string name, size_t num_rounds, size_t num_sites, Strategy strategy)
    : name_(std::move(name)), num_rounds_(num_rounds), num_sites_(num_sites), strategy_(std::move(strategy)) {
    if (num_rounds == 0) {
        throw std::invalid_argument("protocol needs at least one round");
    }
    if (num_sites == 0) {
        throw std::invalid_argument("protocol needs at least one site");
    }
    if (!strategy_) {
        throw std::invalid_argument("protocol strategy is empty");
    }
}

Protocol Protocol::fixed(std::string name, std::vector<std::vector<SiteMeasurement>> rounds) {
    if (rounds.empty() || rounds.front().empty()) {
        throw std::invalid_argument("fixed protocol needs at least one round and one site");
    }
    const size_t n = rounds.front().size();
    for (const auto &r : rounds) {
        if (r.size() != n) {
            throw std::invalid_argument("every round must list one measurement per site");
        }
    }
    auto shared = std::make_shared<const std::vector<std::vector<SiteMeasurement>>>(rounds);
    Protocol p(std::move(name), rounds.size(), n,
               [shared](size_t round, const OutcomeHistory &) { return (*shared)[round]; });
    p.static_rounds_ = std::move(rounds);
    return p;
}

std::vector<SiteMeasurement> Protocol::measurements(size_t round, const OutcomeHistory &history) const {
    if (round >= num_rounds_) {
        throw StrategyUndefined("round " + std::to_string(round) + " is past the protocol's last round");
    }
    std::vector<SiteMeasurement> ms;
    try {
        ms = strategy_(round, history);
    } catch (const StrategyUndefined &) {
        throw;
    } catch (const std::out_of_range &e) {
        throw StrategyUndefined("strategy '" + name_ + "' undefined on history '" + history_key(history) +
                                "': " + e.what());
    }
    if (ms.size() != num_sites_) {
        throw StrategyUndefined("strategy '" + name_ + "' returned " + std::to_string(ms.size()) +
                                " measurements for " + std::to_string(num_sites_) + " sites");
    }
    return ms;
}

BranchTree execute(const Protocol &protocol, const PureState &state, const ExecuteOptions &options) {
    if (!(options.prune_below >= 0 && options.prune_below <= 1e-12)) {
        throw std::invalid_argument("prune_below must lie in [0, 1e-12]");
    }
    if (protocol.num_sites() != state.num_sites()) {
        throw std::invalid_argument("protocol and state have different numbers of sites");
    }
    const size_t d = state.local_dim();
    const double threshold = std::max(options.prune_below, kZeroProbabilityFloor);

    BranchTree tree;
    tree.num_sites = state.num_sites();
    tree.local_dim = d;
    tree.levels.push_back({BranchNode{{}, 1.0, state, {}}});

    std::vector<size_t> strides(state.num_sites());
    for (size_t n = 0; n < strides.size(); n++) {
        strides[n] = state.stride(n);
    }

    for (size_t round = 0; round < protocol.num_rounds(); round++) {
        const auto &level = tree.levels.back();
        std::vector<std::vector<BranchNode>> children(level.size());
        std::vector<double> dropped(level.size(), 0.0);

        parallel_for(level.size(), std::max<size_t>(1, options.threads), [&](size_t i) {
            const BranchNode &node = level[i];
            std::vector<SiteMeasurement> ms = protocol.measurements(round, node.history);
            const bool last_round = round + 1 == protocol.num_rounds();
            std::vector<std::string> labels;
            // Depth-first over sites keeps at most one vector per site alive.
            std::function<void(size_t, const Amplitudes &, double)> expand = [&](size_t site, const Amplitudes &amps,
                                                                                 double conditional) {
                if (site == ms.size()) {
                    BranchNode child;
                    child.history = node.history;
                    child.history.push_back(labels);
                    child.probability = node.probability * conditional;
                    PureState s = normalized(amps, state.num_sites(), d);
                    if (last_round) {
                        child.marginals = single_site_marginals(s);
                    }
                    if (!last_round || options.keep_states) {
                        child.state = std::move(s);
                    }
                    children[i].push_back(std::move(child));
                    return;
                }
                const SiteMeasurement &m = ms[site];
                if (m.is_null()) {
                    labels.push_back(kNullOutcome);
                    expand(site + 1, amps, conditional);
                    labels.pop_back();
                    return;
                }
                for (const auto &outcome : m.outcomes()) {
                    if (static_cast<size_t>(outcome.op.rows()) != d) {
                        throw std::invalid_argument("Kraus operator dimension does not match the state");
                    }
                    Amplitudes next = amps;
                    // Squared norm relative to the normalized node state.
                    double p = apply_site_operator(next, strides[site], d, outcome.op);
                    double absolute = node.probability * p;
                    if (absolute < threshold) {
                        dropped[i] += absolute;
                        continue;
                    }
                    labels.push_back(outcome.label);
                    expand(site + 1, next, p);
                    labels.pop_back();
                }
            };
            expand(0, node.state->amplitudes(), 1.0);
        });

        std::vector<BranchNode> next_level;
        for (size_t i = 0; i < children.size(); i++) {
            tree.dropped_mass += dropped[i];
            for (auto &c : children[i]) {
                next_level.push_back(std::move(c));
            }
        }
        if (!options.keep_states) {
            for (auto &node : tree.levels.back()) {
                node.state.reset();
            }
        }
        tree.levels.push_back(std::move(next_level));
    }

    return tree;
}

BranchTree execute(const Protocol &protocol, const PureState &state, double prune_below) {
    ExecuteOptions options;
    options.prune_below = prune_below;
    return execute(protocol, state, options);
}

ProtocolWork protocol_work(const BranchTree &tree) {
    if (tree.levels.empty()) {
        throw std::invalid_argument("empty branch tree");
    }
    if (tree.dropped_mass >= kMaxDroppedMass) {
        throw std::invalid_argument("branch tree is incomplete: dropped mass " + std::to_string(tree.dropped_mass));
    }
    ProtocolWork work;
    const double ln_d = std::log(static_cast<double>(tree.local_dim));
    double conditional_entropy = 0;
    for (const auto &leaf : tree.leaves()) {
        const double p = leaf.probability;
        if (p > 0) {
            work.outcome_entropy -= p * std::log(p);
        }
        if (leaf.marginals.size() != tree.num_sites) {
            throw std::invalid_argument("leaf is missing its single-site marginals");
        }
        for (const auto &rho : leaf.marginals) {
            conditional_entropy += p * von_neumann_entropy(rho);
        }
    }
    work.local_term = static_cast<double>(tree.num_sites) * ln_d - conditional_entropy;
    work.w_lambda = work.local_term - work.outcome_entropy;
    work.leaf_count = tree.leaves().size();
    return work;
}

std::map<std::string, double> outcome_distribution(const BranchTree &tree) {
    std::map<std::string, double> dist;
    for (const auto &leaf : tree.leaves()) {
        dist[history_key(leaf.history)] += leaf.probability;
    }
    return dist;
}

Protocol refine_rank_one(const Protocol &protocol, const PureState &state) {
    ExecuteOptions options;
    options.keep_states = false;
    const BranchTree tree = execute(protocol, state, options);
    const size_t d = state.local_dim();
    std::vector<std::string> labels;
    for (size_t k = 0; k < d; k++) {
        labels.push_back("e" + std::to_string(k));
    }
    auto table = std::make_shared<std::unordered_map<std::string, std::vector<SiteMeasurement>>>();
    for (const auto &leaf : tree.leaves()) {
        std::vector<SiteMeasurement> ms;
        ms.reserve(leaf.marginals.size());
        for (const auto &rho : leaf.marginals) {
            ms.push_back(SiteMeasurement::projective(sorted_eigenbasis(rho), labels));
        }
        table->emplace(history_key(leaf.history), std::move(ms));
    }
    const size_t last = protocol.num_rounds();
    Protocol base = protocol;
    return Protocol("refined(" + protocol.name() + ")", last + 1, protocol.num_sites(),
                    [base, table, last](size_t round, const OutcomeHistory &history) {
                        if (round < last) {
                            return base.measurements(round, history);
                        }
                        auto it = table->find(history_key(history));
                        if (it == table->end()) {
                            throw StrategyUndefined("refined round has no rule for history '" +
                                                    history_key(history) + "'");
                        }
                        return it->second;
                    });
}

Protocol subset_protocol(size_t num_sites) {
    return Protocol::fixed("subset", {std::vector<SiteMeasurement>(num_sites, SiteMeasurement::z_basis())});
}

Protocol null_op_protocol(size_t num_sites) {
    return Protocol::fixed("null", {std::vector<SiteMeasurement>(num_sites, SiteMeasurement::null_op())});
}

Protocol independent_set_protocol(const Graph &g) {
    const IndependentSet s = greedy_independent_set(g);
    std::vector<SiteMeasurement> round;
    for (size_t v = 0; v < g.num_vertices(); v++) {
        round.push_back(s.contains(v) ? SiteMeasurement::x_basis() : SiteMeasurement::z_basis());
    }
    return Protocol::fixed("independent_set", {std::move(round)});
}

LowerBound best_lower_bound(const PureState &state, std::span<const Protocol> protocols) {
    if (protocols.empty()) {
        throw std::invalid_argument("protocol menu is empty");
    }
    LowerBound result;
    for (size_t i = 0; i < protocols.size(); i++) {
        ExecuteOptions options;
        options.keep_states = false;
        result.works.push_back(protocol_work(execute(protocols[i], state, options)));
        if (i == 0 || result.works[i].w_lambda > result.value) {
            result.value = result.works[i].w_lambda;
            result.best_index = i;
        }
    }
    return result;
}

namespace {

[[noreturn]] void parse_error(size_t line_no, const std::string &message) {
    throw std::invalid_argument("protocol line " + std::to_string(line_no) + ": " + message);
}

Complex parse_complex(const std::string &token, size_t line_no) {
    try {
        size_t comma = token.find(',');
        size_t used = 0;
        if (comma == std::string::npos) {
            double re = std::stod(token, &used);
            if (used != token.size()) {
                parse_error(line_no, "bad number '" + token + "'");
            }
            return {re, 0.0};
        }
        std::string a = token.substr(0, comma), b = token.substr(comma + 1);
        double re = std::stod(a, &used);
        if (used != a.size()) {
            parse_error(line_no, "bad number '" + token + "'");
        }
        double im = std::stod(b, &used);
        if (used != b.size()) {
            parse_error(line_no, "bad number '" + token + "'");
        }
        return {re, im};
    } catch (const std::logic_error &) {
        parse_error(line_no, "bad number '" + token + "'");
    }
}

SiteMeasurement parse_spec(std::istringstream &fields, size_t line_no) {
    std::string kind;
    if (!(fields >> kind)) {
        parse_error(line_no, "missing measurement");
    }
    SiteMeasurement m = SiteMeasurement::null_op();
    if (kind == "Z") {
        m = SiteMeasurement::z_basis();
    } else if (kind == "X") {
        m = SiteMeasurement::x_basis();
    } else if (kind == "null") {
    } else if (kind == "kraus") {
        std::vector<KrausOutcome> outcomes;
        std::string label;
        while (fields >> label) {
            Matrix op(2, 2);
            for (Eigen::Index k = 0; k < 4; k++) {
                std::string token;
                if (!(fields >> token)) {
                    parse_error(line_no, "Kraus operator '" + label + "' needs 4 entries");
                }
                op(k / 2, k % 2) = parse_complex(token, line_no);
            }
            outcomes.push_back({label, op});
        }
        try {
            m = SiteMeasurement::from_kraus(std::move(outcomes));
        } catch (const std::invalid_argument &e) {
            parse_error(line_no, e.what());
        }
        return m;
    } else {
        parse_error(line_no, "unknown measurement '" + kind + "'");
    }
    std::string extra;
    if (fields >> extra) {
        parse_error(line_no, "unexpected token '" + extra + "'");
    }
    return m;
}

void write_complex(std::ostream &out, Complex z) {
    out << z.real() << ',' << z.imag();
}

}  // namespace

Protocol read_protocol(std::istream &in) {
    std::string name = "unnamed";
    std::optional<size_t> sites;
    std::vector<std::vector<SiteMeasurement>> rounds;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        std::istringstream fields(line);
        std::string head;
        if (!(fields >> head) || head[0] == '#') {
            continue;
        }
        if (head == "protocol") {
            if (!(fields >> name)) {
                parse_error(line_no, "missing protocol name");
            }
        } else if (head == "sites") {
            size_t n = 0;
            if (sites || !rounds.empty() || !(fields >> n) || n == 0) {
                parse_error(line_no, "'sites' must appear once, before any round, with a positive count");
            }
            sites = n;
        } else if (head == "round") {
            if (!sites) {
                parse_error(line_no, "'round' before 'sites'");
            }
            rounds.emplace_back(*sites, SiteMeasurement::null_op());
        } else if (head == "all" || head == "site") {
            if (rounds.empty()) {
                parse_error(line_no, "'" + head + "' outside a round");
            }
            if (head == "all") {
                SiteMeasurement m = parse_spec(fields, line_no);
                std::fill(rounds.back().begin(), rounds.back().end(), m);
            } else {
                long long index = -1;
                if (!(fields >> index) || index < 0 || static_cast<size_t>(index) >= *sites) {
                    parse_error(line_no, "site index out of range");
                }
                rounds.back()[static_cast<size_t>(index)] = parse_spec(fields, line_no);
            }
        } else {
            parse_error(line_no, "unknown directive '" + head + "'");
        }
    }
    if (rounds.empty()) {
        throw std::invalid_argument("protocol has no rounds");
    }
    return Protocol::fixed(name, std::move(rounds));
}

Protocol read_protocol_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open protocol file '" + path + "'");
    }
    return read_protocol(in);
}

void write_protocol(std::ostream &out, const Protocol &protocol) {
    if (!protocol.static_rounds()) {
        throw std::invalid_argument("adaptive protocols have no text form");
    }
    auto old_precision = out.precision(17);
    out << "protocol " << protocol.name() << "\n";
    out << "sites " << protocol.num_sites() << "\n";
    for (const auto &round : *protocol.static_rounds()) {
        out << "round\n";
        for (size_t n = 0; n < round.size(); n++) {
            const SiteMeasurement &m = round[n];
            switch (m.kind()) {
                case SiteMeasurement::Kind::null:
                    break;
                case SiteMeasurement::Kind::z_basis:
                    if (m.outcomes().size() != 2) {
                        throw std::invalid_argument("only qubit protocols have a text form");
                    }
                    out << "site " << n << " Z\n";
                    break;
                case SiteMeasurement::Kind::x_basis:
                    out << "site " << n << " X\n";
                    break;
                case SiteMeasurement::Kind::general:
                    out << "site " << n << " kraus";
                    for (const auto &o : m.outcomes()) {
                        if (o.op.rows() != 2) {
                            throw std::invalid_argument("only qubit protocols have a text form");
                        }
                        out << ' ' << o.label;
                        for (Eigen::Index k = 0; k < 4; k++) {
                            out << ' ';
                            write_complex(out, o.op(k / 2, k % 2));
                        }
                    }
                    out << "\n";
                    break;
            }
        }
    }
    out.precision(old_precision);
}

}  // namespace worklab
