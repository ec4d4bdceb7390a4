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

#include "worklab/lab.h"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>

#include "worklab/ensembles.h"
#include "worklab/parallel.h"
#include "worklab/rng.h"
#include "worklab/workbounds.h"

namespace worklab {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<EnsembleKind, const char *>, 12> kEnsembleNames = {{
    {EnsembleKind::haar, "haar"},
    {EnsembleKind::circuit, "circuit"},
    {EnsembleKind::subset, "subset"},
    {EnsembleKind::graph_random, "graph_random"},
    {EnsembleKind::cycle, "cycle"},
    {EnsembleKind::square_torus, "square_torus"},
    {EnsembleKind::triangular_torus, "triangular_torus"},
    {EnsembleKind::hexagonal, "hexagonal"},
    {EnsembleKind::ghz, "ghz"},
    {EnsembleKind::w, "w"},
    {EnsembleKind::plus, "plus"},
    {EnsembleKind::product, "product"},
}};

const std::set<std::string> kProtocolNames = {"subset", "null", "refined_null", "independent_set"};

LatticeKind lattice_of(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::cycle:
            return LatticeKind::cycle;
        case EnsembleKind::square_torus:
            return LatticeKind::square_torus;
        case EnsembleKind::triangular_torus:
            return LatticeKind::triangular_torus;
        case EnsembleKind::hexagonal:
            return LatticeKind::hexagonal;
        default:
            throw std::invalid_argument("ensemble '" + to_string(kind) + "' is not a lattice");
    }
}

uint64_t subset_size(const EnsembleParams &params, size_t num_sites) {
    if (params.subset_k) {
        return *params.subset_k;
    }
    double exponent = std::round(static_cast<double>(num_sites) * params.k_log2_fraction);
    if (exponent < 0 || exponent > 63) {
        throw std::invalid_argument("subset size 2^" + std::to_string(exponent) + " is out of range");
    }
    return uint64_t{1} << static_cast<unsigned>(exponent);
}

/// Seed stream for the E_g optimizer, distinct from the state's stream.
uint64_t optimizer_seed(uint64_t row_seed) {
    return mix64(row_seed ^ 0x5851f42d4c957f2dULL);
}

std::string format_double(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

double parse_double(const std::string &text, const std::string &what) {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception &) {
    }
    throw std::invalid_argument("bad " + what + " '" + text + "'");
}

uint64_t parse_u64(const std::string &text, const std::string &what) {
    try {
        size_t used = 0;
        if (!text.empty() && text[0] != '-') {
            uint64_t v = std::stoull(text, &used);
            if (used == text.size()) {
                return v;
            }
        }
    } catch (const std::exception &) {
    }
    throw std::invalid_argument("bad " + what + " '" + text + "'");
}

std::vector<Protocol> build_menu(const ExperimentConfig &config, const PureState &state, size_t num_sites,
                                 uint64_t seed) {
    std::vector<std::string> names = config.estimators.protocols;
    if (std::find(names.begin(), names.end(), "null") == names.end()) {
        names.insert(names.begin(), "null");
    }
    std::vector<Protocol> menu;
    for (const auto &name : names) {
        if (name == "null") {
            menu.push_back(null_op_protocol(num_sites));
        } else if (name == "subset") {
            menu.push_back(Protocol::fixed(
                "subset", {std::vector<SiteMeasurement>(num_sites, SiteMeasurement::z_basis(state.local_dim()))}));
        } else if (name == "refined_null") {
            menu.push_back(refine_rank_one(null_op_protocol(num_sites), state));
        } else if (name == "independent_set") {
            menu.push_back(independent_set_protocol(ensemble_graph(config.ensemble, num_sites, seed)));
        } else {
            throw std::invalid_argument("unknown protocol '" + name + "'");
        }
    }
    return menu;
}

json row_to_json(const ResultRow &r) {
    return json{{"ensemble", r.ensemble},
                {"N", r.num_sites},
                {"sample", r.sample},
                {"seed", r.seed},
                {"w_global", r.w_global},
                {"w_local", r.w_local},
                {"eg_value", r.eg_value},
                {"eg_cert", r.eg_cert},
                {"w_locc_upper", r.w_locc_upper},
                {"w_locc_lower", r.w_locc_lower},
                {"best_protocol", r.best_protocol},
                {"wall_ms", r.wall_ms}};
}

ResultRow row_from_json(const json &j) {
    ResultRow r;
    r.ensemble = j.at("ensemble").get<std::string>();
    r.num_sites = j.at("N").get<size_t>();
    r.sample = j.at("sample").get<size_t>();
    r.seed = j.at("seed").get<uint64_t>();
    r.w_global = j.at("w_global").get<double>();
    r.w_local = j.at("w_local").get<double>();
    r.eg_value = j.at("eg_value").get<double>();
    r.eg_cert = j.at("eg_cert").get<std::string>();
    r.w_locc_upper = j.at("w_locc_upper").get<double>();
    r.w_locc_lower = j.at("w_locc_lower").get<double>();
    r.best_protocol = j.at("best_protocol").get<std::string>();
    r.wall_ms = j.at("wall_ms").get<double>();
    return r;
}

}  // namespace

EnsembleKind parse_ensemble_kind(const std::string &name) {
    for (const auto &[kind, text] : kEnsembleNames) {
        if (name == text) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown ensemble '" + name + "'");
}

std::string to_string(EnsembleKind kind) {
    for (const auto &[k, text] : kEnsembleNames) {
        if (k == kind) {
            return text;
        }
    }
    throw std::invalid_argument("unknown ensemble kind");
}

bool is_stochastic(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::haar:
        case EnsembleKind::circuit:
        case EnsembleKind::subset:
        case EnsembleKind::graph_random:
        case EnsembleKind::product:
            return true;
        default:
            return false;
    }
}

bool is_graph_ensemble(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::graph_random:
        case EnsembleKind::cycle:
        case EnsembleKind::square_torus:
        case EnsembleKind::triangular_torus:
        case EnsembleKind::hexagonal:
            return true;
        default:
            return false;
    }
}

void validate_ensemble(const EnsembleParams &params, size_t num_sites) {
    if (num_sites == 0) {
        throw std::invalid_argument("N must be positive");
    }
    if (params.local_dim < 2) {
        throw std::invalid_argument("local dimension must be >= 2");
    }
    if (params.kind != EnsembleKind::haar && params.kind != EnsembleKind::product && params.local_dim != 2) {
        throw std::invalid_argument("ensemble '" + to_string(params.kind) + "' is defined for qubits only");
    }
    size_t dim = checked_pow(params.local_dim, num_sites);
    if (dim > kMaxSampledDim) {
        throw std::invalid_argument("state dimension " + std::to_string(params.local_dim) + "^" +
                                    std::to_string(num_sites) + " exceeds the 2^30 limit");
    }
    switch (params.kind) {
        case EnsembleKind::subset: {
            uint64_t k = subset_size(params, num_sites);
            if (k == 0 || k > dim) {
                throw std::invalid_argument("subset size K=" + std::to_string(k) + " must lie in [1, 2^N]");
            }
            break;
        }
        case EnsembleKind::circuit:
            if (num_sites < 2) {
                throw std::invalid_argument("circuit ensemble needs N >= 2");
            }
            break;
        case EnsembleKind::cycle:
        case EnsembleKind::square_torus:
        case EnsembleKind::triangular_torus:
        case EnsembleKind::hexagonal:
            ensemble_graph(params, num_sites, 0);
            break;
        default:
            break;
    }
}

Graph ensemble_graph(const EnsembleParams &params, size_t num_sites, uint64_t seed) {
    if (params.kind == EnsembleKind::graph_random) {
        return gen_random_graph(num_sites, seed);
    }
    LatticeKind lattice = lattice_of(params.kind);
    if (lattice == LatticeKind::cycle) {
        std::array<size_t, 1> dims{num_sites};
        return gen_lattice(lattice, dims);
    }
    if (params.rows == 0 || num_sites % params.rows != 0) {
        throw std::invalid_argument("ensemble '" + to_string(params.kind) + "' needs rows dividing N=" +
                                    std::to_string(num_sites));
    }
    std::array<size_t, 2> dims{params.rows, num_sites / params.rows};
    return gen_lattice(lattice, dims);
}

PureState draw_state(const EnsembleParams &params, size_t num_sites, uint64_t seed) {
    validate_ensemble(params, num_sites);
    switch (params.kind) {
        case EnsembleKind::haar:
            return sample_haar(num_sites, params.local_dim, seed);
        case EnsembleKind::circuit:
            return sample_circuit(CircuitSpec{num_sites, params.depth, seed});
        case EnsembleKind::subset:
            return subset_state(sample_subset(num_sites, subset_size(params, num_sites), seed));
        case EnsembleKind::graph_random:
        case EnsembleKind::cycle:
        case EnsembleKind::square_torus:
        case EnsembleKind::triangular_torus:
        case EnsembleKind::hexagonal:
            return graph_state(ensemble_graph(params, num_sites, seed));
        case EnsembleKind::ghz:
            return ghz_state(num_sites);
        case EnsembleKind::w:
            return w_state(num_sites);
        case EnsembleKind::plus:
            return plus_state(num_sites);
        case EnsembleKind::product: {
            Rng rng(seed);
            std::vector<Amplitudes> factors;
            for (size_t n = 0; n < num_sites; n++) {
                factors.push_back(sample_haar(1, params.local_dim, rng).amplitudes());
            }
            return ProductState(std::move(factors)).to_state();
        }
    }
    throw std::invalid_argument("unknown ensemble kind");
}

EgMethod parse_eg_method(const std::string &name) {
    if (name == "alternating") {
        return EgMethod::alternating;
    }
    if (name == "bruteforce") {
        return EgMethod::bruteforce;
    }
    if (name == "schmidt") {
        return EgMethod::schmidt;
    }
    if (name == "none") {
        return EgMethod::none;
    }
    throw std::invalid_argument("unknown E_g method '" + name + "'");
}

std::string to_string(EgMethod method) {
    switch (method) {
        case EgMethod::alternating:
            return "alternating";
        case EgMethod::bruteforce:
            return "bruteforce";
        case EgMethod::schmidt:
            return "schmidt";
        case EgMethod::none:
            return "none";
    }
    return "?";
}

void validate_config(const ExperimentConfig &config) {
    if (!config.seed) {
        throw std::invalid_argument("config needs a seed");
    }
    if (config.sizes.empty()) {
        throw std::invalid_argument("config needs a nonempty N list");
    }
    for (size_t i = 1; i < config.sizes.size(); i++) {
        if (config.sizes[i] <= config.sizes[i - 1]) {
            throw std::invalid_argument("N list must be strictly ascending");
        }
    }
    if (config.samples == 0) {
        throw std::invalid_argument("samples must be >= 1");
    }
    if (config.format != "csv" && config.format != "json") {
        throw std::invalid_argument("format must be csv or json");
    }
    const auto &est = config.estimators;
    if (est.eg_method == EgMethod::alternating && est.restarts == 0) {
        throw std::invalid_argument("alternating E_g needs restarts >= 1");
    }
    for (const auto &name : est.protocols) {
        if (!kProtocolNames.count(name)) {
            throw std::invalid_argument("unknown protocol '" + name + "'");
        }
        if (name == "independent_set" && !is_graph_ensemble(config.ensemble.kind)) {
            throw std::invalid_argument("independent_set protocol needs a graph ensemble");
        }
    }
    for (size_t n : config.sizes) {
        validate_ensemble(config.ensemble, n);
        if (est.eg_method == EgMethod::bruteforce) {
            if (n > kBruteforceMaxSites) {
                throw std::invalid_argument("bruteforce E_g is limited to N <= 4 (config asks for N=" +
                                            std::to_string(n) + ")");
            }
            if (config.ensemble.local_dim != 2) {
                throw std::invalid_argument("bruteforce E_g supports qubits only");
            }
        }
        if (est.eg_method == EgMethod::schmidt && n != 2) {
            throw std::invalid_argument("schmidt E_g is exact only for N = 2");
        }
    }
}

ExperimentConfig parse_config_json(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    static const std::set<std::string> top_keys = {"ensemble", "N",      "samples", "estimators",
                                                   "seed",     "output", "format",  "threads"};
    static const std::set<std::string> ensemble_keys = {"kind", "d", "K", "K_log2_fraction", "depth", "rows"};
    static const std::set<std::string> estimator_keys = {"eg", "protocols"};
    static const std::set<std::string> eg_keys = {"method", "restarts", "grid"};
    auto check_keys = [](const json &obj, const std::set<std::string> &allowed, const std::string &where) {
        if (!obj.is_object()) {
            throw std::invalid_argument(where + " must be an object");
        }
        for (const auto &item : obj.items()) {
            if (!allowed.count(item.key())) {
                throw std::invalid_argument("unknown key '" + item.key() + "' in " + where);
            }
        }
    };
    ExperimentConfig c;
    try {
        check_keys(j, top_keys, "config");
        const json &e = j.at("ensemble");
        check_keys(e, ensemble_keys, "ensemble");
        c.ensemble.kind = parse_ensemble_kind(e.at("kind").get<std::string>());
        c.ensemble.local_dim = e.value("d", size_t{2});
        if (e.contains("K")) {
            c.ensemble.subset_k = e.at("K").get<uint64_t>();
        }
        c.ensemble.k_log2_fraction = e.value("K_log2_fraction", 0.5);
        c.ensemble.depth = e.value("depth", size_t{20});
        c.ensemble.rows = e.value("rows", size_t{0});
        c.sizes = j.at("N").get<std::vector<size_t>>();
        c.samples = j.value("samples", size_t{1});
        if (j.contains("estimators")) {
            const json &est = j.at("estimators");
            check_keys(est, estimator_keys, "estimators");
            if (est.contains("eg")) {
                const json &eg = est.at("eg");
                check_keys(eg, eg_keys, "estimators.eg");
                c.estimators.eg_method = parse_eg_method(eg.value("method", std::string("alternating")));
                c.estimators.restarts = eg.value("restarts", size_t{32});
                c.estimators.grid = eg.value("grid", size_t{24});
            }
            if (est.contains("protocols")) {
                c.estimators.protocols = est.at("protocols").get<std::vector<std::string>>();
            }
        }
        if (j.contains("seed")) {
            c.seed = j.at("seed").get<uint64_t>();
        }
        c.output = j.value("output", std::string());
        c.format = j.value("format", std::string("csv"));
        c.threads = j.value("threads", size_t{0});
    } catch (const json::exception &err) {
        throw std::invalid_argument(std::string("bad config: ") + err.what());
    }
    validate_config(c);
    return c;
}

ExperimentConfig read_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

ResultRow evaluate_row(const ExperimentConfig &config, size_t num_sites, size_t sample) {
    auto start = std::chrono::steady_clock::now();
    ResultRow row;
    row.ensemble = to_string(config.ensemble.kind);
    row.num_sites = num_sites;
    row.sample = sample;
    row.seed = derive_seed(config.seed.value(), num_sites, sample);

    PureState state = draw_state(config.ensemble, num_sites, row.seed);
    row.w_global = w_global(state);
    row.w_local = w_local(state);

    const auto &est = config.estimators;
    const double n_ln_d = static_cast<double>(num_sites) * std::log(static_cast<double>(state.local_dim()));
    bool rigorous = false;
    switch (est.eg_method) {
        case EgMethod::alternating:
        case EgMethod::bruteforce: {
            EgEstimate eg = [&] {
                if (est.eg_method == EgMethod::bruteforce) {
                    return eg_bruteforce(state, est.grid);
                }
                EgOptions options;
                options.restarts = est.restarts;
                options.seed = optimizer_seed(row.seed);
                return eg_alternating(state, options);
            }();
            WorkUpperBound upper = w_locc_upper(state, eg);
            row.eg_value = eg.value;
            row.eg_cert = to_string(eg.certification);
            row.w_locc_upper = upper.value;
            rigorous = upper.rigorous;
            break;
        }
        case EgMethod::schmidt:
            row.eg_value = eg_schmidt(state, SiteSubset({0}, num_sites));
            row.eg_cert = to_string(EgCertification::schmidt_exact);
            row.w_locc_upper = n_ln_d - row.eg_value;
            rigorous = true;
            break;
        case EgMethod::none:
            row.eg_value = 0;
            row.eg_cert = "none";
            row.w_locc_upper = row.w_global;
            rigorous = true;
            break;
    }

    std::vector<Protocol> menu = build_menu(config, state, num_sites, row.seed);
    LowerBound lower = best_lower_bound(state, menu);
    row.w_locc_lower = lower.value;
    row.best_protocol = menu[lower.best_index].name();

    if (row.w_locc_lower < row.w_local - 1e-9 || row.w_locc_lower > row.w_global + 1e-8) {
        throw std::logic_error("ordering w_local <= w_locc_lower <= w_global broken at N=" +
                               std::to_string(num_sites) + " sample " + std::to_string(sample));
    }
    if (rigorous && row.w_locc_lower > row.w_locc_upper + 1e-6) {
        throw std::logic_error("w_locc_lower exceeds the certified upper bound at N=" + std::to_string(num_sites) +
                               " sample " + std::to_string(sample));
    }
    for (double v : {row.w_global, row.w_local, row.eg_value, row.w_locc_upper, row.w_locc_lower}) {
        if (!std::isfinite(v)) {
            throw std::logic_error("non-finite value in result row");
        }
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

SlopeFit fit_slope(const std::vector<double> &x, const std::vector<double> &y, std::string quantity) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("slope fit needs at least two (x, y) pairs");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); i++) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); i++) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) {
        throw std::invalid_argument("slope fit needs at least two distinct x values");
    }
    SlopeFit fit;
    fit.quantity = std::move(quantity);
    fit.points = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (x.size() < 3) {
        fit.slope_stderr = std::numeric_limits<double>::quiet_NaN();
    } else {
        double rss = 0;
        for (size_t i = 0; i < x.size(); i++) {
            double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
    }
    return fit;
}

ScalingResult run_scaling(const ExperimentConfig &config) {
    validate_config(config);
    const size_t total = config.sizes.size() * config.samples;

    std::ofstream out;
    const bool stream_csv = !config.output.empty() && config.format == "csv";
    if (!config.output.empty()) {
        out.open(config.output);
        if (!out) {
            throw std::runtime_error("cannot write output '" + config.output + "'");
        }
    }
    if (stream_csv) {
        out << kCsvHeader << "\n";
    }

    std::vector<std::optional<ResultRow>> slots(total);
    size_t next_to_write = 0;
    std::mutex mutex;
    parallel_for(total, resolve_threads(config.threads), [&](size_t index) {
        ResultRow row = evaluate_row(config, config.sizes[index / config.samples], index % config.samples);
        std::lock_guard lock(mutex);
        slots[index] = std::move(row);
        while (next_to_write < total && slots[next_to_write]) {
            if (stream_csv) {
                write_csv_row(out, *slots[next_to_write]);
                out.flush();
            }
            next_to_write++;
        }
    });

    ScalingResult result;
    for (auto &slot : slots) {
        result.rows.push_back(std::move(*slot));
    }
    if (!config.output.empty() && !stream_csv) {
        write_json(out, result.rows);
    }
    if (out.is_open()) {
        out.close();
        if (!out) {
            throw std::runtime_error("failed writing output '" + config.output + "'");
        }
    }

    if (config.sizes.size() >= 2) {
        std::vector<double> x, local, lower, upper;
        for (const auto &r : result.rows) {
            x.push_back(static_cast<double>(r.num_sites));
            local.push_back(r.w_local);
            lower.push_back(r.w_locc_lower);
            upper.push_back(r.w_locc_upper);
        }
        result.fits.push_back(fit_slope(x, local, "w_local"));
        result.fits.push_back(fit_slope(x, lower, "w_locc_lower"));
        result.fits.push_back(fit_slope(x, upper, "w_locc_upper"));
    }
    return result;
}

void write_csv_row(std::ostream &out, const ResultRow &r) {
    out << r.ensemble << ',' << r.num_sites << ',' << r.sample << ',' << r.seed << ',' << format_double(r.w_global)
        << ',' << format_double(r.w_local) << ',' << format_double(r.eg_value) << ',' << r.eg_cert << ','
        << format_double(r.w_locc_upper) << ',' << format_double(r.w_locc_lower) << ',' << r.best_protocol << ','
        << format_double(r.wall_ms) << "\n";
}

void write_csv(std::ostream &out, const std::vector<ResultRow> &rows) {
    out << kCsvHeader << "\n";
    for (const auto &r : rows) {
        write_csv_row(out, r);
    }
}

std::vector<ResultRow> read_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::invalid_argument("CSV header does not match the expected columns");
    }
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream s(line);
        std::string field;
        while (std::getline(s, field, ',')) {
            f.push_back(field);
        }
        if (f.size() != 12) {
            throw std::invalid_argument("CSV row has " + std::to_string(f.size()) + " fields, expected 12");
        }
        ResultRow r;
        r.ensemble = f[0];
        r.num_sites = parse_u64(f[1], "N");
        r.sample = parse_u64(f[2], "sample");
        r.seed = parse_u64(f[3], "seed");
        r.w_global = parse_double(f[4], "w_global");
        r.w_local = parse_double(f[5], "w_local");
        r.eg_value = parse_double(f[6], "eg_value");
        r.eg_cert = f[7];
        r.w_locc_upper = parse_double(f[8], "w_locc_upper");
        r.w_locc_lower = parse_double(f[9], "w_locc_lower");
        r.best_protocol = f[10];
        r.wall_ms = parse_double(f[11], "wall_ms");
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_json(std::ostream &out, const std::vector<ResultRow> &rows) {
    json arr = json::array();
    for (const auto &r : rows) {
        arr.push_back(row_to_json(r));
    }
    out << arr.dump(2) << "\n";
}

std::vector<ResultRow> read_json(std::istream &in) {
    std::vector<ResultRow> rows;
    try {
        json arr = json::parse(in);
        if (!arr.is_array()) {
            throw std::invalid_argument("JSON report must be an array");
        }
        for (const auto &j : arr) {
            rows.push_back(row_from_json(j));
        }
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("bad JSON report: ") + e.what());
    }
    return rows;
}

void emit_report(const std::vector<ResultRow> &rows, const std::string &format, const std::string &path) {
    if (rows.empty()) {
        throw std::invalid_argument("report needs at least one row");
    }
    if (format != "csv" && format != "json") {
        throw std::invalid_argument("format must be csv or json");
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write report '" + path + "'");
    }
    if (format == "csv") {
        write_csv(out, rows);
    } else {
        write_json(out, rows);
    }
    out.close();
    if (!out) {
        throw std::runtime_error("failed writing report '" + path + "'");
    }
}

TailMode parse_tail_mode(const std::string &name) {
    if (name == "haar_exponential") {
        return TailMode::haar_exponential;
    }
    if (name == "design_moment") {
        return TailMode::design_moment;
    }
    throw std::invalid_argument("unknown tail mode '" + name + "'");
}

std::string to_string(TailMode mode) {
    return mode == TailMode::haar_exponential ? "haar_exponential" : "design_moment";
}

double tail_constant_c1() {
    return 2.0 / (9.0 * std::pow(std::numbers::pi, 3) * std::numbers::ln2);
}

std::pair<double, double> wilson_interval(size_t successes, size_t trials) {
    if (trials == 0 || successes > trials) {
        throw std::invalid_argument("Wilson interval needs 0 <= successes <= trials, trials > 0");
    }
    constexpr double z = 2.5758293035489004;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1 + z * z / n;
    const double center = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::vector<TailRow> run_tail(const TailConfig &config) {
    if (config.samples < 1000) {
        throw std::invalid_argument("tail experiment needs at least 1000 samples");
    }
    if (config.alphas.empty()) {
        throw std::invalid_argument("tail experiment needs at least one alpha");
    }
    for (double a : config.alphas) {
        if (!(a > 0)) {
            throw std::invalid_argument("alpha must be positive");
        }
    }
    if (config.mode == TailMode::design_moment && config.t < 1) {
        throw std::invalid_argument("design moment order t must be >= 1");
    }
    validate_ensemble(config.ensemble, config.num_sites);
    std::vector<double> overlaps(config.samples);
    size_t dim = 0;
    std::mutex dim_mutex;
    parallel_for(config.samples, resolve_threads(config.threads), [&](size_t i) {
        PureState s = draw_state(config.ensemble, config.num_sites, derive_seed(config.seed, config.num_sites, i));
        overlaps[i] = std::norm(s[0]);
        if (i == 0) {
            std::lock_guard lock(dim_mutex);
            dim = s.dim();
        }
    });
    const double d = static_cast<double>(dim);
    const double c1 = tail_constant_c1();
    std::vector<TailRow> rows;
    for (double alpha : config.alphas) {
        TailRow row;
        row.alpha = alpha;
        if (config.mode == TailMode::haar_exponential) {
            row.threshold = 4 * alpha / d;
            row.bound = 2 * std::exp(-c1 * alpha);
        } else {
            row.threshold = alpha / d;
            row.bound = std::pow(config.t / alpha, config.t) * (1 + config.epsilon);
        }
        row.exceed_count = static_cast<size_t>(
            std::count_if(overlaps.begin(), overlaps.end(), [&](double v) { return v >= row.threshold; }));
        row.empirical = static_cast<double>(row.exceed_count) / static_cast<double>(config.samples);
        std::tie(row.wilson_low, row.wilson_high) = wilson_interval(row.exceed_count, config.samples);
        row.violated = row.empirical > row.bound;
        rows.push_back(row);
    }
    return rows;
}

void write_tail_csv(std::ostream &out, const std::vector<TailRow> &rows) {
    out << "alpha,threshold,exceed_count,empirical,wilson_low,wilson_high,bound,violated\n";
    for (const auto &r : rows) {
        out << format_double(r.alpha) << ',' << format_double(r.threshold) << ',' << r.exceed_count << ','
            << format_double(r.empirical) << ',' << format_double(r.wilson_low) << ','
            << format_double(r.wilson_high) << ',' << format_double(r.bound) << ','
            << (r.violated ? "true" : "false") << "\n";
    }
}

}  // namespace worklab
