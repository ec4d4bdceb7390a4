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

#include "worklab/cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "worklab/ensembles.h"
#include "worklab/lab.h"
#include "worklab/locc.h"
#include "worklab/workbounds.h"

namespace worklab {

namespace {

class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

struct StateArgs {
    std::string kind = "haar";
    size_t n = 0;
    size_t d = 2;
    std::optional<uint64_t> k;
    size_t depth = 20;
    size_t rows = 0;
    std::string graph_file;
    std::string subset_file;
    std::optional<uint64_t> seed;
};

const std::vector<std::string> kStateKinds = {"haar",      "circuit", "subset", "graph_random", "cycle",
                                              "square_torus", "triangular_torus", "hexagonal", "ghz",
                                              "w",         "plus",    "product", "graph"};

void add_state_options(CLI::App *cmd, StateArgs &args) {
    cmd->add_option("--state", args.kind, "State family")->check(CLI::IsMember(kStateKinds))->capture_default_str();
    cmd->add_option("--n", args.n, "Number of sites");
    cmd->add_option("--d", args.d, "Local dimension (haar, product)")->capture_default_str();
    cmd->add_option("--k", args.k, "Subset size K (default 2^(N/2))");
    cmd->add_option("--depth", args.depth, "Brickwork depth for circuit states")->capture_default_str();
    cmd->add_option("--rows", args.rows, "Lattice rows for torus and hexagonal states");
    cmd->add_option("--graph", args.graph_file, "Edge-list file (with --state graph)");
    cmd->add_option("--subset-file", args.subset_file, "Support file (with --state subset)");
    cmd->add_option("--seed", args.seed, "Seed for stochastic states and optimizers");
}

bool state_is_stochastic(const StateArgs &args) {
    if (args.kind == "graph") {
        return false;
    }
    if (args.kind == "subset" && !args.subset_file.empty()) {
        return false;
    }
    return is_stochastic(parse_ensemble_kind(args.kind));
}

size_t state_sites(const StateArgs &args) {
    if (args.kind == "graph" && args.n == 0 && !args.graph_file.empty()) {
        return read_edge_list_file(args.graph_file).num_vertices();
    }
    if (args.n == 0) {
        throw UsageError("--n is required");
    }
    return args.n;
}

EnsembleParams params_of(const StateArgs &args) {
    EnsembleParams p;
    p.kind = parse_ensemble_kind(args.kind);
    p.local_dim = args.d;
    p.subset_k = args.k;
    p.depth = args.depth;
    p.rows = args.rows;
    return p;
}

void require_seed(const StateArgs &args, bool needed) {
    if (needed && !args.seed) {
        throw UsageError("--seed is required for stochastic commands");
    }
}

/// State and, for graph families, its graph.
std::pair<PureState, std::optional<Graph>> build_state(const StateArgs &args) {
    if (args.kind == "graph") {
        if (args.graph_file.empty()) {
            throw UsageError("--state graph needs --graph FILE");
        }
        Graph g = read_edge_list_file(args.graph_file);
        if (args.n != 0 && args.n != g.num_vertices()) {
            throw UsageError("--n disagrees with the graph file");
        }
        PureState s = graph_state(g);
        return {std::move(s), std::move(g)};
    }
    if (args.kind == "subset" && !args.subset_file.empty()) {
        std::ifstream in(args.subset_file);
        if (!in) {
            throw std::runtime_error("cannot open subset file '" + args.subset_file + "'");
        }
        return {subset_state(read_subset_spec(in)), std::nullopt};
    }
    const size_t n = state_sites(args);
    EnsembleParams p = params_of(args);
    try {
        validate_ensemble(p, n);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    const uint64_t seed = args.seed.value_or(0);
    std::optional<Graph> g;
    if (is_graph_ensemble(p.kind)) {
        g = ensemble_graph(p, n, seed);
    }
    return {draw_state(p, n, seed), std::move(g)};
}

int run_work(const StateArgs &args, std::ostream &out) {
    require_seed(args, state_is_stochastic(args));
    auto [state, graph] = build_state(args);
    std::vector<Protocol> menu = {null_op_protocol(state.num_sites())};
    if (state.local_dim() == 2) {
        menu.push_back(subset_protocol(state.num_sites()));
    }
    if (graph) {
        menu.push_back(independent_set_protocol(*graph));
    }
    LowerBound lower = best_lower_bound(state, menu);
    out << "N=" << state.num_sites() << "\n";
    out << "d=" << state.local_dim() << "\n";
    out << "w_global=" << w_global(state) << "\n";
    out << "w_local=" << w_local(state) << "\n";
    out << "w_locc_lower=" << lower.value << "\n";
    out << "best_protocol=" << menu[lower.best_index].name() << "\n";
    return 0;
}

int run_eg(const StateArgs &args, const std::string &method_name, size_t restarts, size_t grid,
           std::ostream &out) {
    EgMethod method = parse_eg_method(method_name);
    if (method == EgMethod::none) {
        throw UsageError("--method none estimates nothing");
    }
    const size_t n = state_sites(args);
    if (method == EgMethod::bruteforce && n > kBruteforceMaxSites) {
        throw UsageError("bruteforce E_g is limited to N <= 4 (got N=" + std::to_string(n) + ")");
    }
    if (method == EgMethod::schmidt && n != 2) {
        throw UsageError("schmidt E_g is exact only for N = 2");
    }
    require_seed(args, state_is_stochastic(args) || method == EgMethod::alternating);
    auto [state, graph] = build_state(args);
    if (method == EgMethod::schmidt) {
        double value = eg_schmidt(state, SiteSubset({0}, n));
        out << "eg_value=" << value << "\n";
        out << "eg_cert=" << to_string(EgCertification::schmidt_exact) << "\n";
        out << "w_locc_upper=" << static_cast<double>(n) * std::log(static_cast<double>(state.local_dim())) - value
            << "\n";
        return 0;
    }
    EgEstimate eg = [&] {
        if (method == EgMethod::bruteforce) {
            return eg_bruteforce(state, grid);
        }
        EgOptions options;
        options.restarts = restarts;
        options.seed = args.seed.value_or(0);
        options.threads = 0;
        return eg_alternating(state, options);
    }();
    WorkUpperBound upper = w_locc_upper(state, eg);
    out << "eg_value=" << eg.value << "\n";
    out << "eg_cert=" << to_string(eg.certification) << "\n";
    out << "restarts_used=" << eg.restarts_used << "\n";
    out << "w_locc_upper=" << upper.value << "\n";
    out << "rigorous=" << (upper.rigorous ? "true" : "false") << "\n";
    return 0;
}

int run_protocol(const StateArgs &args, const std::string &file, bool refine, double prune, std::ostream &out) {
    require_seed(args, state_is_stochastic(args));
    Protocol protocol = read_protocol_file(file);
    auto [state, graph] = build_state(args);
    if (refine) {
        protocol = refine_rank_one(protocol, state);
    }
    ExecuteOptions options;
    options.prune_below = prune;
    options.keep_states = false;
    BranchTree tree = execute(protocol, state, options);
    out << "protocol=" << protocol.name() << "\n";
    out << "leaves=" << tree.leaves().size() << "\n";
    out << "dropped_mass=" << tree.dropped_mass << "\n";
    ProtocolWork work = protocol_work(tree);
    out << "w_lambda=" << work.w_lambda << "\n";
    out << "outcome_entropy=" << work.outcome_entropy << "\n";
    out << "local_term=" << work.local_term << "\n";
    return 0;
}

int run_scaling_cmd(const std::string &config_path, std::optional<uint64_t> seed, const std::string &output,
                    std::optional<size_t> threads, std::ostream &out) {
    std::ifstream in(config_path);
    if (!in) {
        throw UsageError("cannot open config '" + config_path + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    if (seed) {
        j["seed"] = *seed;
    }
    if (!j.is_object() || !j.contains("seed")) {
        throw UsageError("--seed is required (or a \"seed\" entry in the config)");
    }
    if (!output.empty()) {
        j["output"] = output;
    }
    if (threads) {
        j["threads"] = *threads;
    }
    ExperimentConfig config = parse_config_json(j.dump());
    ScalingResult result = run_scaling(config);
    out << "rows=" << result.rows.size() << "\n";
    if (!config.output.empty()) {
        out << "output=" << config.output << "\n";
    }
    for (const auto &fit : result.fits) {
        out << "slope[" << fit.quantity << "]=" << fit.slope << " +- " << fit.slope_stderr << " (intercept "
            << fit.intercept << ", " << fit.points << " points)\n";
    }
    return 0;
}

int run_tail_cmd(TailConfig config, const StateArgs &args, std::optional<uint64_t> seed, const std::string &output,
                 std::ostream &out) {
    if (!seed) {
        throw UsageError("--seed is required for stochastic commands");
    }
    config.seed = *seed;
    config.ensemble = params_of(args);
    if (args.n == 0) {
        throw UsageError("--n is required");
    }
    config.num_sites = args.n;
    std::vector<TailRow> rows = run_tail(config);
    if (output.empty()) {
        write_tail_csv(out, rows);
    } else {
        std::ofstream f(output);
        if (!f) {
            throw std::runtime_error("cannot write '" + output + "'");
        }
        write_tail_csv(f, rows);
        out << "output=" << output << "\n";
    }
    return 0;
}

int run_graph_gen(const std::string &kind, size_t n, size_t rows, size_t cols, std::optional<uint64_t> seed,
                  const std::string &output, std::ostream &out) {
    Graph g = [&] {
        if (kind == "random") {
            if (!seed) {
                throw UsageError("--seed is required for stochastic commands");
            }
            if (n == 0) {
                throw UsageError("--n is required");
            }
            return gen_random_graph(n, *seed);
        }
        LatticeKind lattice = parse_lattice_kind(kind);
        if (lattice == LatticeKind::cycle) {
            if (n == 0) {
                throw UsageError("--n is required");
            }
            std::array<size_t, 1> dims{n};
            return gen_lattice(lattice, dims);
        }
        if (rows == 0 || cols == 0) {
            throw UsageError("--rows and --cols are required for " + kind);
        }
        std::array<size_t, 2> dims{rows, cols};
        return gen_lattice(lattice, dims);
    }();
    if (output.empty()) {
        write_edge_list(out, g);
    } else {
        write_edge_list_file(output, g);
        out << "output=" << output << "\n";
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Extractable-work toolkit for multipartite pure states", "worklab"};
    app.require_subcommand(1);

    StateArgs work_args;
    auto *work = app.add_subcommand("work", "Report W_global, W_local and a LOCC lower bound for one state");
    add_state_options(work, work_args);

    StateArgs eg_args;
    std::string eg_method = "alternating";
    size_t eg_restarts = 32;
    size_t eg_grid = kCertifiedGrid;
    auto *eg = app.add_subcommand("eg", "Estimate the geometric entanglement E_g");
    add_state_options(eg, eg_args);
    eg->add_option("--method", eg_method, "alternating, bruteforce or schmidt")
        ->check(CLI::IsMember({"alternating", "bruteforce", "schmidt"}))
        ->capture_default_str();
    eg->add_option("--restarts", eg_restarts, "Random starts for alternating")->capture_default_str();
    eg->add_option("--grid", eg_grid, "Grid points per axis for bruteforce")->capture_default_str();

    StateArgs protocol_args;
    std::string protocol_file;
    bool protocol_refine = false;
    double protocol_prune = 0;
    auto *protocol = app.add_subcommand("protocol", "Execute a protocol file on a state");
    add_state_options(protocol, protocol_args);
    protocol->add_option("--file", protocol_file, "Protocol description")->required();
    protocol->add_flag("--refine", protocol_refine, "Append a rank-one refinement round");
    protocol->add_option("--prune", protocol_prune, "Drop branches below this probability (<= 1e-12)");

    auto *experiment = app.add_subcommand("experiment", "Batch experiments");
    experiment->require_subcommand(1);

    std::string scaling_config;
    std::optional<uint64_t> scaling_seed;
    std::string scaling_output;
    std::optional<size_t> scaling_threads;
    auto *scaling = experiment->add_subcommand("scaling", "Sweep N over an ensemble and write a report");
    scaling->add_option("--config", scaling_config, "JSON experiment config")->required();
    scaling->add_option("--seed", scaling_seed, "Overrides the config seed");
    scaling->add_option("--output", scaling_output, "Overrides the config output path");
    scaling->add_option("--threads", scaling_threads, "Worker threads (0 = auto)");

    TailConfig tail_config;
    StateArgs tail_args;
    std::optional<uint64_t> tail_seed;
    std::string tail_output;
    std::string tail_mode = "haar_exponential";
    auto *tail = experiment->add_subcommand("tail", "Overlap tail frequencies against analytic bounds");
    tail->add_option("--ensemble", tail_args.kind, "Ensemble")
        ->check(CLI::IsMember({"haar", "circuit", "subset", "graph_random", "product"}))
        ->capture_default_str();
    tail->add_option("--n", tail_args.n, "Number of sites")->required();
    tail->add_option("--d", tail_args.d, "Local dimension")->capture_default_str();
    tail->add_option("--depth", tail_args.depth, "Circuit depth")->capture_default_str();
    tail->add_option("--samples", tail_config.samples, "Number of samples (>= 1000)")->capture_default_str();
    tail->add_option("--alphas", tail_config.alphas, "Comma-separated alpha values")->delimiter(',')->required();
    tail->add_option("--mode", tail_mode, "haar_exponential or design_moment")
        ->check(CLI::IsMember({"haar_exponential", "design_moment"}))
        ->capture_default_str();
    tail->add_option("--t", tail_config.t, "Design order t")->capture_default_str();
    tail->add_option("--epsilon", tail_config.epsilon, "Design error epsilon")->capture_default_str();
    tail->add_option("--threads", tail_config.threads, "Worker threads (0 = auto)");
    tail->add_option("--seed", tail_seed, "Base seed");
    tail->add_option("--output", tail_output, "CSV output path (default stdout)");

    std::string graph_kind;
    size_t graph_n = 0, graph_rows = 0, graph_cols = 0;
    std::optional<uint64_t> graph_seed;
    std::string graph_output;
    auto *graph = app.add_subcommand("graph", "Graph utilities");
    graph->require_subcommand(1);
    auto *gen = graph->add_subcommand("gen", "Generate an edge list");
    gen->add_option("--kind", graph_kind, "random, cycle, square_torus, triangular_torus or hexagonal")
        ->check(CLI::IsMember({"random", "cycle", "square_torus", "triangular_torus", "hexagonal"}))
        ->required();
    gen->add_option("--n", graph_n, "Vertices (random, cycle)");
    gen->add_option("--rows", graph_rows, "Lattice rows");
    gen->add_option("--cols", graph_cols, "Lattice columns");
    gen->add_option("--seed", graph_seed, "Seed (random)");
    gen->add_option("--output", graph_output, "Edge-list path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    auto usage_of = [&]() -> CLI::App * {
        for (CLI::App *cmd : {work, eg, protocol, scaling, tail, gen}) {
            if (cmd->parsed()) {
                return cmd;
            }
        }
        return &app;
    };

    auto old_precision = out.precision(17);
    int code = 0;
    try {
        if (work->parsed()) {
            code = run_work(work_args, out);
        } else if (eg->parsed()) {
            code = run_eg(eg_args, eg_method, eg_restarts, eg_grid, out);
        } else if (protocol->parsed()) {
            code = run_protocol(protocol_args, protocol_file, protocol_refine, protocol_prune, out);
        } else if (scaling->parsed()) {
            code = run_scaling_cmd(scaling_config, scaling_seed, scaling_output, scaling_threads, out);
        } else if (tail->parsed()) {
            tail_config.mode = parse_tail_mode(tail_mode);
            code = run_tail_cmd(tail_config, tail_args, tail_seed, tail_output, out);
        } else if (gen->parsed()) {
            code = run_graph_gen(graph_kind, graph_n, graph_rows, graph_cols, graph_seed, graph_output, out);
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n\n" << usage_of()->help();
        code = 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        code = 2;
    }
    out.precision(old_precision);
    return code;
}

}  // namespace worklab
