#include "sas/cli.hpp"

#include "sas/embedded.hpp"
#include "sas/experiments.hpp"
#include "sas/generators.hpp"
#include "sas/io.hpp"
#include "sas/lp.hpp"
#include "sas/rl.hpp"
#include "sas/routing.hpp"
#include "sas/solve.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sas {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotConverged:
    case ErrorCode::MaxRoundsExceeded:
    case ErrorCode::Cycling:
    case ErrorCode::SingularSystem:
    case ErrorCode::Infeasible:
    case ErrorCode::Unbounded: return kExitNoConvergence;
    default: return kExitInvalid;
    }
}

namespace {

std::string format_g9(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string format_fixed(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw Error(ErrorCode::BadParameter, "cannot read '" + item + "' as a number");
        }
    }
    if (grid.empty()) {
        throw Error(ErrorCode::BadParameter, "empty value list");
    }
    return grid;
}

/// Writes to `path`, or to `fallback` when the path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw Error(ErrorCode::BadParameter, "cannot write '" + path + "'");
    }
    write(file);
}

struct Loaded {
    InstanceDocument doc;
    Instance instance;
};

Loaded load(const std::string& path) {
    InstanceDocument doc = read_instance_file(path);
    Instance instance = validate(doc.mdp, doc.availability);
    return {std::move(doc), std::move(instance)};
}

struct SolveArgs {
    std::string instance;
    std::string solver = "vi";
    double eps = 1e-8;
    double tol = 1e-8;
    std::size_t max_iters = 1'000'000;
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    bool oracle = false;
    std::string out;
};

int cmd_solve(const SolveArgs& args, std::ostream& out) {
    Loaded loaded = load(args.instance);
    const Instance& inst = loaded.instance;
    ValueFunction values;
    DecisionListPolicy policy;
    json counts = json::object();

    const auto start = std::chrono::steady_clock::now();
    if (args.solver == "vi") {
        ViOptions options;
        options.eps = args.eps;
        options.max_iters = args.max_iters;
        if (!inst.is_exact()) {
            options.n_samples = args.samples;
        }
        ViResult r = value_iteration(inst, options);
        values = std::move(r.values);
        policy = std::move(r.policy);
        counts["iterations"] = r.iterations;
    } else if (args.solver == "pi") {
        PiResult r = policy_iteration(inst);
        values = std::move(r.values);
        policy = std::move(r.policy);
        counts["iterations"] = r.iterations;
    } else if (args.solver == "lp") {
        LpOptions options;
        options.tol = args.tol;
        LpResult r = solve_lp(inst, options);
        values = std::move(r.values);
        policy = std::move(r.policy);
        counts["constraints"] = r.constraint_count;
        counts["rounds"] = r.rounds;
    } else if (args.solver == "embedded") {
        const EmbeddedMdp emb = build_embedded(inst);
        const EmbeddedSolution r = solve_embedded_vi(emb, args.eps);
        values = compress_value(emb, r.values);
        policy = greedy_dl(q_values(inst.mdp(), values));
        counts["iterations"] = r.iterations;
        counts["embedded_states"] = emb.size();
    } else {
        throw Error(ErrorCode::BadParameter, "unknown solver '" + args.solver + "'");
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    std::optional<double> oracle_gap;
    if (args.oracle) {
        const EmbeddedMdp emb = build_embedded(inst);
        const ValueFunction reference = compress_value(emb, solve_embedded_vi(emb, 1e-11).values);
        double gap = 0.0;
        for (StateIndex s = 0; s < inst.n_states(); ++s) {
            gap = std::max(gap, std::abs(reference[s] - values[s]));
        }
        oracle_gap = gap;
    }

    out << "solver: " << args.solver << "\n";
    for (StateIndex s = 0; s < inst.n_states(); ++s) {
        const std::string name = state_name(loaded.doc, s);
        out << "V(" << name << ") = " << format_fixed(values[s]) << "  DL(" << name
            << ") = " << format_order(loaded.doc, s, policy.order(s)) << "\n";
    }
    for (const auto& [key, value] : counts.items()) {
        out << key << ": " << value.dump() << "\n";
    }
    out << "wall_time_ms: " << format_fixed(wall_ms) << "\n";
    if (oracle_gap) {
        out << "oracle_max_abs_diff: " << format_g9(*oracle_gap) << "\n";
    }

    if (!args.out.empty()) {
        json report = {{"solver", args.solver}, {"values", values}, {"wall_time_ms", wall_ms}};
        json lists = json::array();
        for (StateIndex s = 0; s < inst.n_states(); ++s) {
            const auto order = policy.order(s);
            lists.push_back(std::vector<ActionIndex>(order.begin(), order.end()));
        }
        report["policy"] = std::move(lists);
        report.update(counts);
        if (oracle_gap) {
            report["oracle_max_abs_diff"] = *oracle_gap;
        }
        emit(args.out, out, [&](std::ostream& os) { os << report.dump(2) << "\n"; });
    }
    return kExitOk;
}

struct LearnArgs {
    std::string instance;
    std::uint64_t steps = 200'000;
    std::uint64_t horizon = 100;
    std::uint64_t seed = 0;
    std::optional<std::size_t> start;
    std::size_t window = 100;
    std::string out;
    std::string trajectory;
};

int cmd_learn(const LearnArgs& args, std::ostream& out) {
    Loaded loaded = load(args.instance);
    const Instance& inst = loaded.instance;
    LearningConfig config;
    config.steps = args.steps;
    config.horizon = args.horizon;
    config.seed = args.seed;
    config.start_state = args.start;
    std::ofstream log;
    if (!args.trajectory.empty()) {
        log.open(args.trajectory);
        if (!log) {
            throw Error(ErrorCode::BadParameter, "cannot write '" + args.trajectory + "'");
        }
        config.trajectory_log = &log;
    }
    SasEnvironment env(inst, args.seed);
    const LearningResult result = sas_q_learning(env, config);
    const DecisionListPolicy learned = greedy_dl(result.q);

    out << "steps: " << result.steps << "\n";
    out << "episodes: " << result.episode_returns.size() << "\n";
    for (StateIndex s = 0; s < inst.n_states(); ++s) {
        const std::string name = state_name(loaded.doc, s);
        out << "Q(" << name << ") =";
        for (ActionIndex k = 0; k < inst.n_actions(); ++k) {
            out << " " << action_name(loaded.doc, s, k) << ":" << format_fixed(result.q(s, k));
        }
        out << "  DL(" << name << ") = " << format_order(loaded.doc, s, learned.order(s)) << "\n";
    }
    if (inst.is_exact()) {
        const ViResult vi = value_iteration(inst);
        out << "matches_vi_policy: " << (vi.policy == learned ? "yes" : "no") << "\n";
    }

    emit(args.out, out, [&](std::ostream& os) {
        os << "episode,mean_return,epsilon\n";
        double window_sum = 0.0;
        const auto& returns = result.episode_returns;
        for (std::size_t e = 0; e < returns.size(); ++e) {
            window_sum += returns[e];
            if (e >= args.window) {
                window_sum -= returns[e - args.window];
            }
            const double count = static_cast<double>(std::min(e + 1, args.window));
            os << e << "," << format_g9(window_sum / count) << "," << format_g9(result.episode_epsilon[e]) << "\n";
        }
    });
    return kExitOk;
}

int cmd_curve(double gamma, const std::string& grid_text, const std::string& path, std::ostream& out) {
    const std::vector<double> grid = grid_text.empty() ? default_p_grid() : parse_grid(grid_text);
    for (double p : grid) {
        if (!(p > 0.0 && p <= 1.0)) {
            throw Error(ErrorCode::BadParameter, "p must lie in (0, 1]");
        }
    }
    const auto points = two_state_curve(grid, gamma);
    emit(path, out, [&](std::ostream& os) {
        os << "p,V_sas,V_naive,fraction_lost\n";
        for (const auto& pt : points) {
            os << format_g9(pt.p) << "," << format_g9(pt.v_sas) << "," << format_g9(pt.v_naive) << ","
               << format_g9(pt.fraction_lost) << "\n";
        }
    });
    return kExitOk;
}

int cmd_routing(const RoutingSpec& spec, const std::string& grid_text, const std::string& path,
                std::ostream& out) {
    const auto rows = routing_experiment(spec, parse_grid(grid_text));
    emit(path, out, [&](std::ostream& os) {
        os << "p,sas_cost,oblivious_cost\n";
        for (const auto& row : rows) {
            os << format_g9(row.bridge_p) << "," << format_g9(row.sas_cost) << ","
               << format_g9(row.oblivious_cost) << "\n";
        }
    });
    return kExitOk;
}

struct GenerateArgs {
    std::string kind = "two-state";
    std::string model = "pda";
    double p = 0.2;
    double gamma = 0.9;
    std::size_t states = 3;
    std::size_t actions = 3;
    std::uint64_t seed = 0;
    std::uint64_t delta = 0;
    std::string out;
};

AvailabilityKind parse_kind(const std::string& model) {
    if (model == "pda") {
        return AvailabilityKind::Pda;
    }
    if (model == "explicit") {
        return AvailabilityKind::Explicit;
    }
    if (model == "sampler") {
        return AvailabilityKind::Sampler;
    }
    throw Error(ErrorCode::BadParameter, "unknown availability model '" + model + "'");
}

int cmd_generate(const GenerateArgs& args, std::ostream& out) {
    InstanceDocument doc;
    if (args.kind == "two-state") {
        doc = two_state_document(args.p, args.gamma, parse_kind(args.model), args.seed);
        (void)validate(doc.mdp, doc.availability);
    } else if (args.kind == "random") {
        RandomInstanceSpec spec;
        spec.n_states = args.states;
        spec.n_actions = args.actions;
        spec.kind = parse_kind(args.model);
        spec.discount = args.gamma;
        spec.seed = args.seed;
        spec.delta = args.delta;
        doc = to_document(random_instance(spec));
    } else {
        throw Error(ErrorCode::BadParameter, "unknown instance kind '" + args.kind + "'");
    }
    emit(args.out, out, [&](std::ostream& os) { os << serialize_instance(doc); });
    return kExitOk;
}

void write_error(std::ostream& err, std::string_view code, const std::string& message,
                 const std::vector<ValidationIssue>& issues = {}) {
    json block = {{"code", code}, {"message", message}};
    if (!issues.empty()) {
        json list = json::array();
        for (const auto& issue : issues) {
            list.push_back({{"code", to_string(issue.code)}, {"message", issue.message}});
        }
        block["issues"] = std::move(list);
    }
    err << json{{"error", std::move(block)}}.dump(2) << "\n";
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sleeping-action (SAS) MDP solvers and experiments", "sas"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
    solve_cmd->add_option("--instance", solve.instance, "Instance JSON file")->required();
    solve_cmd->add_option("--solver", solve.solver, "vi, pi, lp or embedded");
    solve_cmd->add_option("--eps", solve.eps, "Value-iteration accuracy");
    solve_cmd->add_option("--tol", solve.tol, "LP violation tolerance");
    solve_cmd->add_option("--max-iters", solve.max_iters, "Value-iteration sweep limit");
    solve_cmd->add_option("--seed", solve.seed, "Unused by the exact solvers");
    solve_cmd->add_option("--samples", solve.samples, "Draws per state for sampler instances");
    solve_cmd->add_flag("--oracle", solve.oracle, "Cross-check against the embedded MDP");
    solve_cmd->add_option("--out", solve.out, "Write a JSON report");

    LearnArgs learn;
    auto* learn_cmd = app.add_subcommand("learn", "Run SAS-Q-learning on an instance file");
    learn_cmd->add_option("--instance", learn.instance, "Instance JSON file")->required();
    learn_cmd->add_option("--steps", learn.steps, "Environment steps");
    learn_cmd->add_option("--horizon", learn.horizon, "Steps per episode");
    learn_cmd->add_option("--seed", learn.seed, "Master seed");
    learn_cmd->add_option("--start", learn.start, "Fixed start state");
    learn_cmd->add_option("--window", learn.window, "Moving-average window in episodes")->check(CLI::PositiveNumber);
    learn_cmd->add_option("--out", learn.out, "Return-trace CSV");
    learn_cmd->add_option("--trajectory", learn.trajectory, "JSON-lines transition log");

    double curve_gamma = 0.9;
    std::string curve_grid;
    std::string curve_out;
    auto* curve_cmd = app.add_subcommand("curve", "Two-state example: value lost by the naive policy");
    curve_cmd->add_option("--gamma", curve_gamma, "Discount factor");
    curve_cmd->add_option("--p-grid", curve_grid, "Comma-separated availability probabilities");
    curve_cmd->add_option("--out", curve_out, "CSV path (stdout when omitted)");

    RoutingSpec routing;
    std::string routing_grid = "0.1,0.2,0.4,0.8,1.0";
    std::string routing_out;
    bool no_bridge = false;
    auto* routing_cmd = app.add_subcommand("routing", "Bridge routing: SAS-optimal vs oblivious cost");
    routing_cmd->add_option("--nodes", routing.nodes, "Number of graph nodes");
    routing_cmd->add_option("--bridge-p", routing_grid, "Comma-separated bridge availabilities");
    routing_cmd->add_option("--edge-avail", routing.edge_availability, "Availability of ordinary roads");
    routing_cmd->add_option("--noop-cost", routing.noop_cost, "Cost of waiting one step");
    routing_cmd->add_option("--seed", routing.seed, "Edge-cost seed");
    routing_cmd->add_flag("--no-bridge", no_bridge, "Remove the bridge from the graph");
    routing_cmd->add_option("--out", routing_out, "CSV path (stdout when omitted)");

    GenerateArgs gen;
    auto* gen_cmd = app.add_subcommand("generate", "Write an instance file");
    gen_cmd->add_option("--kind", gen.kind, "two-state or random");
    gen_cmd->add_option("--model", gen.model, "pda, explicit or sampler");
    gen_cmd->add_option("--p", gen.p, "Two-state availability of Up");
    gen_cmd->add_option("--gamma", gen.gamma, "Discount factor");
    gen_cmd->add_option("--states", gen.states, "Random instance states");
    gen_cmd->add_option("--actions", gen.actions, "Random instance actions");
    gen_cmd->add_option("--seed", gen.seed, "Generator seed");
    gen_cmd->add_option("--delta", gen.delta, "Round numbers to multiples of 1/delta");
    gen_cmd->add_option("--out", gen.out, "Output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        write_error(err, "UsageError", e.what());
        return kExitInvalid;
    }

    try {
        if (*solve_cmd) {
            return cmd_solve(solve, out);
        }
        if (*learn_cmd) {
            return cmd_learn(learn, out);
        }
        if (*curve_cmd) {
            return cmd_curve(curve_gamma, curve_grid, curve_out, out);
        }
        if (*routing_cmd) {
            routing.include_bridge = !no_bridge;
            return cmd_routing(routing, routing_grid, routing_out, out);
        }
        return cmd_generate(gen, out);
    } catch (const ValidationError& e) {
        write_error(err, to_string(e.code()), e.what(), e.issues());
        return kExitInvalid;
    } catch (const Error& e) {
        write_error(err, to_string(e.code()), e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        write_error(err, "InternalError", e.what());
        return kExitFailure;
    }
}

} // namespace sas
