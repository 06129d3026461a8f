// ccroll: command-line front end. Every subcommand is deterministic given --seed.

#include "ccroll/generate.hpp"
#include "ccroll/graph_io.hpp"
#include "ccroll/reduction.hpp"
#include "ccroll/report_json.hpp"
#include "ccroll/roll.hpp"
#include "ccroll/rounding.hpp"
#include "ccroll/solvers.hpp"
#include "ccroll/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace ccroll;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
    std::size_t workers = 0;
};

SignedGraph load(const std::string& path)
{
    if (path == "-") return read_graph(std::cin);
    return read_graph_file(path);
}

// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
}

std::string sidecar_path(const std::string& explicit_path, const std::string& out)
{
    if (!explicit_path.empty()) return explicit_path;
    if (out.empty() || out == "-") return {};
    return out + ".json";
}

std::string labels_line(const Clustering& c)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
    return os.str();
}

// gen --------------------------------------------------------------------

struct GenArgs {
    std::size_t n = 6;
    std::string model = "uniform";
    std::size_t k = 2;
    double flip = 0.0;
    double density = 1.0;
    std::int64_t denominator = 4;
    double plus = 0.5;
};

int run_gen(const Globals& g, const GenArgs& a)
{
    GenSpec spec{a.n, {}, g.seed};
    if (a.model == "planted")
        spec.model = PlantedPartition{a.k, a.flip};
    else if (a.model == "uniform")
        spec.model = UniformRational{a.density, a.denominator};
    else if (a.model == "complete")
        spec.model = CompleteSigned{a.plus};
    else
        throw std::invalid_argument("unknown model '" + a.model + "'");
    emit(g.out, graph_to_string(generate(spec)));
    return 0;
}

// roll -------------------------------------------------------------------

struct RollArgs {
    std::string input;
    std::optional<std::size_t> rows, t;
    std::string sidecar;
};

int run_roll(const Globals& g, const RollArgs& a)
{
    const SignedGraph base = load(a.input);
    const std::size_t rows = a.rows ? *a.rows : valid_roll_size(base.node_count(), *a.t);
    const RolledGraph r = build_roll(base, rows);
    emit(g.out, graph_to_string(r.graph));
    if (const auto path = sidecar_path(a.sidecar, g.out); !path.empty()) emit(path, roll_sidecar(r).dump(2) + "\n");
    return 0;
}

// round ------------------------------------------------------------------

struct RoundArgs {
    std::string input;
    std::string alpha = "1", beta = "1";
    bool normalize = false;
    std::string sidecar;
};

int run_round(const Globals& g, const RoundArgs& a)
{
    SignedGraph graph = load(a.input);
    Rational scale = 1;
    if (a.normalize) {
        auto norm = normalize_weights(graph);
        graph = std::move(norm.graph);
        scale = norm.scale;
    }
    const RoundingParams params{parse_rational(a.alpha), parse_rational(a.beta), derive_seed(g.seed, "rounding")};
    const RoundingOutcome out = round_graph(graph, params);
    emit(g.out, graph_to_string(out.after));

    if (const auto path = sidecar_path(a.sidecar, g.out); !path.empty()) {
        struct Tally {
            std::size_t count = 0, hits = 0;
            Rational sum = 0;
        };
        std::map<Rational, Tally> classes;
        for (const auto& [pair, w] : out.before.weights()) {
            auto& t = classes[w];
            const Rational after = out.after.weight(pair.u, pair.v);
            ++t.count;
            t.hits += after != 0 ? 1 : 0;
            t.sum += after;
        }
        json list = json::array();
        for (const auto& [gamma, t] : classes)
            list.push_back({{"gamma", gamma},
                            {"count", t.count},
                            {"hits", t.hits},
                            {"empirical_mean", Rational(t.sum / t.count)},
                            {"empirical_mean_approx", to_double(t.sum / t.count)}});
        const json side{{"alpha", params.alpha}, {"beta", params.beta}, {"rounding_seed", params.seed},
                        {"scale", scale},        {"classes", list}};
        emit(path, side.dump(2) + "\n");
    }
    return 0;
}

// solve ------------------------------------------------------------------

struct SolveArgs {
    std::string input;
    std::string solver = "exact";
    std::string objective = "max";
    std::size_t budget = 10000;
};

int run_solve(const Globals& g, const SolveArgs& a)
{
    const SignedGraph graph = load(a.input);
    const SolverSpec spec{parse_solver_kind(a.solver), derive_seed(g.seed, "solver"), a.budget};
    const SolveResult r = solve(graph, parse_objective(a.objective), spec);
    if (g.format == "json")
        emit(g.out, json{{"labels", r.clustering.labels()},
                         {"value", r.value},
                         {"objective", std::string(to_string(r.objective))},
                         {"solver", r.solver}}
                            .dump(2) +
                        "\n");
    else
        emit(g.out, labels_line(r.clustering) + "\n" + format_rational(r.value) + "\n");
    return 0;
}

// reduce -----------------------------------------------------------------

struct ReduceArgs {
    std::string input;
    std::string objective = "max";
    std::size_t t = 0;
    std::string alpha = "1", beta = "1", epsilon = "1/20", lambda = "1";
    std::string solver = "exact";
    std::size_t budget = 10000;
    std::size_t trials = 1;
    bool normalize = false;
};

int run_reduce(const Globals& g, const ReduceArgs& a)
{
    SignedGraph graph = load(a.input);
    if (a.normalize) graph = normalize_weights(graph).graph;

    ReductionConfig cfg;
    cfg.objective = parse_objective(a.objective);
    cfg.t = a.t;
    cfg.alpha = parse_rational(a.alpha);
    cfg.beta = parse_rational(a.beta);
    cfg.epsilon = parse_rational(a.epsilon);
    cfg.lambda_ref = parse_rational(a.lambda);
    cfg.solver = SolverSpec{parse_solver_kind(a.solver), 0, a.budget};
    cfg.seed = g.seed;

    const TrialsReport rep = run_trials(graph, cfg, a.trials, g.workers);
    if (g.format == "csv") {
        std::ostringstream os;
        write_histogram_csv(os, rep.aggregate);
        emit(g.out, os.str());
    } else {
        emit(g.out, json(rep).dump(2) + "\n");
    }

    const auto& agg = rep.aggregate;
    std::cerr << "trials " << agg.trials << "  N " << rep.rows << "  OPT " << format_rational(rep.opt)
              << "  bad-event freq " << agg.bad_event_freq << "  ratio min/mean/max " << agg.ratio_min << '/'
              << agg.ratio_mean << '/' << agg.ratio_max << "  accounting "
              << (agg.sum_identity_all && agg.support_identity_all ? "ok" : "FAILED") << '\n';
    if (rep.opt_below_one) std::cerr << "note: OPT < 1\n";
    return agg.sum_identity_all && agg.support_identity_all ? 0 : 1;
}

// verify -----------------------------------------------------------------

struct VerifyArgs {
    std::vector<std::size_t> sizes{3, 4, 5};
    std::vector<std::size_t> ts{0, 1};
};

int run_verify(const Globals& g, const VerifyArgs& a)
{
    const VerifyReport rep = verify_all(g.seed, a.sizes, a.ts, g.workers);
    if (g.format == "json") {
        emit(g.out, json(rep).dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "check,instances_run,failures,worst_case_detail\n";
        for (const auto& [name, r] : rep.checks)
            os << name << ',' << r.instances_run << ',' << r.failures << ",\"" << r.worst_case_detail << "\"\n";
        emit(g.out, os.str());
    }
    for (const auto& [name, r] : rep.checks)
        std::cerr << (r.failures == 0 ? "ok   " : "FAIL ") << name << "  " << r.instances_run << " run, "
                  << r.failures << " failed" << (r.failures ? "  first: " + r.worst_case_detail : "") << '\n';
    return rep.ok() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Correlation clustering roll / rounding / reduction toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value file; command-line flags override it");

    Globals globals;
    app.add_option("--seed", globals.seed, "root seed for every random sub-stream");
    app.add_option("--out", globals.out, "output file (default stdout)");
    app.add_option("--format", globals.format, "json or csv (solve: csv prints labels and value)")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--workers", globals.workers, "worker threads, 0 = hardware concurrency");

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate a random signed graph");
    gen_cmd->add_option("--n", gen.n, "node count");
    gen_cmd->add_option("--model", gen.model, "planted | uniform | complete")
        ->check(CLI::IsMember({"planted", "uniform", "complete"}));
    gen_cmd->add_option("--k", gen.k, "planted clusters");
    gen_cmd->add_option("--flip", gen.flip, "planted sign-flip probability");
    gen_cmd->add_option("--density", gen.density, "uniform edge probability");
    gen_cmd->add_option("--denominator", gen.denominator, "uniform denominator bound");
    gen_cmd->add_option("--plus", gen.plus, "complete +1 probability");

    RollArgs roll;
    auto* roll_cmd = app.add_subcommand("roll", "build the N-fold roll of a graph");
    roll_cmd->add_option("input", roll.input, "graph file, - for stdin")->required();
    auto* rows_opt = roll_cmd->add_option("--rows", roll.rows, "roll size N");
    auto* t_opt = roll_cmd->add_option("--t", roll.t, "use N = n(1 + t(n-1))");
    rows_opt->excludes(t_opt);
    roll_cmd->add_option("--sidecar", roll.sidecar, "active-duplicate JSON (default <out>.json)");
    roll_cmd->callback([&] {
        if (!roll.rows && !roll.t) throw CLI::ValidationError("roll", "one of --rows or --t is required");
    });

    RoundArgs round;
    auto* round_cmd = app.add_subcommand("round", "randomized two-point rounding");
    round_cmd->add_option("input", round.input, "graph file, - for stdin")->required();
    round_cmd->add_option("--alpha", round.alpha, "negative magnitude (rational >= 1)");
    round_cmd->add_option("--beta", round.beta, "positive magnitude (rational >= 1)");
    round_cmd->add_flag("--normalize", round.normalize, "divide weights by max |w| first");
    round_cmd->add_option("--sidecar", round.sidecar, "per-class JSON (default <out>.json)");

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "cluster a graph");
    solve_cmd->add_option("input", solve_args.input, "graph file, - for stdin")->required();
    solve_cmd->add_option("--solver", solve_args.solver, "exact | trivial | pivot | local")
        ->check(CLI::IsMember({"exact", "trivial", "pivot", "local"}));
    solve_cmd->add_option("--objective", solve_args.objective, "max | min")->check(CLI::IsMember({"max", "min"}));
    solve_cmd->add_option("--budget", solve_args.budget, "local search move budget");

    ReduceArgs reduce;
    auto* reduce_cmd = app.add_subcommand("reduce", "roll, round, solve and pick the best candidate");
    reduce_cmd->add_option("input", reduce.input, "graph file, - for stdin")->required();
    reduce_cmd->add_option("--objective", reduce.objective, "max | min")->check(CLI::IsMember({"max", "min"}));
    reduce_cmd->add_option("--t", reduce.t, "roll size parameter");
    reduce_cmd->add_option("--alpha", reduce.alpha, "negative magnitude");
    reduce_cmd->add_option("--beta", reduce.beta, "positive magnitude");
    reduce_cmd->add_option("--epsilon", reduce.epsilon, "slack in the (lambda + epsilon) factor");
    reduce_cmd->add_option("--lambda", reduce.lambda, "reference approximation factor (>= 1)");
    reduce_cmd->add_option("--solver", reduce.solver, "solver for the rounded roll")
        ->check(CLI::IsMember({"exact", "trivial", "pivot", "local"}));
    reduce_cmd->add_option("--budget", reduce.budget, "local search move budget");
    reduce_cmd->add_option("--trials", reduce.trials, "independent repetitions");
    reduce_cmd->add_flag("--normalize", reduce.normalize, "divide weights by max |w| first");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "run the structural and identity checks");
    verify_cmd->add_option("--sizes", verify.sizes, "base node counts")->delimiter(',');
    verify_cmd->add_option("--ts", verify.ts, "roll parameters t")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen_cmd) return run_gen(globals, gen);
        if (*roll_cmd) return run_roll(globals, roll);
        if (*round_cmd) return run_round(globals, round);
        if (*solve_cmd) return run_solve(globals, solve_args);
        if (*reduce_cmd) return run_reduce(globals, reduce);
        if (*verify_cmd) return run_verify(globals, verify);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
