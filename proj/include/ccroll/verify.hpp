#pragma once

#include "ccroll/core.hpp"
#include "ccroll/generate.hpp"
#include "ccroll/parallel.hpp"
#include "ccroll/reduction.hpp"
#include "ccroll/roll.hpp"
#include "ccroll/rounding.hpp"
#include "ccroll/solvers.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ccroll {

/// nullopt on success, otherwise a description of the first violation.
using CheckOutcome = std::optional<std::string>;

struct CheckResult {
    std::size_t instances_run = 0;
    std::size_t failures = 0;
    std::string worst_case_detail;

    bool operator==(const CheckResult&) const = default;
};

struct VerifyReport {
    std::map<std::string, CheckResult> checks;

    bool ok() const
    {
        for (const auto& [name, r] : checks)
            if (r.failures != 0) return false;
        return true;
    }

    void record(const std::string& name, const CheckOutcome& outcome)
    {
        auto& r = checks[name];
        ++r.instances_run;
        if (outcome) {
            if (r.failures == 0) r.worst_case_detail = *outcome;
            ++r.failures;
        }
    }

    void merge(const VerifyReport& other)
    {
        for (const auto& [name, r] : other.checks) {
            auto& mine = checks[name];
            if (mine.failures == 0 && r.failures != 0) mine.worst_case_detail = r.worst_case_detail;
            mine.instances_run += r.instances_run;
            mine.failures += r.failures;
        }
    }

    bool operator==(const VerifyReport&) const = default;
};

inline void to_json(nlohmann::json& j, const CheckResult& r)
{
    j = nlohmann::json{{"instances_run", r.instances_run}, {"failures", r.failures}, {"worst_case_detail", r.worst_case_detail}};
}
inline void from_json(const nlohmann::json& j, CheckResult& r)
{
    j.at("instances_run").get_to(r.instances_run);
    j.at("failures").get_to(r.failures);
    j.at("worst_case_detail").get_to(r.worst_case_detail);
}
inline void to_json(nlohmann::json& j, const VerifyReport& r) { j = nlohmann::json{{"checks", r.checks}, {"ok", r.ok()}}; }
inline void from_json(const nlohmann::json& j, VerifyReport& r) { j.at("checks").get_to(r.checks); }

namespace detail {

inline std::string describe(DuplicateId d)
{
    return "(row " + std::to_string(d.row) + ", slope " + std::to_string(d.slope) + ")";
}

inline std::string describe(NodePair p) { return "{" + std::to_string(p.u) + "," + std::to_string(p.v) + "}"; }

} // namespace detail

inline CheckOutcome check_duplicate_count(std::size_t n, std::size_t rows)
{
    const std::size_t expected = rows * ((rows - 1) / (n - 1) + 1);
    const RolledGraph r = build_roll(SignedGraph(n), rows);
    std::set<DuplicateId> seen;
    for (const auto& [pair, d] : r.bone_index) seen.insert(d);
    if (seen.size() != expected || untrimmed_duplicate_count(n, rows) != expected)
        return "n=" + std::to_string(n) + " N=" + std::to_string(rows) + ": " + std::to_string(seen.size()) +
               " duplicates found, expected " + std::to_string(expected);
    if (expected * n <= rows * rows) return "duplicate count does not exceed N^2/n";
    if (r.active.size() != rows * rows / n) return "active count differs from N^2/n";
    return std::nullopt;
}

/// Every grid-bone maps to exactly one duplicate, which contains both endpoints,
/// and the bone count equals duplicates * C(n,2).
inline CheckOutcome check_bone_partition(const RolledGraph& r)
{
    const std::size_t n = r.base_nodes(), rows = r.rows, total = n * rows;
    std::size_t bones = 0;
    for (std::size_t a = 0; a < total; ++a) {
        for (std::size_t b = a + 1; b < total; ++b) {
            const GridNode ga = grid_node(a, n), gb = grid_node(b, n);
            const bool bone = is_grid_bone(ga, gb, rows, n);
            auto it = r.bone_index.find(NodePair(a, b));
            if (bone != (it != r.bone_index.end()))
                return "pair " + detail::describe(NodePair(a, b)) + (bone ? " is a bone but unindexed" : " indexed but not a bone");
            if (!bone) continue;
            ++bones;
            const DuplicateId d = duplicate_of(ga, gb, rows, n);
            if (d != it->second) return "bone " + detail::describe(NodePair(a, b)) + " indexed to wrong duplicate";
            const auto nodes = duplicate_nodes(d, rows, n);
            if (nodes[ga.col] != ga || nodes[gb.col] != gb)
                return "duplicate " + detail::describe(d) + " misses an endpoint of its bone";
        }
    }
    const std::size_t expected = untrimmed_duplicate_count(n, rows) * (n * (n - 1) / 2);
    if (bones != expected)
        return std::to_string(bones) + " bones, expected " + std::to_string(expected);
    return std::nullopt;
}

/// Active duplicates carry pairwise disjoint edge sets that together cover every
/// nonzero pair of the rolled graph.
inline CheckOutcome check_edge_disjointness(const RolledGraph& r)
{
    const std::size_t n = r.base_nodes();
    std::set<NodePair> covered;
    for (DuplicateId d : r.active)
        for (std::size_t j1 = 0; j1 < n; ++j1)
            for (std::size_t j2 = j1 + 1; j2 < n; ++j2) {
                if (r.base.weight(j1, j2) == 0) continue;
                const NodePair e = r.grid_pair(d, j1, j2);
                if (!covered.insert(e).second)
                    return "edge " + detail::describe(e) + " shared by two active duplicates (second: " +
                           detail::describe(d) + ")";
            }
    for (const auto& [pair, w] : r.graph.weights())
        if (!covered.count(pair)) return "rolled edge " + detail::describe(pair) + " outside every active duplicate";
    if (covered.size() != r.graph.edge_count()) return "active duplicates cover pairs absent from the roll";
    return std::nullopt;
}

/// Each active duplicate's induced weighted subgraph equals the base graph.
inline CheckOutcome check_isomorphism(const RolledGraph& r)
{
    const std::size_t n = r.base_nodes();
    for (DuplicateId d : r.active)
        for (std::size_t j1 = 0; j1 < n; ++j1)
            for (std::size_t j2 = j1 + 1; j2 < n; ++j2) {
                const NodePair e = r.grid_pair(d, j1, j2);
                if (r.graph.weight(e.u, e.v) != r.base.weight(j1, j2))
                    return "duplicate " + detail::describe(d) + " pair (" + std::to_string(j1) + "," +
                           std::to_string(j2) + ") weight mismatch";
            }
    return std::nullopt;
}

/// w(C) on the roll equals the sum of w(C_i) over induced candidates.
inline CheckOutcome check_candidate_sum(const RolledGraph& r, const Clustering& c, ObjectiveKind obj)
{
    Rational sum = 0;
    for (DuplicateId d : r.active) sum += clustering_value(r.base, induced_clustering(r, c, d), obj);
    const Rational whole = clustering_value(r.graph, c, obj);
    if (sum != whole)
        return "w(C)=" + format_rational(whole) + " but candidates sum to " + format_rational(sum) + " (" +
               std::string(to_string(obj)) + ")";
    return std::nullopt;
}

/// Post-rounding contributing edges are a subset of the pre-rounding ones and
/// the post-rounding value is a sum over the pre-rounding set.
inline CheckOutcome check_rounded_support(const RoundingOutcome& out, const Clustering& c, ObjectiveKind obj)
{
    const auto before = contributing_edges(out.before, c, obj);
    const std::set<NodePair> before_set(before.begin(), before.end());
    for (const NodePair& e : contributing_edges(out.after, c, obj))
        if (!before_set.count(e)) return "edge " + detail::describe(e) + " contributes only after rounding";
    Rational via_pre = 0;
    for (const NodePair& e : before) via_pre += abs(out.after.weight(e.u, e.v));
    const Rational direct = clustering_value(out.after, c, obj);
    if (direct != via_pre)
        return "w'(C)=" + format_rational(direct) + " but pre-rounding set gives " + format_rational(via_pre);
    return std::nullopt;
}

struct SampleSummary {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Empirical mean and standard error of the rounded value of gamma.
inline SampleSummary sample_rounding(const Rational& gamma, const Rational& alpha, const Rational& beta,
                                     std::size_t samples, std::uint64_t seed)
{
    const WeightRounder rounder(gamma, alpha, beta);
    const double hit = to_double(rounder.hit_value());
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) hits += rounder.hit(derive_seed(seed, {s})) ? 1 : 0;
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    const double var = hit * hit * p * (1.0 - p);
    return {hit * p, std::sqrt(var / static_cast<double>(samples))};
}

inline CheckOutcome check_unbiasedness(const Rational& gamma, const Rational& alpha, const Rational& beta,
                                       std::size_t samples, std::uint64_t seed)
{
    const SampleSummary s = sample_rounding(gamma, alpha, beta, samples, seed);
    const double gap = std::abs(s.mean - to_double(gamma));
    if (gap > 4.0 * s.standard_error + 1e-12) {
        std::ostringstream os;
        os << "gamma=" << format_rational(gamma) << ": mean " << s.mean << " is " << gap / s.standard_error
           << " standard errors away";
        return os.str();
    }
    return std::nullopt;
}

inline CheckOutcome check_exact_oracle(const SignedGraph& g, ObjectiveKind obj)
{
    const Rational fast = solve_exact(g, obj).value;
    const Rational plain = brute_force_optimum(g, obj).value;
    if (fast != plain) return "solve_exact " + format_rational(fast) + " vs enumeration " + format_rational(plain);
    return std::nullopt;
}

inline CheckOutcome check_trivial_bound(const SignedGraph& g)
{
    const Rational trivial = solve_trivial_max(g).value;
    const Rational total = g.total_abs_weight();
    const Rational opt = solve_exact(g, ObjectiveKind::MaxAgree).value;
    if (2 * trivial < total) return "trivial value below half the total weight";
    if (total < opt) return "optimum above total weight";
    if (2 * trivial < opt) return "trivial value below OPT/2";
    return std::nullopt;
}

inline CheckOutcome check_solver_value(const SignedGraph& g, const SolveResult& r)
{
    if (clustering_value(g, r.clustering, r.objective) != r.value) return "reported value disagrees with its clustering";
    return std::nullopt;
}

inline CheckOutcome check_duplication_roundtrip(const RolledGraph& r, const Clustering& u)
{
    const Clustering u_n = duplication_clustering(u, r.rows);
    for (DuplicateId d : r.active)
        if (induced_clustering(r, u_n, d) != u) return "U^N does not induce U on " + detail::describe(d);
    return std::nullopt;
}

inline CheckOutcome check_objective_complement(const SignedGraph& g, const Clustering& c)
{
    const Rational sum = clustering_value(g, c, ObjectiveKind::MaxAgree) + clustering_value(g, c, ObjectiveKind::MinDisagree);
    if (sum != g.total_abs_weight()) return "agreement + disagreement differs from total weight";
    return std::nullopt;
}

inline Clustering random_clustering(std::size_t nodes, Rng& rng)
{
    const std::uint64_t k = 1 + rng.below(std::max<std::size_t>(1, std::min<std::size_t>(nodes, 5)));
    std::vector<std::size_t> labels(nodes);
    for (auto& l : labels) l = rng.below(k);
    return Clustering(labels);
}

/// Runs every structural and identity check over generated instances for each
/// n in `sizes` and t in `ts`. Failures are data: inspect report.ok().
inline VerifyReport verify_all(std::uint64_t seed, const std::vector<std::size_t>& sizes,
                               const std::vector<std::size_t>& ts, std::size_t workers = 0)
{
    struct Task {
        std::size_t n, t;
    };
    std::vector<Task> tasks;
    for (std::size_t n : sizes)
        for (std::size_t t : ts) tasks.push_back({n, t});

    std::vector<VerifyReport> parts(tasks.size() + 1);
    parallel_for(
        tasks.size(),
        [&](std::size_t k) {
            const auto [n, t] = tasks[k];
            VerifyReport& rep = parts[k];
            const std::uint64_t task_seed = derive_seed(seed, {n, t});
            Rng rng(derive_seed(task_seed, "verify"));
            const std::size_t rows = valid_roll_size(n, t);

            rep.record("duplicate_count", check_duplicate_count(n, rows));

            const std::vector<GenModel> models{UniformRational{0.8, 5}, PlantedPartition{std::min<std::size_t>(2, n), 0.2},
                                               CompleteSigned{0.5}};
            for (std::size_t m = 0; m < models.size(); ++m) {
                const SignedGraph g = normalize_weights(generate({n, models[m], derive_seed(task_seed, {m})})).graph;
                const RolledGraph r = build_roll(g, rows);

                if (rows * n <= 200) rep.record("bone_partition", check_bone_partition(r));
                rep.record("edge_disjointness", check_edge_disjointness(r));
                rep.record("isomorphism", check_isomorphism(r));

                const RoundingOutcome out = round_graph(r.graph, {1, 1, derive_seed(task_seed, {m, 1})});
                const RoundingOutcome wide = round_graph(r.graph, {2, 3, derive_seed(task_seed, {m, 2})});
                for (int trial = 0; trial < 3; ++trial) {
                    const Clustering c = random_clustering(r.graph.node_count(), rng);
                    for (ObjectiveKind obj : {ObjectiveKind::MaxAgree, ObjectiveKind::MinDisagree}) {
                        rep.record("candidate_sum", check_candidate_sum(r, c, obj));
                        rep.record("rounded_support", check_rounded_support(out, c, obj));
                        rep.record("rounded_support", check_rounded_support(wide, c, obj));
                    }
                    rep.record("objective_complement", check_objective_complement(r.graph, c));
                }

                const Clustering u = random_clustering(n, rng);
                rep.record("duplication_roundtrip", check_duplication_roundtrip(r, u));

                for (ObjectiveKind obj : {ObjectiveKind::MaxAgree, ObjectiveKind::MinDisagree}) {
                    if (n <= 9) rep.record("exact_oracle", check_exact_oracle(g, obj));
                    rep.record("solver_value", check_solver_value(g, solve_exact(g, obj)));
                    rep.record("solver_value", check_solver_value(g, solve_local_search(g, obj, 0, 1000)));
                }
                rep.record("trivial_bound", check_trivial_bound(g));
            }
        },
        workers);

    VerifyReport& rounding = parts.back();
    const std::vector<std::array<Rational, 3>> cases{{make_rational(1, 2), 1, 2},
                                                     {make_rational(-1, 3), 2, 1},
                                                     {1, 1, 1},
                                                     {make_rational(-3, 4), 1, 1}};
    for (std::size_t k = 0; k < cases.size(); ++k)
        rounding.record("unbiasedness",
                        check_unbiasedness(cases[k][0], cases[k][1], cases[k][2], 100'000, derive_seed(seed, {99, k})));

    VerifyReport report;
    for (const auto& p : parts) report.merge(p);
    return report;
}

} // namespace ccroll
