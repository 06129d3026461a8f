#pragma once

// Roll -> round -> solve -> pick the best induced clustering of the original
// graph. Candidates are scored against the ORIGINAL weights w, never the rounded
// w': the clustering returned is the most weighted clustering of G among those
// induced on the kept duplicates.

#include "ccroll/core.hpp"
#include "ccroll/parallel.hpp"
#include "ccroll/rng.hpp"
#include "ccroll/roll.hpp"
#include "ccroll/rounding.hpp"
#include "ccroll/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccroll {

struct ReductionConfig {
    ObjectiveKind objective = ObjectiveKind::MaxAgree;
    std::size_t t = 0; ///< roll size parameter, N = n (1 + t (n - 1))
    Rational alpha = 1;
    Rational beta = 1;
    SolverSpec solver;
    Rational epsilon = make_rational(1, 20);
    Rational lambda_ref = 1;
    std::uint64_t seed = 0; ///< root of the rounding and solver sub-streams

    bool operator==(const ReductionConfig&) const = default;
};

inline void validate(const ReductionConfig& cfg)
{
    if (cfg.epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    if (cfg.lambda_ref < 1) throw std::invalid_argument("lambda must be >= 1");
    validate(RoundingParams{cfg.alpha, cfg.beta, 0});
}

struct ReductionReport {
    std::size_t base_nodes = 0;
    std::size_t rows = 0;
    std::uint64_t rounding_seed = 0;
    std::uint64_t solver_seed = 0;
    Clustering solver_clustering;         ///< C2*, on the N * n grid nodes
    std::vector<Rational> candidate_values; ///< w(C_i) on G, one per kept duplicate
    std::size_t best_index = 0;
    Clustering best;                      ///< C1*
    Rational best_value;
    Rational rolled_value_pre;            ///< w(C2*) on the unrounded roll
    Rational rolled_value_post;           ///< w'(C2*) on the rounded roll
    Rational rolled_value_post_pre_set;   ///< sum |w'| over C2*'s pre-rounding contributing set
    bool sum_identity_holds = false;            ///< sum of candidates == rolled_value_pre
    bool support_identity_holds = false;            ///< rolled_value_post == rolled_value_post_pre_set
    std::optional<DeviationStats> stats;  ///< against U^N, when a reference U is given
    std::vector<std::string> warnings;

    bool operator==(const ReductionReport&) const = default;
};

/// U^N: grid node (i, j) gets u's label of v_j.
inline Clustering duplication_clustering(const Clustering& u, std::size_t rows)
{
    const std::size_t n = u.size();
    std::vector<std::size_t> labels(rows * n);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < n; ++j) labels[i * n + j] = u[j];
    return Clustering(labels);
}

/// Pipeline with an arbitrary black-box solver for the rounded roll.
template <ClusteringSolver Solver>
ReductionReport reduce_and_solve_with(const SignedGraph& g, const ReductionConfig& cfg, const Solver& solver,
                                      const std::optional<Clustering>& reference = std::nullopt)
{
    validate(cfg);
    if (g.max_abs_weight() > 1) throw std::invalid_argument("graph must be normalized (all |w| <= 1)");
    if (reference) require_matching(g, *reference);

    ReductionReport rep;
    rep.base_nodes = g.node_count();
    rep.rows = valid_roll_size(g.node_count(), cfg.t);
    rep.rounding_seed = derive_seed(cfg.seed, "rounding");
    rep.solver_seed = derive_seed(cfg.seed, "solver");

    const RolledGraph roll = build_roll(g, rep.rows);
    const RoundingOutcome rounded = round_graph(roll.graph, {cfg.alpha, cfg.beta, rep.rounding_seed});

    const double grid_nodes = static_cast<double>(rep.rows * rep.base_nodes);
    if (to_double(cfg.alpha + cfg.beta) > std::sqrt(grid_nodes))
        rep.warnings.push_back("alpha + beta exceeds sqrt(N n)");

    rep.solver_clustering = Clustering(solver(rounded.after, cfg.objective));
    require_matching(rounded.after, rep.solver_clustering);
    const Clustering& c2 = rep.solver_clustering;

    rep.candidate_values.reserve(roll.active.size());
    Rational candidate_sum = 0;
    for (std::size_t k = 0; k < roll.active.size(); ++k) {
        Clustering induced = induced_clustering(roll, c2, roll.active[k]);
        Rational value = clustering_value(g, induced, cfg.objective);
        candidate_sum += value;
        if (k == 0 || strictly_better(value, rep.best_value, cfg.objective)) {
            rep.best_index = k;
            rep.best = std::move(induced);
            rep.best_value = value;
        }
        rep.candidate_values.push_back(std::move(value));
    }

    rep.rolled_value_pre = clustering_value(roll.graph, c2, cfg.objective);
    rep.rolled_value_post = clustering_value(rounded.after, c2, cfg.objective);
    rep.rolled_value_post_pre_set = 0;
    for (const NodePair& e : contributing_edges(roll.graph, c2, cfg.objective))
        rep.rolled_value_post_pre_set += abs(rounded.after.weight(e.u, e.v));
    rep.sum_identity_holds = candidate_sum == rep.rolled_value_pre;
    rep.support_identity_holds = rep.rolled_value_post == rep.rolled_value_post_pre_set;

    if (reference) {
        const Clustering u_n = duplication_clustering(*reference, rep.rows);
        rep.stats = deviation_stats(rounded, c2, u_n, cfg.lambda_ref, cfg.epsilon, cfg.objective);
    }
    return rep;
}

inline ReductionReport reduce_and_solve(const SignedGraph& g, const ReductionConfig& cfg,
                                        const std::optional<Clustering>& reference = std::nullopt)
{
    SolverSpec spec = cfg.solver;
    spec.seed = derive_seed(cfg.seed, "solver");
    return reduce_and_solve_with(g, cfg, make_solver(spec), reference);
}

/// Quality of a candidate relative to OPT, in [0, 1]: value/OPT for MaxAgree,
/// OPT/value for MinDisagree (1 when the denominator is 0).
inline double approximation_ratio(const Rational& value, const Rational& opt, ObjectiveKind obj)
{
    if (obj == ObjectiveKind::MaxAgree) return opt == 0 ? 1.0 : to_double(value / opt);
    return value == 0 ? 1.0 : to_double(opt / value);
}

/// The candidate misses the (lambda + eps) factor: value < OPT/(lambda+eps)
/// for MaxAgree, value > (lambda+eps) OPT for MinDisagree.
inline bool is_bad_event(const Rational& value, const Rational& opt, const Rational& lambda, const Rational& eps,
                         ObjectiveKind obj)
{
    const Rational factor = lambda + eps;
    return obj == ObjectiveKind::MaxAgree ? value * factor < opt : value > factor * opt;
}

struct TrialRecord {
    std::uint64_t seed = 0;
    std::vector<Rational> candidate_values;
    std::size_t best_index = 0;
    Rational best_value;
    Rational rolled_value_pre;
    Rational rolled_value_post;
    bool sum_identity_holds = false;
    bool support_identity_holds = false;
    double ratio = 0.0;
    bool bad_event = false;
    std::optional<DeviationStats> stats;
    double tail_bound = 0.0; ///< union of Hoeffding terms for this C2*, see deviation_tail_bound

    bool operator==(const TrialRecord&) const = default;
};

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;

    bool operator==(const HistogramBin&) const = default;
};

inline constexpr std::size_t kRatioBins = 20;

struct TrialAggregate {
    std::size_t trials = 0;
    double bad_event_freq = 0.0;
    std::vector<HistogramBin> ratio_histogram;
    double ratio_min = 0.0, ratio_mean = 0.0, ratio_max = 0.0;
    double deviation_min = 0.0, deviation_mean = 0.0, deviation_max = 0.0; ///< S1 - S2
    double gap_target_mean = 0.0;
    double tail_bound_mean = 0.0;
    bool sum_identity_all = true;
    bool support_identity_all = true;

    bool operator==(const TrialAggregate&) const = default;
};

struct TrialsReport {
    ReductionConfig config;
    std::size_t base_nodes = 0;
    std::size_t rows = 0;
    Rational opt;            ///< K, from the exact oracle on G
    bool opt_below_one = false;
    std::vector<TrialRecord> trials;
    TrialAggregate aggregate;

    bool operator==(const TrialsReport&) const = default;
};

inline TrialAggregate aggregate_trials(const std::vector<TrialRecord>& records)
{
    TrialAggregate a;
    a.trials = records.size();
    a.ratio_histogram.resize(kRatioBins);
    for (std::size_t b = 0; b < kRatioBins; ++b)
        a.ratio_histogram[b] = {static_cast<double>(b) / kRatioBins, static_cast<double>(b + 1) / kRatioBins, 0};
    if (records.empty()) return a;

    std::size_t bad = 0, with_stats = 0;
    a.ratio_min = a.deviation_min = std::numeric_limits<double>::infinity();
    a.ratio_max = a.deviation_max = -std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        bad += r.bad_event ? 1 : 0;
        a.sum_identity_all = a.sum_identity_all && r.sum_identity_holds;
        a.support_identity_all = a.support_identity_all && r.support_identity_holds;
        const auto bin = std::min(kRatioBins - 1, static_cast<std::size_t>(std::max(0.0, r.ratio) * kRatioBins));
        ++a.ratio_histogram[bin].count;
        a.ratio_min = std::min(a.ratio_min, r.ratio);
        a.ratio_max = std::max(a.ratio_max, r.ratio);
        a.ratio_mean += r.ratio;
        if (r.stats) {
            const double dev = to_double(r.stats->combined);
            a.deviation_min = std::min(a.deviation_min, dev);
            a.deviation_max = std::max(a.deviation_max, dev);
            a.deviation_mean += dev;
            a.gap_target_mean += to_double(r.stats->gap_target);
            a.tail_bound_mean += r.tail_bound;
            ++with_stats;
        }
    }
    const auto count = static_cast<double>(records.size());
    a.bad_event_freq = static_cast<double>(bad) / count;
    a.ratio_mean /= count;
    if (with_stats > 0) {
        const auto s = static_cast<double>(with_stats);
        a.deviation_mean /= s;
        a.gap_target_mean /= s;
        a.tail_bound_mean /= s;
    } else {
        a.deviation_min = a.deviation_max = 0.0;
    }
    return a;
}

/// Repeats the pipeline with independent seeds and measures how often the best
/// candidate misses the (lambda + eps) factor against the exact optimum of G.
inline TrialsReport run_trials(const SignedGraph& g, const ReductionConfig& cfg, std::size_t trials,
                               std::size_t workers = 0)
{
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    validate(cfg);

    TrialsReport rep;
    rep.config = cfg;
    rep.base_nodes = g.node_count();
    rep.rows = valid_roll_size(g.node_count(), cfg.t);
    const SolveResult oracle = solve_exact(g, cfg.objective);
    rep.opt = oracle.value;
    rep.opt_below_one = oracle.value < 1;

    rep.trials.resize(trials);
    parallel_for(
        trials,
        [&](std::size_t k) {
            ReductionConfig trial_cfg = cfg;
            trial_cfg.seed = derive_seed(cfg.seed, {k});
            const ReductionReport r = reduce_and_solve(g, trial_cfg, oracle.clustering);
            TrialRecord& rec = rep.trials[k];
            rec.seed = trial_cfg.seed;
            rec.candidate_values = r.candidate_values;
            rec.best_index = r.best_index;
            rec.best_value = r.best_value;
            rec.rolled_value_pre = r.rolled_value_pre;
            rec.rolled_value_post = r.rolled_value_post;
            rec.sum_identity_holds = r.sum_identity_holds;
            rec.support_identity_holds = r.support_identity_holds;
            rec.ratio = approximation_ratio(r.best_value, rep.opt, cfg.objective);
            rec.bad_event = is_bad_event(r.best_value, rep.opt, cfg.lambda_ref, cfg.epsilon, cfg.objective);
            rec.stats = r.stats;
            if (r.stats) rec.tail_bound = deviation_tail_bound(*r.stats, cfg.alpha, cfg.beta);
        },
        workers);

    rep.aggregate = aggregate_trials(rep.trials);
    return rep;
}

} // namespace ccroll
