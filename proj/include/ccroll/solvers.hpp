#pragma once

#include "ccroll/core.hpp"
#include "ccroll/rng.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ccroll {

enum class SolverKind { Exact, TrivialMax, Pivot, LocalSearch };

inline std::string_view to_string(SolverKind k)
{
    switch (k) {
    case SolverKind::Exact: return "exact";
    case SolverKind::TrivialMax: return "trivial";
    case SolverKind::Pivot: return "pivot";
    case SolverKind::LocalSearch: return "local";
    }
    return "?";
}

inline SolverKind parse_solver_kind(std::string_view s)
{
    if (s == "exact") return SolverKind::Exact;
    if (s == "trivial") return SolverKind::TrivialMax;
    if (s == "pivot") return SolverKind::Pivot;
    if (s == "local") return SolverKind::LocalSearch;
    throw std::invalid_argument("unknown solver '" + std::string(s) + "'");
}

/// Largest connected component the exact solver accepts.
inline constexpr std::size_t kExactComponentLimit = 32;
/// Search-node budget for one exact solve.
inline constexpr std::uint64_t kExactNodeBudget = 400'000'000;

struct SolverSpec {
    SolverKind kind = SolverKind::Exact;
    std::uint64_t seed = 0;
    std::size_t budget = 10'000; ///< local search move limit

    bool operator==(const SolverSpec&) const = default;
};

struct SolveResult {
    Clustering clustering;
    Rational value;
    ObjectiveKind objective = ObjectiveKind::MaxAgree;
    SolverSpec solver;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Any black-box clustering algorithm: graph and objective in, clustering out.
template <typename F>
concept ClusteringSolver = requires(const F& f, const SignedGraph& g, ObjectiveKind obj) {
    { f(g, obj) } -> std::convertible_to<Clustering>;
};

namespace detail {

// Integer copy of a graph: weights scaled by the lcm of all denominators. Every
// clustering's disagreement weight (and agreement weight) scales by the same
// factor, so integer comparisons are exact.
struct WorkGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> adj;
    std::vector<std::int64_t> positive_total; ///< per node, sum of positive incident weights
    std::int64_t negative_sum = 0;            ///< sum of |w| over negative edges
    std::int64_t positive_sum = 0;
};

inline WorkGraph make_work_graph(const SignedGraph& g)
{
    BigInt scale = 1;
    for (const auto& [pair, w] : g.weights()) {
        const BigInt den = boost::multiprecision::denominator(w);
        scale = scale / boost::multiprecision::gcd(scale, den) * den;
    }
    WorkGraph wg;
    wg.n = g.node_count();
    wg.adj.resize(wg.n);
    wg.positive_total.assign(wg.n, 0);
    const BigInt limit = BigInt(1) << 61;
    BigInt total = 0;
    for (const auto& [pair, w] : g.weights()) {
        const BigInt scaled = boost::multiprecision::numerator(w) * (scale / boost::multiprecision::denominator(w));
        total += boost::multiprecision::abs(scaled);
        if (total >= limit) throw SolverError("edge weights too fine-grained for integer search");
        const auto v = scaled.convert_to<std::int64_t>();
        wg.adj[pair.u].emplace_back(pair.v, v);
        wg.adj[pair.v].emplace_back(pair.u, v);
        if (v > 0) {
            wg.positive_total[pair.u] += v;
            wg.positive_total[pair.v] += v;
            wg.positive_sum += v;
        } else {
            wg.negative_sum -= v;
        }
    }
    for (auto& list : wg.adj) std::sort(list.begin(), list.end());
    return wg;
}

/// Connected components of the positive-edge subgraph, each in BFS order.
inline std::vector<std::vector<std::size_t>> positive_components(const WorkGraph& wg)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> seen(wg.n, false);
    for (std::size_t s = 0; s < wg.n; ++s) {
        if (seen[s]) continue;
        std::vector<std::size_t> order{s};
        seen[s] = true;
        for (std::size_t head = 0; head < order.size(); ++head)
            for (auto [v, w] : wg.adj[order[head]])
                if (w > 0 && !seen[v]) {
                    seen[v] = true;
                    order.push_back(v);
                }
        out.push_back(std::move(order));
    }
    return out;
}

/// Maximum-adjacency order of a component: start from the heaviest node, then
/// repeatedly take the node with the most |w| towards nodes already taken.
inline std::vector<std::size_t> search_order(const WorkGraph& wg, const std::vector<std::size_t>& comp)
{
    std::vector<std::int64_t> attach(wg.n, 0), degree(wg.n, 0);
    std::vector<bool> inside(wg.n, false), taken(wg.n, false);
    for (std::size_t u : comp) inside[u] = true;
    for (std::size_t u : comp)
        for (auto [v, w] : wg.adj[u])
            if (inside[v]) degree[u] += w > 0 ? w : -w;
    std::vector<std::size_t> order;
    order.reserve(comp.size());
    while (order.size() < comp.size()) {
        std::size_t pick = wg.n;
        for (std::size_t u : comp) {
            if (taken[u]) continue;
            if (pick == wg.n || attach[u] > attach[pick] ||
                (attach[u] == attach[pick] && (degree[u] > degree[pick] || (degree[u] == degree[pick] && u < pick))))
                pick = u;
        }
        taken[pick] = true;
        order.push_back(pick);
        for (auto [v, w] : wg.adj[pick])
            if (inside[v]) attach[v] += w > 0 ? w : -w;
    }
    return order;
}

// Branch and bound over restricted-growth labellings of one positive
// component, nodes taken in search_order, run as a Russian doll search: the
// suffixes order[m-1..], order[m-2..], ... are solved in turn, and each
// suffix's optimum (or lower bound, when its stage budget runs out) bounds the
// edges among still-unassigned nodes in the larger searches. The other part of
// the bound: every unassigned node pays at least its cheapest placement against
// the nodes already assigned.
class ComponentSearch {
public:
    ComponentSearch(const WorkGraph& wg, const std::vector<std::size_t>& order, std::uint64_t budget)
        : m_(order.size()), budget_(budget)
    {
        std::vector<std::size_t> pos(wg.n, m_);
        for (std::size_t k = 0; k < m_; ++k) pos[order[k]] = k;
        later_.resize(m_);
        for (std::size_t k = 0; k < m_; ++k)
            for (auto [v, w] : wg.adj[order[k]])
                if (pos[v] > k && pos[v] < m_) later_[k].emplace_back(pos[v], w);
        assigned_pos_.assign(m_, 0);
        pos_acc_.assign(m_ * m_, 0);
        neg_acc_.assign(m_ * m_, 0);
        labels_.assign(m_, 0);
        best_labels_.assign(m_, 0);
        suffix_lb_.assign(m_ + 1, 0);
        suffix_ub_.assign(m_ + 1, 0);
    }

    void run()
    {
        for (std::size_t start = m_; start-- > 0;) {
            seed_incumbent(start);
            floor_ = std::max(triangle_bound(start), suffix_lb_[start + 1]);
            stage_left_ = start == 0 ? budget_ : std::min(budget_, kStageBudget);
            aborted_ = false;
            if (best_cost_ > floor_) descend(start, start, 0, 0);
            if (aborted_ && start == 0) throw SolverError("exact search budget exhausted");
            suffix_ub_[start] = best_cost_;
            suffix_lb_[start] = aborted_ ? floor_ : best_cost_;
        }
    }

    /// Labels by position in `order`.
    const std::vector<std::size_t>& best_labels() const { return best_labels_; }
    std::int64_t best_cost() const { return best_cost_; }

private:
    // Cost node k pays against assigned nodes when joining `cluster`: positive
    // edges leaving the cluster plus negative edges inside it.
    std::int64_t placement_cost(std::size_t k, std::size_t cluster) const
    {
        return assigned_pos_[k] - pos_acc_[k * m_ + cluster] + neg_acc_[k * m_ + cluster];
    }

    std::int64_t remaining_bound(std::size_t from, std::size_t clusters) const
    {
        std::int64_t bound = suffix_lb_[from];
        for (std::size_t q = from; q < m_; ++q) {
            std::int64_t cheapest = assigned_pos_[q]; // new cluster
            for (std::size_t c = 0; c < clusters && cheapest > 0; ++c)
                cheapest = std::min(cheapest, placement_cost(q, c));
            bound += cheapest;
        }
        return bound;
    }

    // Every clustering disagrees with some edge of each triangle holding
    // exactly one negative edge. Greedily peeling min-weight layers off such
    // triangles on order[from..] gives a lower bound on that suffix.
    std::int64_t triangle_bound(std::size_t from) const
    {
        const std::size_t span = m_ - from;
        std::vector<std::int64_t> w(span * span, 0);
        for (std::size_t a = from; a < m_; ++a)
            for (auto [b, wt] : later_[a]) {
                w[(a - from) * span + (b - from)] = wt;
                w[(b - from) * span + (a - from)] = wt;
            }
        std::int64_t bound = 0;
        for (std::size_t a = 0; a < span; ++a)
            for (std::size_t b = a + 1; b < span; ++b) {
                if (w[a * span + b] == 0) continue;
                for (std::size_t c = b + 1; c < span; ++c) {
                    std::int64_t& ab = w[a * span + b];
                    std::int64_t& ac = w[a * span + c];
                    std::int64_t& bc = w[b * span + c];
                    if (ab == 0) break;
                    if (ac == 0 || bc == 0) continue;
                    if ((ab < 0) + (ac < 0) + (bc < 0) != 1) continue;
                    const std::int64_t layer = std::min({std::abs(ab), std::abs(ac), std::abs(bc)});
                    for (std::int64_t* e : {&ab, &ac, &bc}) {
                        *e += *e > 0 ? -layer : layer;
                    }
                    w[b * span + a] = ab;
                    w[c * span + a] = ac;
                    w[c * span + b] = bc;
                    bound += layer;
                }
            }
        return bound;
    }

    // Incumbent for the suffix starting at `start`: the optimum of the next
    // suffix with node `start` added at its cheapest placement.
    void seed_incumbent(std::size_t start)
    {
        std::size_t used = 0;
        for (std::size_t q = start + 1; q < m_; ++q) used = std::max(used, best_labels_[q] + 1);
        std::int64_t best_extra = std::numeric_limits<std::int64_t>::max();
        std::size_t best_label = used;
        for (std::size_t c = 0; c <= used; ++c) {
            std::int64_t extra = 0;
            for (auto [q, w] : later_[start]) {
                const bool same = best_labels_[q] == c;
                if (w > 0 && !same) extra += w;
                if (w < 0 && same) extra -= w;
            }
            if (extra < best_extra) {
                best_extra = extra;
                best_label = c;
            }
        }
        best_labels_[start] = best_label;
        best_cost_ = suffix_ub_[start + 1] + best_extra;
    }

    void apply(std::size_t k, std::size_t cluster, int dir)
    {
        for (auto [q, w] : later_[k]) {
            if (w > 0) {
                pos_acc_[q * m_ + cluster] += dir * w;
                assigned_pos_[q] += dir * w;
            } else {
                neg_acc_[q * m_ + cluster] -= dir * w;
            }
        }
    }

    void descend(std::size_t start, std::size_t k, std::size_t clusters, std::int64_t cost)
    {
        if (stage_left_-- == 0 || budget_-- == 0) {
            aborted_ = true;
            return;
        }
        if (k == m_) {
            if (cost < best_cost_) {
                best_cost_ = cost;
                std::copy(labels_.begin() + static_cast<std::ptrdiff_t>(start), labels_.end(),
                          best_labels_.begin() + static_cast<std::ptrdiff_t>(start));
            }
            return;
        }
        // Candidate placements sorted by immediate cost, ties by label.
        std::vector<std::pair<std::int64_t, std::size_t>> choices;
        choices.reserve(clusters + 1);
        for (std::size_t c = 0; c < clusters; ++c) choices.emplace_back(placement_cost(k, c), c);
        choices.emplace_back(assigned_pos_[k], clusters);
        std::stable_sort(choices.begin(), choices.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });

        for (auto [delta, c] : choices) {
            const std::int64_t next_cost = cost + delta;
            if (aborted_ || best_cost_ <= floor_) break;
            if (next_cost + suffix_lb_[k + 1] >= best_cost_) break;
            const std::size_t next_clusters = c == clusters ? clusters + 1 : clusters;
            labels_[k] = c;
            apply(k, c, +1);
            if (next_cost + remaining_bound(k + 1, next_clusters) < best_cost_)
                descend(start, k + 1, next_clusters, next_cost);
            apply(k, c, -1);
        }
    }

    // Intermediate suffixes that need more than this many nodes fall back to
    // their lower bound instead of an exact value.
    static constexpr std::uint64_t kStageBudget = 200'000;

    std::size_t m_;
    std::uint64_t budget_;
    std::uint64_t stage_left_ = 0;
    std::int64_t floor_ = 0;
    bool aborted_ = false;
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> later_;
    std::vector<std::int64_t> assigned_pos_; ///< positive weight to assigned nodes
    std::vector<std::int64_t> pos_acc_, neg_acc_;
    std::vector<std::size_t> labels_, best_labels_;
    std::vector<std::int64_t> suffix_lb_; ///< lower bound on the optimum of order[k..]
    std::vector<std::int64_t> suffix_ub_; ///< cost of the labelling kept for order[k..]
    std::int64_t best_cost_ = 0;
};

inline SolveResult finish(const SignedGraph& g, Clustering c, ObjectiveKind obj, const SolverSpec& spec)
{
    Rational value = clustering_value(g, c, obj);
    return {std::move(c), std::move(value), obj, spec};
}

} // namespace detail

/// Optimal clustering. Splitting a cluster along components of the positive-edge
/// subgraph cuts no positive edge and can only separate negative ones, so some
/// optimum keeps every cluster inside one positive component and each component
/// is searched on its own. A partition minimizing disagreement also maximizes
/// agreement, hence one search serves both objectives.
inline SolveResult solve_exact(const SignedGraph& g, ObjectiveKind obj,
                               std::size_t component_limit = kExactComponentLimit,
                               std::uint64_t node_budget = kExactNodeBudget)
{
    const detail::WorkGraph wg = detail::make_work_graph(g);
    const auto comps = detail::positive_components(wg);
    for (const auto& comp : comps)
        if (comp.size() > component_limit)
            throw SolverError("exact solver: component of " + std::to_string(comp.size()) +
                              " nodes exceeds limit " + std::to_string(component_limit));

    std::vector<std::size_t> labels(g.node_count(), 0);
    std::size_t offset = 0;
    for (const auto& members : comps) {
        const auto comp = detail::search_order(wg, members);
        detail::ComponentSearch search(wg, comp, node_budget);
        search.run();

        const auto& best = search.best_labels();
        std::size_t used = 0;
        for (std::size_t k = 0; k < comp.size(); ++k) {
            labels[comp[k]] = offset + best[k];
            used = std::max(used, best[k] + 1);
        }
        offset += used;
    }
    return detail::finish(g, Clustering(labels), obj, {SolverKind::Exact, 0, 0});
}

/// Visits every set partition of {0..n-1} as a restricted growth string
/// (a[0] = 0, a[k] <= 1 + max(a[0..k-1])), in lexicographic order.
template <typename Visit>
void for_each_set_partition(std::size_t n, Visit&& visit)
{
    if (n == 0) {
        visit(std::vector<std::size_t>{});
        return;
    }
    std::vector<std::size_t> a(n, 0), ceiling(n, 0); // ceiling[k] = max(a[0..k-1])
    while (true) {
        visit(static_cast<const std::vector<std::size_t>&>(a));
        std::size_t k = n - 1;
        while (k > 0 && a[k] > ceiling[k]) --k;
        if (k == 0) return;
        ++a[k];
        for (std::size_t j = k + 1; j < n; ++j) {
            a[j] = 0;
            ceiling[j] = std::max(ceiling[j - 1], a[j - 1]);
        }
    }
}

/// Plain enumeration of every partition with exact rational evaluation.
/// Independent of solve_exact's pruning; used for cross-checks on small graphs.
inline SolveResult brute_force_optimum(const SignedGraph& g, ObjectiveKind obj)
{
    if (g.node_count() > 11) throw SolverError("brute force limited to 11 nodes");
    std::vector<std::size_t> best_labels;
    Rational best;
    bool have = false;
    for_each_set_partition(g.node_count(), [&](const std::vector<std::size_t>& labels) {
        Rational v = clustering_value(g, Clustering(labels), obj);
        if (!have || strictly_better(v, best, obj)) {
            best = std::move(v);
            best_labels = labels;
            have = true;
        }
    });
    return detail::finish(g, Clustering(best_labels), obj, {SolverKind::Exact, 0, 0});
}

/// Better of one cluster and all singletons (one cluster on ties). Agreement is
/// at least half the total weight, hence at least OPT/2 for MaxAgree.
inline SolveResult solve_trivial_max(const SignedGraph& g, ObjectiveKind obj = ObjectiveKind::MaxAgree)
{
    const auto one = Clustering::single_cluster(g.node_count());
    const auto single = Clustering::singletons(g.node_count());
    const Rational one_agree = clustering_value(g, one, ObjectiveKind::MaxAgree);
    const Rational single_agree = clustering_value(g, single, ObjectiveKind::MaxAgree);
    return detail::finish(g, one_agree >= single_agree ? one : single, obj, {SolverKind::TrivialMax, 0, 0});
}

inline bool is_complete_unweighted(const SignedGraph& g)
{
    const std::size_t n = g.node_count();
    if (g.edge_count() != n * (n - (n > 0 ? 1 : 0)) / 2) return false;
    for (const auto& [pair, w] : g.weights())
        if (w != 1 && w != -1) return false;
    return true;
}

/// Randomized pivot for complete +/-1 instances: pick a uniform unclustered
/// pivot, cluster it with its unclustered + neighbours, repeat.
inline SolveResult solve_pivot(const SignedGraph& g, std::uint64_t seed,
                               ObjectiveKind obj = ObjectiveKind::MinDisagree)
{
    if (!is_complete_unweighted(g)) throw SolverError("pivot requires a complete graph with weights +1/-1");
    const std::size_t n = g.node_count();
    Rng rng(seed);
    std::vector<std::size_t> remaining(n);
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    std::vector<std::size_t> labels(n, 0);
    std::size_t next_label = 0;
    while (!remaining.empty()) {
        const std::size_t pivot = remaining[rng.below(remaining.size())];
        std::vector<std::size_t> rest;
        for (std::size_t v : remaining) {
            if (v == pivot || g.weight(pivot, v) > 0)
                labels[v] = next_label;
            else
                rest.push_back(v);
        }
        remaining = std::move(rest);
        ++next_label;
    }
    return detail::finish(g, Clustering(labels), obj, {SolverKind::Pivot, seed, 0});
}

/// Best-improvement single-node moves from the better trivial clustering.
/// Ties: lowest node, then lowest target label (a fresh singleton ranks last).
inline SolveResult solve_local_search(const SignedGraph& g, ObjectiveKind obj, std::uint64_t seed,
                                      std::size_t budget)
{
    if (budget < 1) throw std::invalid_argument("local search budget must be >= 1");
    const detail::WorkGraph wg = detail::make_work_graph(g);
    const std::size_t n = g.node_count();
    std::vector<std::size_t> labels = solve_trivial_max(g).clustering.labels();
    std::size_t clusters = n == 0 ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<std::size_t> sizes(clusters, 0);
    for (std::size_t l : labels) ++sizes[l];

    std::vector<std::int64_t> pos_to, neg_to;
    for (std::size_t moves = 0; moves < budget; ++moves) {
        std::int64_t best_gain = 0;
        std::size_t best_node = n, best_target = 0;
        for (std::size_t v = 0; v < n; ++v) {
            pos_to.assign(clusters, 0);
            neg_to.assign(clusters, 0);
            for (auto [u, w] : wg.adj[v]) (w > 0 ? pos_to : neg_to)[labels[u]] += (w > 0 ? w : -w);
            auto cost_in = [&](std::size_t c) { return wg.positive_total[v] - pos_to[c] + neg_to[c]; };
            const std::int64_t here = cost_in(labels[v]);
            for (std::size_t c = 0; c <= clusters; ++c) {
                if (c == labels[v]) continue;
                if (c == clusters && sizes[labels[v]] == 1) continue; // already a singleton
                const std::int64_t gain = here - (c == clusters ? wg.positive_total[v] : cost_in(c));
                if (gain > best_gain) {
                    best_gain = gain;
                    best_node = v;
                    best_target = c;
                }
            }
        }
        if (best_node == n) break;
        labels[best_node] = best_target;
        Clustering canon(labels);
        labels = canon.labels();
        clusters = canon.cluster_count();
        sizes.assign(clusters, 0);
        for (std::size_t l : labels) ++sizes[l];
    }
    return detail::finish(g, Clustering(labels), obj, {SolverKind::LocalSearch, seed, budget});
}

inline SolveResult solve(const SignedGraph& g, ObjectiveKind obj, const SolverSpec& spec)
{
    SolveResult r;
    switch (spec.kind) {
    case SolverKind::Exact: r = solve_exact(g, obj); break;
    case SolverKind::TrivialMax: r = solve_trivial_max(g, obj); break;
    case SolverKind::Pivot: r = solve_pivot(g, spec.seed, obj); break;
    case SolverKind::LocalSearch: r = solve_local_search(g, obj, spec.seed, spec.budget); break;
    }
    r.solver = spec;
    return r;
}

/// Wraps a SolverSpec as a black-box ClusteringSolver.
inline auto make_solver(SolverSpec spec)
{
    return [spec](const SignedGraph& g, ObjectiveKind obj) { return solve(g, obj, spec).clustering; };
}

} // namespace ccroll
