#pragma once

#include "ccroll/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ccroll {

/// Unordered node pair, stored with u < v.
struct NodePair {
    std::size_t u = 0;
    std::size_t v = 0;

    NodePair() = default;
    NodePair(std::size_t a, std::size_t b) : u(std::min(a, b)), v(std::max(a, b)) {}

    auto operator<=>(const NodePair&) const = default;
};

struct WeightedEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    Rational weight;
};

enum class ObjectiveKind { MaxAgree, MinDisagree };

inline std::string_view to_string(ObjectiveKind obj)
{
    return obj == ObjectiveKind::MaxAgree ? "max" : "min";
}

inline ObjectiveKind parse_objective(std::string_view s)
{
    if (s == "max" || s == "maxagree" || s == "MaxAgree") return ObjectiveKind::MaxAgree;
    if (s == "min" || s == "mindisagree" || s == "MinDisagree") return ObjectiveKind::MinDisagree;
    throw std::invalid_argument("unknown objective '" + std::string(s) + "'");
}

/// Undirected graph on nodes 0..n-1 with exact rational weights. Pairs that are
/// not stored have weight 0, which is the same thing as a non-edge.
class SignedGraph {
public:
    using WeightMap = std::map<NodePair, Rational>;

    SignedGraph() = default;

    explicit SignedGraph(std::size_t n) : n_(n) {}

    /// Throws on self-loops, out-of-range endpoints and repeated pairs.
    /// Zero weights are accepted and dropped.
    SignedGraph(std::size_t n, const std::vector<WeightedEdge>& edges) : n_(n)
    {
        std::map<NodePair, bool> seen;
        for (const auto& e : edges) {
            if (e.u == e.v) throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
            if (e.u >= n || e.v >= n)
                throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                            ") outside node range 0.." + std::to_string(n) + "-1");
            NodePair key(e.u, e.v);
            if (!seen.emplace(key, true).second)
                throw std::invalid_argument("duplicate pair (" + std::to_string(key.u) + "," +
                                            std::to_string(key.v) + ")");
            if (e.weight != 0) weights_.emplace(key, e.weight);
        }
    }

    std::size_t node_count() const { return n_; }
    std::size_t edge_count() const { return weights_.size(); }
    const WeightMap& weights() const { return weights_; }

    Rational weight(std::size_t a, std::size_t b) const
    {
        if (a == b) return Rational(0);
        auto it = weights_.find(NodePair(a, b));
        return it == weights_.end() ? Rational(0) : it->second;
    }

    Rational total_abs_weight() const
    {
        Rational total = 0;
        for (const auto& [pair, w] : weights_) total += abs(w);
        return total;
    }

    Rational max_abs_weight() const
    {
        Rational best = 0;
        for (const auto& [pair, w] : weights_) best = std::max(best, abs(w));
        return best;
    }

    std::vector<WeightedEdge> edge_list() const
    {
        std::vector<WeightedEdge> out;
        out.reserve(weights_.size());
        for (const auto& [pair, w] : weights_) out.push_back({pair.u, pair.v, w});
        return out;
    }

    bool operator==(const SignedGraph&) const = default;

private:
    std::size_t n_ = 0;
    WeightMap weights_;
};

/// Partition of nodes 0..n-1. Labels are canonical: relabelled in order of first
/// occurrence, so two clusterings describing the same partition compare equal.
class Clustering {
public:
    Clustering() = default;

    explicit Clustering(const std::vector<std::size_t>& raw_labels) : labels_(raw_labels.size())
    {
        std::map<std::size_t, std::size_t> remap;
        for (std::size_t i = 0; i < raw_labels.size(); ++i) {
            auto [it, inserted] = remap.emplace(raw_labels[i], remap.size());
            labels_[i] = it->second;
        }
        clusters_ = remap.size();
    }

    static Clustering single_cluster(std::size_t n) { return Clustering(std::vector<std::size_t>(n, 0)); }

    static Clustering singletons(std::size_t n)
    {
        std::vector<std::size_t> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = i;
        return Clustering(labels);
    }

    std::size_t size() const { return labels_.size(); }
    std::size_t cluster_count() const { return clusters_; }
    std::size_t operator[](std::size_t node) const { return labels_[node]; }
    const std::vector<std::size_t>& labels() const { return labels_; }

    bool same_cluster(std::size_t a, std::size_t b) const { return labels_[a] == labels_[b]; }

    bool operator==(const Clustering&) const = default;

private:
    std::vector<std::size_t> labels_;
    std::size_t clusters_ = 0;
};

inline void require_matching(const SignedGraph& g, const Clustering& c)
{
    if (c.size() != g.node_count())
        throw std::invalid_argument("clustering covers " + std::to_string(c.size()) +
                                    " nodes but graph has " + std::to_string(g.node_count()));
}

/// Whether an edge of weight `w` counts towards the objective under the given
/// placement of its endpoints.
inline bool is_contributing(const Rational& w, bool same_cluster, ObjectiveKind obj)
{
    if (w == 0) return false;
    const bool agrees = (w > 0) == same_cluster;
    return obj == ObjectiveKind::MaxAgree ? agrees : !agrees;
}

/// Edges counted by the objective, in ascending pair order.
inline std::vector<NodePair> contributing_edges(const SignedGraph& g, const Clustering& c, ObjectiveKind obj)
{
    require_matching(g, c);
    std::vector<NodePair> out;
    for (const auto& [pair, w] : g.weights())
        if (is_contributing(w, c.same_cluster(pair.u, pair.v), obj)) out.push_back(pair);
    return out;
}

/// Sum of |w| over contributing edges. Non-negative for both objectives.
inline Rational clustering_value(const SignedGraph& g, const Clustering& c, ObjectiveKind obj)
{
    require_matching(g, c);
    Rational total = 0;
    for (const auto& [pair, w] : g.weights())
        if (is_contributing(w, c.same_cluster(pair.u, pair.v), obj)) total += abs(w);
    return total;
}

/// True when `a` is at least as good as `b` under the objective's direction.
inline bool at_least_as_good(const Rational& a, const Rational& b, ObjectiveKind obj)
{
    return obj == ObjectiveKind::MaxAgree ? a >= b : a <= b;
}

inline bool strictly_better(const Rational& a, const Rational& b, ObjectiveKind obj)
{
    return obj == ObjectiveKind::MaxAgree ? a > b : a < b;
}

struct NormalizeResult {
    SignedGraph graph;
    Rational scale = 1; ///< the divisor applied (max |w| of the input)
    bool all_zero = false;
};

/// Divides every weight by max |w| so the largest magnitude is exactly 1.
/// An all-zero graph is returned unchanged with `all_zero` set.
inline NormalizeResult normalize_weights(const SignedGraph& g)
{
    const Rational scale = g.max_abs_weight();
    if (scale == 0) return {g, Rational(1), true};
    std::vector<WeightedEdge> edges = g.edge_list();
    for (auto& e : edges) e.weight /= scale;
    return {SignedGraph(g.node_count(), edges), scale, false};
}

} // namespace ccroll
