#pragma once

#include "ccroll/core.hpp"
#include "ccroll/rng.hpp"

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <variant>
#include <vector>

namespace ccroll {

/// +1 inside k planted clusters, -1 across, then each sign flipped with flip_prob.
struct PlantedPartition {
    std::size_t k = 2;
    double flip_prob = 0.0;
};

/// Each pair present with probability `density`, weight p/q with
/// 1 <= q <= denominator_bound and 0 < |p| <= q.
struct UniformRational {
    double density = 1.0;
    std::int64_t denominator_bound = 4;
};

/// Complete graph, each pair +1 with probability plus_prob, else -1.
struct CompleteSigned {
    double plus_prob = 0.5;
};

using GenModel = std::variant<PlantedPartition, UniformRational, CompleteSigned>;

struct GenSpec {
    std::size_t n = 0;
    GenModel model;
    std::uint64_t seed = 0;
};

inline void validate(const GenSpec& spec)
{
    auto check_prob = [](double p, const char* what) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
    };
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PlantedPartition>) {
                check_prob(m.flip_prob, "flip_prob");
                if (m.k < 1 || m.k > spec.n) throw std::invalid_argument("planted cluster count must be in 1..n");
            } else if constexpr (std::is_same_v<M, UniformRational>) {
                check_prob(m.density, "density");
                if (m.denominator_bound < 1) throw std::invalid_argument("denominator_bound must be >= 1");
            } else {
                check_prob(m.plus_prob, "plus_prob");
            }
        },
        spec.model);
}

/// Planted labels used by the PlantedPartition model: node v goes to cluster
/// v mod k after a seeded shuffle, so every cluster is non-empty.
inline std::vector<std::size_t> planted_labels(std::size_t n, std::size_t k, std::uint64_t seed)
{
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, "planted"));
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    std::vector<std::size_t> labels(n);
    for (std::size_t pos = 0; pos < n; ++pos) labels[order[pos]] = pos % k;
    return labels;
}

inline SignedGraph generate(const GenSpec& spec)
{
    validate(spec);
    const std::size_t n = spec.n;
    Rng rng(derive_seed(spec.seed, "gen"));
    std::vector<WeightedEdge> edges;

    if (const auto* m = std::get_if<PlantedPartition>(&spec.model)) {
        const auto labels = planted_labels(n, m->k, spec.seed);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v) {
                int s = labels[u] == labels[v] ? 1 : -1;
                if (rng.chance(m->flip_prob)) s = -s;
                edges.push_back({u, v, Rational(s)});
            }
    } else if (const auto* m = std::get_if<UniformRational>(&spec.model)) {
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v) {
                if (!rng.chance(m->density)) continue;
                const auto q = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(m->denominator_bound))) + 1;
                auto p = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * q))) - q; // -q..q-1
                if (p >= 0) ++p;                                                                   // skip 0
                edges.push_back({u, v, make_rational(p, q)});
            }
    } else {
        const auto& c = std::get<CompleteSigned>(spec.model);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v) edges.push_back({u, v, Rational(rng.chance(c.plus_prob) ? 1 : -1)});
    }
    return SignedGraph(n, edges);
}

} // namespace ccroll
