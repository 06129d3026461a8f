#pragma once

// Test-only oracles. Nothing here calls into the solvers.

#include "ccroll/core.hpp"
#include "ccroll/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ccroll::oracle {

// Partitions as block bitmasks: the lowest free element picks any subset of the
// other free elements as its companions.
inline void for_each_mask_partition(std::size_t n, const std::function<void(const std::vector<std::uint32_t>&)>& visit)
{
    std::vector<std::uint32_t> blocks;
    const std::uint32_t all = n == 0 ? 0u : static_cast<std::uint32_t>((1ull << n) - 1);
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t free) {
        if (free == 0) {
            visit(blocks);
            return;
        }
        const std::uint32_t low = free & (~free + 1);
        const std::uint32_t others = free & ~low;
        // iterate all subsets of `others`, including empty
        std::uint32_t sub = others;
        while (true) {
            blocks.push_back(low | sub);
            rec(others & ~sub);
            blocks.pop_back();
            if (sub == 0) break;
            sub = (sub - 1) & others;
        }
    };
    rec(all);
}

// Edge-by-edge rescan over every unordered pair.
inline Rational naive_value(const SignedGraph& g, const std::vector<std::size_t>& label, ObjectiveKind obj)
{
    Rational total = 0;
    for (std::size_t u = 0; u < g.node_count(); ++u)
        for (std::size_t v = u + 1; v < g.node_count(); ++v) {
            const Rational w = g.weight(u, v);
            if (w == 0) continue;
            const bool same = label[u] == label[v];
            const bool agree = (w > 0 && same) || (w < 0 && !same);
            if (agree == (obj == ObjectiveKind::MaxAgree)) total += w < 0 ? Rational(-w) : w;
        }
    return total;
}

inline Rational mask_optimum(const SignedGraph& g, ObjectiveKind obj)
{
    std::optional<Rational> best;
    std::vector<std::size_t> label(g.node_count());
    for_each_mask_partition(g.node_count(), [&](const std::vector<std::uint32_t>& blocks) {
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (std::size_t x = 0; x < g.node_count(); ++x)
                if (blocks[b] >> x & 1u) label[x] = b;
        Rational v = naive_value(g, label, obj);
        if (!best || (obj == ObjectiveKind::MaxAgree ? v > *best : v < *best)) best = v;
    });
    return best.value_or(Rational(0));
}

// Random rational weights p/q, q <= 6, about `density` of the pairs present.
inline SignedGraph random_graph(std::size_t n, std::uint64_t seed, double density = 0.7)
{
    Rng rng(seed);
    std::vector<WeightedEdge> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            if (!rng.chance(density)) continue;
            const auto q = static_cast<std::int64_t>(1 + rng.below(6));
            auto p = static_cast<std::int64_t>(1 + rng.below(static_cast<std::uint64_t>(q)));
            if (rng.chance(0.5)) p = -p;
            edges.push_back({u, v, make_rational(p, q)});
        }
    return SignedGraph(n, edges);
}

inline SignedGraph random_pm_graph(std::size_t n, std::uint64_t seed, double zero_prob = 0.0)
{
    Rng rng(seed);
    std::vector<WeightedEdge> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            if (rng.chance(zero_prob)) continue;
            edges.push_back({u, v, Rational(rng.chance(0.5) ? 1 : -1)});
        }
    return SignedGraph(n, edges);
}

inline std::vector<std::size_t> random_labels(std::size_t n, std::size_t k, Rng& rng)
{
    std::vector<std::size_t> out(n);
    for (auto& l : out) l = rng.below(k);
    return out;
}

} // namespace ccroll::oracle
