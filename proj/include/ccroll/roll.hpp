#pragma once

#include "ccroll/core.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccroll {

/// Grid position in the roll: `row` indexes the N parallel copies of V, `col`
/// the base node. Zero-based; grid index is row * n + col.
struct GridNode {
    std::size_t row = 0;
    std::size_t col = 0;

    auto operator<=>(const GridNode&) const = default;
};

/// One embedded copy of the base graph: start row and slope. Node j of the copy
/// sits at grid position ((row + j * slope) mod N, j).
struct DuplicateId {
    std::size_t row = 0;
    std::size_t slope = 0;

    // Lexicographic (slope, row): the order used to pick the kept duplicates.
    auto operator<=>(const DuplicateId& o) const
    {
        if (auto c = slope <=> o.slope; c != 0) return c;
        return row <=> o.row;
    }
    bool operator==(const DuplicateId&) const = default;
};

inline std::size_t grid_index(GridNode g, std::size_t n) { return g.row * n + g.col; }

inline GridNode grid_node(std::size_t index, std::size_t n) { return {index / n, index % n}; }

/// Wrapped-around vertical distance: (b.row - a.row) mod N when a.col <= b.col,
/// otherwise infinite (nullopt).
inline std::optional<std::size_t> vertical_distance(GridNode a, GridNode b, std::size_t rows)
{
    if (a.col > b.col) return std::nullopt;
    return (b.row + rows - a.row % rows) % rows;
}

/// Largest admissible slope, (N-1)/(n-1).
inline std::size_t max_slope(std::size_t rows, std::size_t n)
{
    if (n < 2) throw std::invalid_argument("roll needs at least 2 base nodes");
    if (rows == 0) throw std::invalid_argument("roll needs at least 1 row");
    return (rows - 1) / (n - 1);
}

inline bool roll_size_divisible(std::size_t n, std::size_t rows)
{
    return n >= 2 && rows >= 1 && (rows - 1) % (n - 1) == 0;
}

/// Duplicates before trimming: N * ((N-1)/(n-1) + 1).
inline std::size_t untrimmed_duplicate_count(std::size_t n, std::size_t rows)
{
    if (!roll_size_divisible(n, rows))
        throw std::invalid_argument("(N-1) must be a multiple of (n-1)");
    return rows * (max_slope(rows, n) + 1);
}

/// Duplicates kept after trimming: N^2 / n.
inline std::size_t active_duplicate_count(std::size_t n, std::size_t rows)
{
    if (rows * rows % n != 0) throw std::invalid_argument("N^2 must be divisible by n");
    return rows * rows / n;
}

namespace detail {

inline void orient(GridNode& a, GridNode& b)
{
    if (a.col > b.col) std::swap(a, b);
}

} // namespace detail

/// Unordered-pair grid-bone test (evaluated smaller column first).
inline bool is_grid_bone(GridNode a, GridNode b, std::size_t rows, std::size_t n)
{
    detail::orient(a, b);
    if (a.col == b.col) return false;
    if (a.row >= rows || b.row >= rows || b.col >= n) return false;
    const std::size_t gap = b.col - a.col;
    const std::size_t d = *vertical_distance(a, b, rows);
    return d % gap == 0 && d / gap <= max_slope(rows, n);
}

inline DuplicateId duplicate_of(GridNode a, GridNode b, std::size_t rows, std::size_t n)
{
    if (!is_grid_bone(a, b, rows, n)) throw std::invalid_argument("pair is not a grid-bone");
    detail::orient(a, b);
    const std::size_t slope = *vertical_distance(a, b, rows) / (b.col - a.col);
    const std::size_t shift = (a.col * slope) % rows;
    return {(a.row + rows - shift) % rows, slope};
}

inline GridNode duplicate_node(DuplicateId d, std::size_t col, std::size_t rows)
{
    return {(d.row + col * d.slope) % rows, col};
}

inline std::vector<GridNode> duplicate_nodes(DuplicateId d, std::size_t rows, std::size_t n)
{
    std::vector<GridNode> out;
    out.reserve(n);
    for (std::size_t j = 0; j < n; ++j) out.push_back(duplicate_node(d, j, rows));
    return out;
}

/// All N * ((N-1)/(n-1) + 1) duplicates in (slope, row) order.
inline std::vector<DuplicateId> all_duplicates(std::size_t n, std::size_t rows)
{
    const std::size_t slopes = max_slope(rows, n) + 1;
    std::vector<DuplicateId> out;
    out.reserve(rows * slopes);
    for (std::size_t c = 0; c < slopes; ++c)
        for (std::size_t i = 0; i < rows; ++i) out.push_back({i, c});
    return out;
}

/// N = n * (1 + t * (n - 1)); satisfies both divisibility requirements.
inline std::size_t valid_roll_size(std::size_t n, std::size_t t)
{
    if (n < 3) throw std::invalid_argument("valid_roll_size needs n >= 3");
    return n * (1 + t * (n - 1));
}

struct RolledGraph {
    SignedGraph base;
    std::size_t rows = 0;
    SignedGraph graph;                          ///< N * n grid nodes
    std::vector<DuplicateId> active;            ///< exactly N^2/n, sorted
    std::map<NodePair, DuplicateId> bone_index; ///< every grid-bone, trimmed or not

    std::size_t base_nodes() const { return base.node_count(); }

    bool is_active(DuplicateId d) const { return std::binary_search(active.begin(), active.end(), d); }

    NodePair grid_pair(DuplicateId d, std::size_t j1, std::size_t j2) const
    {
        const std::size_t n = base_nodes();
        return {grid_index(duplicate_node(d, j1, rows), n), grid_index(duplicate_node(d, j2, rows), n)};
    }
};

/// Builds the N-fold roll: every grid-bone of a kept duplicate carries the
/// weight of its base pair; bones of trimmed duplicates and non-bones carry 0.
/// The first N^2/n duplicates in (slope, row) order are kept. All N * n grid
/// nodes are present either way.
inline RolledGraph build_roll(const SignedGraph& g, std::size_t rows)
{
    const std::size_t n = g.node_count();
    if (n < 2) throw std::invalid_argument("roll needs at least 2 base nodes");
    if (!roll_size_divisible(n, rows))
        throw std::invalid_argument("N=" + std::to_string(rows) + ": (N-1) must be a multiple of (n-1)=" +
                                    std::to_string(n - 1));
    if (rows * rows % n != 0)
        throw std::invalid_argument("N=" + std::to_string(rows) + ": N^2 must be divisible by n=" + std::to_string(n));

    RolledGraph r;
    r.base = g;
    r.rows = rows;

    const auto duplicates = all_duplicates(n, rows);
    const std::size_t keep = active_duplicate_count(n, rows);
    r.active.assign(duplicates.begin(), duplicates.begin() + static_cast<std::ptrdiff_t>(keep));

    std::vector<WeightedEdge> edges;
    edges.reserve(keep * g.edge_count());
    for (std::size_t k = 0; k < duplicates.size(); ++k) {
        const DuplicateId d = duplicates[k];
        for (std::size_t j1 = 0; j1 < n; ++j1) {
            for (std::size_t j2 = j1 + 1; j2 < n; ++j2) {
                const NodePair bone = r.grid_pair(d, j1, j2);
                r.bone_index.emplace(bone, d);
                if (k < keep) {
                    if (Rational w = g.weight(j1, j2); w != 0) edges.push_back({bone.u, bone.v, std::move(w)});
                }
            }
        }
    }
    r.graph = SignedGraph(rows * n, edges);
    return r;
}

/// Clustering of G induced by a clustering of G^N on duplicate `d`.
inline Clustering induced_clustering(const RolledGraph& r, const Clustering& c, DuplicateId d)
{
    if (!r.is_active(d))
        throw std::invalid_argument("duplicate (" + std::to_string(d.row) + "," + std::to_string(d.slope) +
                                    ") is not active");
    require_matching(r.graph, c);
    const std::size_t n = r.base_nodes();
    std::vector<std::size_t> labels(n);
    for (std::size_t j = 0; j < n; ++j) labels[j] = c[grid_index(duplicate_node(d, j, r.rows), n)];
    return Clustering(labels);
}

} // namespace ccroll
