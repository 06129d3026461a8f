#pragma once

#include "ccroll/core.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ccroll {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Text format: header line `n m`, then m lines `u v w` with 0-based ids and w
// written as an integer, a decimal or `p/q`. Blank lines and `#` comments are skipped.

inline SignedGraph read_graph(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&](std::string& out) {
        while (std::getline(in, out)) {
            ++line_no;
            auto first = out.find_first_not_of(" \t\r");
            if (first == std::string::npos || out[first] == '#') continue;
            return true;
        }
        return false;
    };
    auto fail = [&](const std::string& what) {
        throw FormatError("line " + std::to_string(line_no) + ": " + what);
    };

    if (!next_line(line)) throw FormatError("empty graph file");
    std::size_t n = 0, m = 0;
    {
        std::istringstream hs(line);
        std::string extra;
        if (!(hs >> n >> m) || (hs >> extra)) fail("expected header `n m`");
    }

    std::vector<WeightedEdge> edges;
    edges.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (!next_line(line)) throw FormatError("expected " + std::to_string(m) + " edges, got " + std::to_string(k));
        std::istringstream ls(line);
        long long u = -1, v = -1;
        std::string w, extra;
        if (!(ls >> u >> v >> w) || (ls >> extra)) fail("expected `u v w`");
        if (u < 0 || v < 0) fail("negative node id");
        try {
            edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v), parse_rational(w)});
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    if (next_line(line)) fail("trailing content after " + std::to_string(m) + " edges");

    try {
        return SignedGraph(n, edges);
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

inline void write_graph(std::ostream& out, const SignedGraph& g)
{
    out << g.node_count() << ' ' << g.edge_count() << '\n';
    for (const auto& [pair, w] : g.weights()) out << pair.u << ' ' << pair.v << ' ' << format_rational(w) << '\n';
}

inline SignedGraph read_graph_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
    return read_graph(in);
}

inline void write_graph_file(const std::string& path, const SignedGraph& g)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file '" + path + "'");
    write_graph(out, g);
}

inline std::string graph_to_string(const SignedGraph& g)
{
    std::ostringstream os;
    write_graph(os, g);
    return os.str();
}

} // namespace ccroll
