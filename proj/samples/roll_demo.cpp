// Rolls a small graph, rounds it, solves the roll exactly and prints what each
// kept duplicate induces back on the original graph.

#include "ccroll/graph_io.hpp"
#include "ccroll/reduction.hpp"

#include <iostream>

using namespace ccroll;

int main(int argc, char** argv)
{
    const SignedGraph g = argc > 1 ? read_graph_file(argv[1])
                                   : SignedGraph(3, {{0, 1, make_rational(1, 2)},
                                                     {1, 2, make_rational(-2, 3)},
                                                     {0, 2, make_rational(1, 4)}});

    ReductionConfig cfg;
    cfg.t = 1;
    cfg.seed = 11;
    const ReductionReport rep = reduce_and_solve(g, cfg);

    std::cout << "N = " << rep.rows << ", " << rep.candidate_values.size() << " kept duplicates\n";
    for (std::size_t k = 0; k < rep.candidate_values.size(); ++k)
        std::cout << "  candidate " << k << ": " << format_rational(rep.candidate_values[k])
                  << (k == rep.best_index ? "  <- best" : "") << '\n';
    std::cout << "w(C2) on roll " << format_rational(rep.rolled_value_pre) << " (sum of candidates: "
              << (rep.sum_identity_holds ? "matches" : "MISMATCH") << ")\n";
    std::cout << "best value " << format_rational(rep.best_value) << ", OPT "
              << format_rational(solve_exact(g, cfg.objective).value) << '\n';
}
