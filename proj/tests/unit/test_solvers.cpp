#include "ccroll/generate.hpp"
#include "ccroll/roll.hpp"
#include "ccroll/rounding.hpp"
#include "ccroll/solvers.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ccroll;

namespace {

constexpr ObjectiveKind kMax = ObjectiveKind::MaxAgree;
constexpr ObjectiveKind kMin = ObjectiveKind::MinDisagree;

std::size_t bell(std::size_t n)
{
    std::size_t count = 0;
    for_each_set_partition(n, [&](const std::vector<std::size_t>&) { ++count; });
    return count;
}

} // namespace

TEST(Oracles, EnumeratorsCountBellNumbers)
{
    const std::vector<std::size_t> bells{1, 1, 2, 5, 15, 52, 203, 877, 4140};
    for (std::size_t n = 0; n < bells.size(); ++n) {
        EXPECT_EQ(bell(n), bells[n]);
        std::size_t masks = 0;
        oracle::for_each_mask_partition(n, [&](const std::vector<std::uint32_t>&) { ++masks; });
        EXPECT_EQ(masks, bells[n]);
    }
}

TEST(Oracles, RestrictedGrowthStringsAreDistinctAndValid)
{
    std::set<std::vector<std::size_t>> seen;
    for_each_set_partition(6, [&](const std::vector<std::size_t>& a) {
        std::size_t top = 0;
        EXPECT_EQ(a[0], 0u);
        for (std::size_t k = 1; k < a.size(); ++k) {
            EXPECT_LE(a[k], top + 1);
            top = std::max(top, a[k]);
        }
        EXPECT_TRUE(seen.insert(a).second);
    });
}

TEST(Exact, TriangleExamples)
{
    const SignedGraph plus(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
    const SignedGraph minus(3, {{0, 1, -1}, {1, 2, -1}, {0, 2, -1}});
    EXPECT_EQ(solve_exact(plus, kMax).value, 3);
    EXPECT_EQ(solve_exact(plus, kMax).clustering, Clustering::single_cluster(3));
    EXPECT_EQ(solve_exact(minus, kMax).value, 3);
    EXPECT_EQ(solve_exact(minus, kMax).clustering, Clustering::singletons(3));
}

TEST(Exact, K4OneNegativeFrozen)
{
    std::vector<WeightedEdge> edges;
    for (std::size_t u = 0; u < 4; ++u)
        for (std::size_t v = u + 1; v < 4; ++v) edges.push_back({u, v, (u == 0 && v == 1) ? -1 : 1});
    const SignedGraph k4(4, edges);
    EXPECT_EQ(solve_exact(k4, kMin).value, 1);
    EXPECT_EQ(oracle::mask_optimum(k4, kMin), 1);
    EXPECT_EQ(solve_exact(k4, kMax).value, 5);
}

TEST(Exact, FrozenRationalOptima)
{
    const SignedGraph frac(3, {{0, 1, make_rational(1, 2)}, {1, 2, make_rational(-2, 3)}, {0, 2, make_rational(1, 4)}});
    EXPECT_EQ(solve_exact(frac, kMax).value, make_rational(7, 6));
    EXPECT_EQ(solve_exact(frac, kMin).value, make_rational(1, 4));

    const SignedGraph six(6, {{0, 1, make_rational(1, 2)},
                              {0, 2, make_rational(-1, 3)},
                              {0, 5, 1},
                              {1, 3, make_rational(-3, 4)},
                              {1, 4, make_rational(2, 5)},
                              {2, 3, make_rational(1, 6)},
                              {2, 5, -1},
                              {3, 4, make_rational(5, 7)},
                              {4, 5, make_rational(-2, 9)},
                              {1, 5, make_rational(1, 8)}});
    EXPECT_EQ(solve_exact(six, kMax).value, make_rational(2425, 504));
    EXPECT_EQ(solve_exact(six, kMin).value, make_rational(2, 5));
}

TEST(Exact, AgreesWithIndependentEnumerator)
{
    for (std::uint64_t s = 0; s < 200; ++s) {
        const std::size_t n = 1 + s % 6;
        const SignedGraph g = s % 3 == 0 ? oracle::random_pm_graph(n, s, 0.2) : oracle::random_graph(n, s);
        for (ObjectiveKind obj : {kMax, kMin}) {
            const SolveResult r = solve_exact(g, obj);
            EXPECT_EQ(r.value, oracle::mask_optimum(g, obj)) << "seed " << s;
            EXPECT_EQ(r.value, clustering_value(g, r.clustering, obj));
        }
    }
}

TEST(Exact, AgreesWithBruteForceUpToNine)
{
    for (std::uint64_t s = 0; s < 40; ++s) {
        const SignedGraph g = oracle::random_graph(7 + s % 3, 1000 + s, 0.5);
        for (ObjectiveKind obj : {kMax, kMin}) EXPECT_EQ(solve_exact(g, obj).value, brute_force_optimum(g, obj).value);
    }
}

TEST(Exact, ObjectivesShareOptimalPartitions)
{
    for (std::uint64_t s = 0; s < 30; ++s) {
        const SignedGraph g = oracle::random_graph(6, 77 + s);
        EXPECT_EQ(solve_exact(g, kMax).value + solve_exact(g, kMin).value, g.total_abs_weight());
    }
}

TEST(Exact, EdgeCases)
{
    EXPECT_EQ(solve_exact(SignedGraph(0), kMax).value, 0);
    EXPECT_EQ(solve_exact(SignedGraph(5), kMin).value, 0);
    EXPECT_EQ(solve_exact(SignedGraph(5), kMax).clustering.size(), 5u);
    EXPECT_EQ(brute_force_optimum(SignedGraph(0), kMax).value, 0);
}

TEST(Exact, ComponentLimitAndBudget)
{
    std::vector<WeightedEdge> path;
    for (std::size_t v = 0; v + 1 < 40; ++v) path.push_back({v, v + 1, 1});
    EXPECT_THROW(solve_exact(SignedGraph(40, path), kMax), SolverError);
    EXPECT_EQ(solve_exact(SignedGraph(40, path), kMax, 40).value, 39);
    EXPECT_THROW(solve_exact(oracle::random_graph(12, 5), kMax, 32, 10), SolverError);
    EXPECT_THROW(brute_force_optimum(SignedGraph(12), kMax), SolverError);
}

TEST(Exact, RoundedRollsStayTractable)
{
    // the sizes the reduction hands to the exact solver
    for (std::uint64_t s = 0; s < 10; ++s) {
        const SignedGraph g = normalize_weights(generate({3, UniformRational{1.0, 4}, s})).graph;
        const RolledGraph r = build_roll(g, 9);
        const SignedGraph rounded = round_graph(r.graph, {1, 1, s}).after;
        const SolveResult res = solve_exact(rounded, kMax);
        EXPECT_EQ(res.value, clustering_value(rounded, res.clustering, kMax));
        const auto base = solve_exact(rounded, kMin);
        EXPECT_EQ(res.value + base.value, rounded.total_abs_weight());
    }
}

TEST(Trivial, Examples)
{
    const SignedGraph plus(4, {{0, 1, 1}, {1, 2, make_rational(1, 2)}, {2, 3, 1}});
    EXPECT_EQ(solve_trivial_max(plus).clustering, Clustering::single_cluster(4));
    EXPECT_EQ(solve_trivial_max(plus).value, make_rational(5, 2));
    const SignedGraph minus(4, {{0, 1, -1}, {1, 3, make_rational(-1, 3)}});
    EXPECT_EQ(solve_trivial_max(minus).clustering, Clustering::singletons(4));
    EXPECT_EQ(solve_trivial_max(minus).value, make_rational(4, 3));
}

TEST(Trivial, HalfOfTotalAndOpt)
{
    for (std::uint64_t s = 0; s < 100; ++s) {
        const SignedGraph g = oracle::random_graph(2 + s % 7, 40 + s);
        const Rational t = solve_trivial_max(g).value;
        EXPECT_GE(2 * t, g.total_abs_weight());
        EXPECT_GE(2 * t, oracle::mask_optimum(g, kMax));
    }
}

TEST(Pivot, Examples)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SignedGraph plus = generate({6, CompleteSigned{1.0}, seed});
        const SignedGraph minus = generate({6, CompleteSigned{0.0}, seed});
        EXPECT_EQ(solve_pivot(plus, seed).value, 0);
        EXPECT_EQ(solve_pivot(plus, seed).clustering, Clustering::single_cluster(6));
        EXPECT_EQ(solve_pivot(minus, seed).value, 0);
        EXPECT_EQ(solve_pivot(minus, seed).clustering, Clustering::singletons(6));
    }
}

TEST(Pivot, RejectsIncompleteOrWeighted)
{
    EXPECT_THROW(solve_pivot(SignedGraph(3, {{0, 1, 1}, {1, 2, 1}}), 0), SolverError);
    EXPECT_THROW(solve_pivot(SignedGraph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, make_rational(1, 2)}}), 0), SolverError);
    EXPECT_NO_THROW(solve_pivot(SignedGraph(1), 0));
}

TEST(Pivot, ExpectedFactorThree)
{
    for (std::uint64_t s = 0; s < 8; ++s) {
        const SignedGraph g = generate({8, CompleteSigned{0.5}, s});
        const Rational opt = solve_exact(g, kMin).value;
        double sum = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) sum += to_double(solve_pivot(g, seed).value);
        EXPECT_LE(sum / 200.0, 3.1 * to_double(opt)) << s;
    }
}

TEST(LocalSearch, Examples)
{
    const SignedGraph plus = generate({6, CompleteSigned{1.0}, 0});
    EXPECT_EQ(solve_local_search(plus, kMax, 0, 50).clustering, Clustering::single_cluster(6));
    EXPECT_THROW(solve_local_search(plus, kMax, 0, 0), std::invalid_argument);
}

TEST(LocalSearch, BetweenTrivialAndOptimum)
{
    for (std::uint64_t s = 0; s < 50; ++s) {
        const SignedGraph g = oracle::random_graph(8, 2000 + s);
        const SolveResult ls = solve_local_search(g, kMax, s, 1000);
        EXPECT_GE(ls.value, solve_trivial_max(g).value);
        EXPECT_LE(ls.value, solve_exact(g, kMax).value);
        EXPECT_EQ(ls.value, clustering_value(g, ls.clustering, kMax));

        const SolveResult lm = solve_local_search(g, kMin, s, 1000);
        EXPECT_GE(lm.value, solve_exact(g, kMin).value);
    }
}

TEST(LocalSearch, ResultIsOneMoveStable)
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        const SignedGraph g = oracle::random_graph(7, 3000 + s);
        const SolveResult r = solve_local_search(g, kMax, 0, 10'000);
        auto labels = r.clustering.labels();
        const std::size_t k = r.clustering.cluster_count();
        for (std::size_t v = 0; v < 7; ++v)
            for (std::size_t c = 0; c <= k; ++c) {
                auto moved = labels;
                moved[v] = c;
                EXPECT_LE(clustering_value(g, Clustering(moved), kMax), r.value);
            }
    }
}

TEST(Solve, DispatchAndNames)
{
    const SignedGraph g = generate({5, CompleteSigned{0.5}, 3});
    for (SolverKind kind : {SolverKind::Exact, SolverKind::TrivialMax, SolverKind::Pivot, SolverKind::LocalSearch}) {
        const SolverSpec spec{kind, 7, 100};
        const SolveResult r = solve(g, kMin, spec);
        EXPECT_EQ(r.solver, spec);
        EXPECT_EQ(r.value, clustering_value(g, r.clustering, kMin));
        EXPECT_EQ(parse_solver_kind(to_string(kind)), kind);
        EXPECT_EQ(make_solver(spec)(g, kMin), r.clustering);
    }
    EXPECT_THROW(parse_solver_kind("greedy"), std::invalid_argument);
}
