#pragma once

#include "ccroll/core.hpp"
#include "ccroll/rng.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace ccroll {

struct RoundingParams {
    Rational alpha = 1; ///< magnitude of rounded negative weights
    Rational beta = 1;  ///< magnitude of rounded positive weights
    std::uint64_t seed = 0;

    bool operator==(const RoundingParams&) const = default;
};

inline void validate(const RoundingParams& p)
{
    if (p.alpha < 1) throw std::invalid_argument("alpha must be >= 1, got " + format_rational(p.alpha));
    if (p.beta < 1) throw std::invalid_argument("beta must be >= 1, got " + format_rational(p.beta));
}

/// Two-point rounding of a single weight class. gamma > 0 becomes beta with
/// probability gamma/beta, else 0; gamma < 0 becomes -alpha with probability
/// -gamma/alpha, else 0. The mean is gamma exactly.
class WeightRounder {
public:
    WeightRounder(const Rational& gamma, const Rational& alpha, const Rational& beta)
        : hit_value_(gamma > 0 ? beta : (gamma < 0 ? Rational(-alpha) : Rational(0))),
          coin_(gamma == 0 ? Rational(0) : Rational(abs(gamma) / abs(hit_value_)))
    {
        if (abs(gamma) > 1) throw std::invalid_argument("weight " + format_rational(gamma) + " exceeds 1 in magnitude");
    }

    bool hit(std::uint64_t draw) const { return coin_(draw); }

    Rational operator()(std::uint64_t draw) const { return hit(draw) ? hit_value_ : Rational(0); }

    const Rational& hit_value() const { return hit_value_; }

private:
    Rational hit_value_;
    ExactBernoulli coin_;
};

/// Per-edge draw; depends only on (seed, pair), never on processing order.
inline std::uint64_t edge_draw(std::uint64_t seed, NodePair e) { return derive_seed(seed, {e.u, e.v}); }

struct RoundingOutcome {
    SignedGraph before;
    SignedGraph after;
    RoundingParams params;
};

/// Rounds every edge independently. Requires |w| <= 1 and alpha, beta >= 1.
inline RoundingOutcome round_graph(const SignedGraph& g, const RoundingParams& p)
{
    validate(p);
    if (g.max_abs_weight() > 1) throw std::invalid_argument("graph is not normalized: some |w| > 1");

    std::map<Rational, WeightRounder> rounders;
    std::vector<WeightedEdge> rounded;
    rounded.reserve(g.edge_count());
    for (const auto& [pair, w] : g.weights()) {
        auto it = rounders.find(w);
        if (it == rounders.end()) it = rounders.emplace(w, WeightRounder(w, p.alpha, p.beta)).first;
        Rational value = it->second(edge_draw(p.seed, pair));
        if (value != 0) rounded.push_back({pair.u, pair.v, std::move(value)});
    }
    return {g, SignedGraph(g.node_count(), rounded), p};
}

struct ClassTally {
    std::size_t count = 0;
    Rational total = 0; ///< count * |gamma|

    bool operator==(const ClassTally&) const = default;
};

/// Contributing edges grouped by their (signed) weight.
inline std::map<Rational, ClassTally> contributing_weight_by_class(const SignedGraph& g, const Clustering& c,
                                                                    ObjectiveKind obj)
{
    require_matching(g, c);
    std::map<Rational, ClassTally> out;
    for (const auto& [pair, w] : g.weights()) {
        if (!is_contributing(w, c.same_cluster(pair.u, pair.v), obj)) continue;
        auto& tally = out[w];
        ++tally.count;
        tally.total += abs(w);
    }
    return out;
}

/// Deviation accounting for one weight class. z1: contributing in C' only,
/// z2: in U^N only, z3: in both (pre-rounding sets). y1..y3 are the matching
/// sums of Y = |w'| - |gamma| over those edges.
struct ClassDeviation {
    std::size_t z1 = 0, z2 = 0, z3 = 0;
    Rational y1 = 0, y2 = 0, y3 = 0;

    bool operator==(const ClassDeviation&) const = default;
};

/// Rounding luck needed for C' (not a (lambda+eps)-approximation) to pass as a
/// lambda-approximation against U^N on the rounded roll.
///
/// MaxAgree: w'(C') >= w'(U^N)/lambda with w(C') < w(U^N)/(lambda+eps) forces
///   combined = s1 - s2 > eps w(U^N) / (lambda (lambda+eps)).
/// MinDisagree: w'(C') <= lambda w'(U^N) with w(C') > (lambda+eps) w(U^N) forces
///   combined = lambda^2 s2 - s1 > eps w(U^N).
struct DeviationStats {
    std::map<Rational, ClassDeviation> classes;
    Rational s1 = 0;         ///< sum over C'-contributing edges of (|w'| - |gamma|)
    Rational s2 = 0;         ///< (1/lambda) * same sum over U^N-contributing edges
    Rational combined = 0;   ///< deviation that must exceed gap_target
    Rational gap_target = 0;
    Rational lambda = 0;
    Rational epsilon = 0;

    bool operator==(const DeviationStats&) const = default;
};

inline DeviationStats deviation_stats(const RoundingOutcome& out, const Clustering& c_prime, const Clustering& u_n,
                                      const Rational& lambda, const Rational& epsilon, ObjectiveKind obj)
{
    if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
    if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    require_matching(out.before, c_prime);
    require_matching(out.before, u_n);

    DeviationStats s;
    s.lambda = lambda;
    s.epsilon = epsilon;
    Rational u_sum = 0;
    Rational u_pre = 0;
    for (const auto& [pair, w] : out.before.weights()) {
        const bool in_c = is_contributing(w, c_prime.same_cluster(pair.u, pair.v), obj);
        const bool in_u = is_contributing(w, u_n.same_cluster(pair.u, pair.v), obj);
        if (!in_c && !in_u) continue;
        const Rational y = abs(out.after.weight(pair.u, pair.v)) - abs(w);
        auto& cls = s.classes[w];
        if (in_c && in_u) {
            ++cls.z3;
            cls.y3 += y;
        } else if (in_c) {
            ++cls.z1;
            cls.y1 += y;
        } else {
            ++cls.z2;
            cls.y2 += y;
        }
        if (in_c) s.s1 += y;
        if (in_u) {
            u_sum += y;
            u_pre += abs(w);
        }
    }
    s.s2 = u_sum / lambda;
    if (obj == ObjectiveKind::MaxAgree) {
        s.combined = s.s1 - s.s2;
        s.gap_target = epsilon * u_pre / (lambda * (lambda + epsilon));
    } else {
        s.combined = lambda * u_sum - s.s1;
        s.gap_target = epsilon * u_pre;
    }
    return s;
}

/// Hoeffding bound exp(-2 t^2 / (z * range^2)) for a sum of z independent
/// zero-mean terms each confined to an interval of length `range`; capped at 1.
inline double hoeffding_tail_range(std::size_t z, double t, double range)
{
    if (t <= 0) return 1.0;
    if (z == 0) return 0.0;
    const double bound = std::exp(-2.0 * t * t / (static_cast<double>(z) * range * range));
    return std::min(bound, 1.0);
}

/// Tail bound with interval length alpha + beta for every class.
inline double hoeffding_tail(std::size_t z, const Rational& t, const Rational& alpha, const Rational& beta)
{
    return hoeffding_tail_range(z, to_double(t), to_double(alpha + beta));
}

/// Interval length of Y for a class: beta for positive weights, alpha for
/// negative ones. Tighter than alpha + beta.
inline Rational class_range(const Rational& gamma, const Rational& alpha, const Rational& beta)
{
    return gamma > 0 ? beta : alpha;
}

/// Union of the per-class, per-part tail bounds with the deviation target split
/// evenly over the 3 * |classes| parts. `tight` swaps in the per-class range.
inline double deviation_tail_bound(const DeviationStats& s, const Rational& alpha, const Rational& beta,
                                   bool tight = false)
{
    if (s.classes.empty()) return 0.0;
    const double share = to_double(s.gap_target) / (3.0 * static_cast<double>(s.classes.size()));
    double total = 0.0;
    for (const auto& [gamma, cls] : s.classes) {
        const double range = tight ? to_double(class_range(gamma, alpha, beta)) : to_double(alpha + beta);
        for (std::size_t z : {cls.z1, cls.z2, cls.z3}) total += hoeffding_tail_range(z, share, range);
    }
    return total;
}

} // namespace ccroll
