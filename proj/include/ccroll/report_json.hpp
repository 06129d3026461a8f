#pragma once

#include "ccroll/reduction.hpp"
#include "ccroll/roll.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <sstream>
#include <string>

// Rationals travel as exact strings ("3", "-2/5").
template <>
struct nlohmann::adl_serializer<ccroll::Rational> {
    static void to_json(json& j, const ccroll::Rational& r) { j = ccroll::format_rational(r); }
    static void from_json(const json& j, ccroll::Rational& r) { r = ccroll::parse_rational(j.get<std::string>()); }
};

namespace ccroll {

using json = nlohmann::json;

namespace detail {

template <typename T>
json optional_to_json(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from_json(const json& j)
{
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

} // namespace detail

inline void to_json(json& j, const Clustering& c) { j = c.labels(); }
inline void from_json(const json& j, Clustering& c) { c = Clustering(j.get<std::vector<std::size_t>>()); }

inline void to_json(json& j, const DuplicateId& d) { j = json{{"row", d.row}, {"slope", d.slope}}; }
inline void from_json(const json& j, DuplicateId& d)
{
    j.at("row").get_to(d.row);
    j.at("slope").get_to(d.slope);
}

inline void to_json(json& j, const SolverSpec& s)
{
    j = json{{"kind", std::string(to_string(s.kind))}, {"seed", s.seed}, {"budget", s.budget}};
}
inline void from_json(const json& j, SolverSpec& s)
{
    s.kind = parse_solver_kind(j.at("kind").get<std::string>());
    j.at("seed").get_to(s.seed);
    j.at("budget").get_to(s.budget);
}

inline void to_json(json& j, const ReductionConfig& c)
{
    j = json{{"objective", std::string(to_string(c.objective))},
             {"t", c.t},
             {"alpha", c.alpha},
             {"beta", c.beta},
             {"solver", c.solver},
             {"epsilon", c.epsilon},
             {"lambda", c.lambda_ref},
             {"seed", c.seed}};
}
inline void from_json(const json& j, ReductionConfig& c)
{
    c.objective = parse_objective(j.at("objective").get<std::string>());
    j.at("t").get_to(c.t);
    j.at("alpha").get_to(c.alpha);
    j.at("beta").get_to(c.beta);
    j.at("solver").get_to(c.solver);
    j.at("epsilon").get_to(c.epsilon);
    j.at("lambda").get_to(c.lambda_ref);
    j.at("seed").get_to(c.seed);
}

inline void to_json(json& j, const DeviationStats& s)
{
    json classes = json::array();
    for (const auto& [gamma, c] : s.classes)
        classes.push_back({{"gamma", gamma}, {"z1", c.z1}, {"z2", c.z2}, {"z3", c.z3},
                           {"y1", c.y1}, {"y2", c.y2}, {"y3", c.y3}});
    j = json{{"classes", classes}, {"S1", s.s1}, {"S2", s.s2}, {"combined", s.combined},
             {"gap_target", s.gap_target}, {"lambda", s.lambda}, {"epsilon", s.epsilon}};
}
inline void from_json(const json& j, DeviationStats& s)
{
    s.classes.clear();
    for (const auto& c : j.at("classes")) {
        ClassDeviation d;
        c.at("z1").get_to(d.z1);
        c.at("z2").get_to(d.z2);
        c.at("z3").get_to(d.z3);
        c.at("y1").get_to(d.y1);
        c.at("y2").get_to(d.y2);
        c.at("y3").get_to(d.y3);
        s.classes.emplace(c.at("gamma").get<Rational>(), d);
    }
    j.at("S1").get_to(s.s1);
    j.at("S2").get_to(s.s2);
    j.at("combined").get_to(s.combined);
    j.at("gap_target").get_to(s.gap_target);
    j.at("lambda").get_to(s.lambda);
    j.at("epsilon").get_to(s.epsilon);
}

inline void to_json(json& j, const TrialRecord& r)
{
    j = json{{"seed", r.seed},
             {"candidate_values", r.candidate_values},
             {"best_index", r.best_index},
             {"best_value", r.best_value},
             {"rolled_value_pre", r.rolled_value_pre},
             {"rolled_value_post", r.rolled_value_post},
             {"sum_identity_holds", r.sum_identity_holds},
             {"support_identity_holds", r.support_identity_holds},
             {"ratio", r.ratio},
             {"bad_event", r.bad_event},
             {"stats", detail::optional_to_json(r.stats)},
             {"tail_bound", r.tail_bound}};
}
inline void from_json(const json& j, TrialRecord& r)
{
    j.at("seed").get_to(r.seed);
    j.at("candidate_values").get_to(r.candidate_values);
    j.at("best_index").get_to(r.best_index);
    j.at("best_value").get_to(r.best_value);
    j.at("rolled_value_pre").get_to(r.rolled_value_pre);
    j.at("rolled_value_post").get_to(r.rolled_value_post);
    j.at("sum_identity_holds").get_to(r.sum_identity_holds);
    j.at("support_identity_holds").get_to(r.support_identity_holds);
    j.at("ratio").get_to(r.ratio);
    j.at("bad_event").get_to(r.bad_event);
    r.stats = detail::optional_from_json<DeviationStats>(j.at("stats"));
    j.at("tail_bound").get_to(r.tail_bound);
}

inline void to_json(json& j, const HistogramBin& b) { j = json{{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}}; }
inline void from_json(const json& j, HistogramBin& b)
{
    j.at("lo").get_to(b.lo);
    j.at("hi").get_to(b.hi);
    j.at("count").get_to(b.count);
}

inline void to_json(json& j, const TrialAggregate& a)
{
    j = json{{"trials", a.trials},
             {"bad_event_freq", a.bad_event_freq},
             {"ratio_histogram", a.ratio_histogram},
             {"ratio", {{"min", a.ratio_min}, {"mean", a.ratio_mean}, {"max", a.ratio_max}}},
             {"deviation", {{"min", a.deviation_min}, {"mean", a.deviation_mean}, {"max", a.deviation_max}}},
             {"gap_target_mean", a.gap_target_mean},
             {"tail_bound_mean", a.tail_bound_mean},
             {"sum_identity_all", a.sum_identity_all},
             {"support_identity_all", a.support_identity_all}};
}
inline void from_json(const json& j, TrialAggregate& a)
{
    j.at("trials").get_to(a.trials);
    j.at("bad_event_freq").get_to(a.bad_event_freq);
    j.at("ratio_histogram").get_to(a.ratio_histogram);
    const auto& ratio = j.at("ratio");
    ratio.at("min").get_to(a.ratio_min);
    ratio.at("mean").get_to(a.ratio_mean);
    ratio.at("max").get_to(a.ratio_max);
    const auto& dev = j.at("deviation");
    dev.at("min").get_to(a.deviation_min);
    dev.at("mean").get_to(a.deviation_mean);
    dev.at("max").get_to(a.deviation_max);
    j.at("gap_target_mean").get_to(a.gap_target_mean);
    j.at("tail_bound_mean").get_to(a.tail_bound_mean);
    j.at("sum_identity_all").get_to(a.sum_identity_all);
    j.at("support_identity_all").get_to(a.support_identity_all);
}

inline void to_json(json& j, const TrialsReport& r)
{
    j = json{{"config", r.config},     {"base_nodes", r.base_nodes}, {"rows", r.rows},
             {"opt", r.opt},           {"opt_below_one", r.opt_below_one},
             {"trials", r.trials},     {"aggregate", r.aggregate}};
}
inline void from_json(const json& j, TrialsReport& r)
{
    j.at("config").get_to(r.config);
    j.at("base_nodes").get_to(r.base_nodes);
    j.at("rows").get_to(r.rows);
    j.at("opt").get_to(r.opt);
    j.at("opt_below_one").get_to(r.opt_below_one);
    j.at("trials").get_to(r.trials);
    j.at("aggregate").get_to(r.aggregate);
}

/// Active duplicates of a roll, for the `roll` sidecar.
inline json roll_sidecar(const RolledGraph& r)
{
    return json{{"base_nodes", r.base_nodes()},
                {"rows", r.rows},
                {"grid_nodes", r.graph.node_count()},
                {"untrimmed_duplicates", untrimmed_duplicate_count(r.base_nodes(), r.rows)},
                {"active", r.active}};
}

inline void write_histogram_csv(std::ostream& out, const TrialAggregate& a)
{
    out << "lo,hi,count\n";
    for (const auto& b : a.ratio_histogram) out << b.lo << ',' << b.hi << ',' << b.count << '\n';
}

} // namespace ccroll
