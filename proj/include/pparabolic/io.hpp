#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pparabolic/barriers.hpp"
#include "pparabolic/operator.hpp"
#include "pparabolic/regularity.hpp"
#include "pparabolic/spacetime.hpp"

namespace pparabolic {

using json = nlohmann::json;

namespace detail {

// json has no representation of infinities; they become null
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json optional_number(const std::optional<T>& v) {
    return v ? number(*v) : json(nullptr);
}

} // namespace detail

inline json to_json(const SpacetimePoint& p) {
    json x = json::array();
    for (int i = 0; i < p.n; ++i) x.push_back(p.x[i]);
    return {{"x", x}, {"t", p.t}};
}

inline json to_json(const CheckReport& r) {
    return {{"pass", r.pass},
            {"n_samples", r.n_samples},
            {"n_failed", r.n_failed},
            {"worst_residual", detail::number(r.worst_residual)},
            {"worst_point", std::isfinite(r.worst_residual) ? to_json(r.worst_point) : json(nullptr)},
            {"branch_counts",
             {{"grad_nonzero", r.branch_counts.grad_nonzero},
              {"grad_zero_psd", r.branch_counts.grad_zero_psd},
              {"grad_zero_vacuous", r.branch_counts.grad_zero_vacuous}}}};
}

inline json to_json(const BarrierReport& r) {
    json limit = json::array();
    for (const auto& l : r.limit_profile) limit.push_back({{"r", l.r}, {"max_abs", l.max_abs}, {"count", l.count}});
    return {{"pass", r.pass},
            {"supersolution", to_json(r.supersolution)},
            {"positivity",
             {{"pass", r.positivity_pass},
              {"checked", r.positivity_checked},
              {"failed", r.positivity_failed},
              {"skipped_singular", r.positivity_skipped},
              {"min_value", detail::number(r.min_value)},
              {"min_point", std::isfinite(r.min_value) ? to_json(r.min_point) : json(nullptr)}}},
            {"limit", {{"pass", r.limit_pass}, {"profile", limit}}}};
}

inline json to_json(const IrregularityReport& r) {
    auto profile = [](const std::vector<std::pair<double, double>>& v) {
        json a = json::array();
        for (auto [L, u] : v) a.push_back({{"abs_log_t", L}, {"u", u}});
        return a;
    };
    return {{"pass", r.pass},
            {"tau", r.tau},
            {"halvings", r.halvings},
            {"conditions",
             {{"a", r.cond_a},
              {"b", r.cond_b},
              {"c", r.cond_c},
              {"b_case_small", r.b_case_small},
              {"b_case_large", r.b_case_large},
              {"b_worst_margin", detail::number(r.b_worst_margin)}}},
            {"subsolution", to_json(r.subsolution)},
            {"boundary_identity_error", r.boundary_identity_error},
            {"axis_limit", {{"pass", r.axis_limit_pass}, {"profile", profile(r.axis_profile)}}},
            {"boundary_limit", {{"pass", r.boundary_limit_pass}, {"profile", profile(r.boundary_profile)}}}};
}

inline json to_json(const AlphaBeta& a) {
    return {{"alpha1", a.alpha1}, {"alpha", a.alpha}, {"beta", a.beta}, {"h", a.h}, {"k_points", a.k_points}};
}

inline json to_json(const std::vector<Gap>& gaps) {
    json a = json::array();
    for (const auto& g : gaps) a.push_back({{"r", g.r}, {"gap", detail::optional_number(g.value)}});
    return a;
}

inline json to_json(const RegularityReport& r) {
    json runs = json::array();
    for (const auto& run : r.runs)
        runs.push_back({{"h", run.h},
                        {"gaps", to_json(run.gaps)},
                        {"final_gap", detail::optional_number(run.final_gap)},
                        {"regular_like", run.regular_like},
                        {"irregular_like", run.irregular_like}});
    json holder = nullptr;
    if (r.holder)
        holder = {{"beta", r.holder->beta}, {"C", r.holder->C}, {"residual", r.holder->residual},
                  {"used", r.holder->used}};
    return {{"verdict", verdict_name(r.verdict)}, {"gaps", to_json(r.gaps)}, {"holder", holder},
            {"runs", runs},                     {"scale", r.scale},          {"rho", r.rho}};
}

} // namespace pparabolic
