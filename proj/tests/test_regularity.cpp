#include <gtest/gtest.h>

#include <cmath>
#include <optional>

#include "pparabolic/barriers.hpp"
#include "pparabolic/regularity.hpp"

using namespace pparabolic;

namespace {

template <class F>
std::optional<ErrorCode> code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

ClassifyOptions quick() {
    ClassifyOptions o;
    o.ladder = {1.0 / 64, 1.0 / 128};
    return o;
}

const SpacetimePoint origin(0.0, 0.0);

} // namespace

TEST(FitHolder, ExactPowerLaw) {
    std::vector<Gap> g;
    for (int j = 2; j <= 8; ++j) {
        const double r = std::ldexp(1.0, -j);
        g.push_back({r, std::sqrt(r)});
    }
    const HolderFit f = fit_holder(g);
    EXPECT_NEAR(f.beta, 0.5, 1e-12);
    EXPECT_NEAR(f.C, 1.0, 1e-12);
    EXPECT_NEAR(f.residual, 0.0, 1e-12);
    EXPECT_EQ(f.used, 7u);
}

TEST(FitHolder, ConstantGapsGiveZeroSlope) {
    std::vector<Gap> g;
    for (int j = 2; j <= 8; ++j) g.push_back({std::ldexp(1.0, -j), 0.78});
    const HolderFit f = fit_holder(g);
    EXPECT_NEAR(f.beta, 0.0, 1e-12);
    EXPECT_NEAR(f.C, 0.78, 1e-12);
}

TEST(FitHolder, InsufficientDecades) {
    const std::vector<Gap> two = {{0.25, 0.5}, {0.125, 0.3}, {0.0625, std::nullopt}, {0.03125, 0.0}};
    EXPECT_EQ(code_of([&] { (void)fit_holder(two); }), ErrorCode::InsufficientDecades);
    EXPECT_EQ(code_of([] { (void)fit_holder(std::vector<Gap>{}); }), ErrorCode::InsufficientDecades);
}

TEST(VerdictRules, LastFourAndStall) {
    auto mk = [](std::vector<double> v) {
        std::vector<Gap> g;
        double r = 0.25;
        for (double x : v) g.push_back({r /= 2, x});
        return g;
    };
    EXPECT_TRUE(detail::last_four_decreasing(mk({1, 0.9, 0.5, 0.4, 0.3, 0.2})));
    EXPECT_FALSE(detail::last_four_decreasing(mk({1, 0.9, 0.5, 0.5, 0.3, 0.2})));
    EXPECT_FALSE(detail::last_four_decreasing(mk({0.5, 0.4, 0.3})));
    EXPECT_TRUE(detail::last_four_stalled(mk({0.9, 0.79, 0.78, 0.78, 0.78}), 0.1));
    EXPECT_FALSE(detail::last_four_stalled(mk({0.9, 0.6, 0.4, 0.3, 0.2}), 0.1));
}

TEST(Probe, DataVanishesAtPointOnly) {
    const auto F = probe_data(SpacetimePoint(0.5, -0.25), 0.5);
    EXPECT_EQ(F(SpacetimePoint(0.5, -0.25)), 0.0);
    EXPECT_DOUBLE_EQ(F(SpacetimePoint(0.6, -0.25)), 0.2);
    EXPECT_DOUBLE_EQ(F(SpacetimePoint(0.5, -0.26)), 0.2);
    EXPECT_EQ(F(SpacetimePoint(3.0, 0.0)), 1.0);
}

TEST(Classify, NotABoundaryPoint) {
    const Domain d = domains::cylinder({-1.0}, {1.0}, -1.0, 0.0);
    EXPECT_EQ(code_of([&] { (void)classify(d, SpacetimePoint(0.0, -0.5), {2.0}, quick()); }),
              ErrorCode::NotABoundaryPoint);
    EXPECT_EQ(code_of([&] { (void)classify(d, SpacetimePoint(5.0, -0.5), {2.0}, quick()); }),
              ErrorCode::NotABoundaryPoint);
    EXPECT_EQ(code_of([&] { (void)classify(d, SpacetimePoint(0.0, 0.0, 0.0), {2.0}, quick()); }),
              ErrorCode::NotABoundaryPoint);
}

TEST(Classify, LateralCylinderPointIsRegular) {
    const Domain d = domains::cylinder({-1.0}, {1.0}, -1.0, 0.0);
    const auto r = classify(d, SpacetimePoint(1.0, -0.5), {3.0}, quick());
    EXPECT_EQ(r.verdict, Verdict::Regular);
    ASSERT_TRUE(r.holder.has_value());
    EXPECT_GT(r.holder->beta, 0.0);
}

TEST(Classify, CylinderTopIsIrregular) {
    const Domain d = domains::cylinder({-1.0}, {1.0}, -1.0, 0.0);
    const auto r = classify(d, origin, {2.0}, quick());
    EXPECT_EQ(r.verdict, Verdict::Irregular);
    EXPECT_FALSE(r.holder.has_value());
}

TEST(Classify, TuskHouseAndItsLowerHalfAreRegular) {
    const TuskHouseBarrierSpec spec;
    const Domain full = spec.domain();
    Box lower = full.bbox();
    lower.t_hi = 0.0;
    const Domain half = domains::restricted(full, lower);
    EXPECT_EQ(classify(full, origin, {2.0}, quick()).verdict, Verdict::Regular);
    EXPECT_EQ(classify(half, origin, {2.0}, quick()).verdict, Verdict::Regular);
}

TEST(Classify, Locality) {
    // same verdict with the domain cut down to a box around the point
    auto cut = [](const Domain& d, double half, double t_lo, double t_hi) {
        Box b = d.bbox();
        b.lo[0] = std::max(b.lo[0], -half);
        b.hi[0] = std::min(b.hi[0], half);
        b.t_lo = std::max(b.t_lo, t_lo);
        b.t_hi = std::min(b.t_hi, t_hi);
        return domains::restricted(d, b);
    };
    const Domain tusk = TuskHouseBarrierSpec{}.domain();
    const Domain cyl = domains::cylinder({-1.0}, {1.0}, -1.0, 0.0);
    const Domain petr = domains::petrovskii(64.0, 1);
    const std::vector<std::pair<Domain, Domain>> cases = {
        {tusk, cut(tusk, 1.0, -0.5, 0.5)}, {cyl, cut(cyl, 0.5, -0.25, 0.0)}, {petr, cut(petr, 0.6, -0.1, 0.0)}};
    for (const auto& [full, local] : cases) {
        const Verdict v_full = classify(full, origin, {2.0}, quick()).verdict;
        const Verdict v_local = classify(local, origin, {2.0}, quick()).verdict;
        EXPECT_NE(v_full, Verdict::Inconclusive) << full.descriptor().dump();
        EXPECT_EQ(v_full, v_local) << full.descriptor().dump();
    }
}

TEST(Classify, Deterministic) {
    const Domain d = domains::petrovskii(64.0, 1);
    const auto a = classify(d, origin, {2.0}, quick());
    const auto b = classify(d, origin, {2.0}, quick());
    EXPECT_EQ(a.verdict, b.verdict);
    ASSERT_EQ(a.gaps.size(), b.gaps.size());
    for (std::size_t i = 0; i < a.gaps.size(); ++i) EXPECT_EQ(a.gaps[i].value, b.gaps[i].value);
}

TEST(Sweep, EmptyAndThreshold) {
    EXPECT_TRUE(petrovskii_sweep(2.0, 1, {}, quick()).empty());
    const auto rows = petrovskii_sweep(3.0, 1, {64.0}, quick());
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_DOUBLE_EQ(rows[0].threshold, 8.0);
    EXPECT_EQ(code_of([] { (void)petrovskii_sweep(2.0, 1, {-1.0}, quick()); }), ErrorCode::InvalidParameter);
}
