#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pparabolic/fields.hpp"
#include "pparabolic/geometry.hpp"
#include "pparabolic/operator.hpp"
#include "pparabolic/sampling.hpp"

using namespace pparabolic;

namespace {

Jet2 make_jet(std::vector<double> grad, std::initializer_list<double> hess_upper, double dt = 0.0) {
    Jet2 j(static_cast<int>(grad.size()));
    j.grad = std::move(grad);
    j.hess = SymMatrix(j.dim(), hess_upper);
    j.dt = dt;
    return j;
}

Jet2 random_jet(Rng& rng, int n) {
    Jet2 j(n);
    j.value = rng.uniform(-1, 1);
    j.dt = rng.uniform(-3, 3);
    for (int i = 0; i < n; ++i) j.grad[i] = rng.uniform(-2, 2);
    for (int i = 0; i < n; ++i)
        for (int k = i; k < n; ++k) j.hess.at(i, k) = rng.uniform(-3, 3);
    return j;
}

Jet2 rotate(const Jet2& j, double th) {
    const double c = std::cos(th), s = std::sin(th);
    Jet2 r = j;
    r.grad[0] = c * j.grad[0] - s * j.grad[1];
    r.grad[1] = s * j.grad[0] + c * j.grad[1];
    // R H R^T
    const double a = j.hess(0, 0), b = j.hess(0, 1), d = j.hess(1, 1);
    r.hess.at(0, 0) = c * c * a - 2 * c * s * b + s * s * d;
    r.hess.at(0, 1) = c * s * (a - d) + (c * c - s * s) * b;
    r.hess.at(1, 1) = s * s * a + 2 * c * s * b + c * c * d;
    return r;
}

} // namespace

TEST(InfLaplacian, Examples) {
    EXPECT_DOUBLE_EQ(normalized_inf_laplacian(make_jet({0.6, -1.4}, {2, 0, 2})), 2.0);
    EXPECT_DOUBLE_EQ(normalized_inf_laplacian(make_jet({1.0, 0.0}, {0, 0, 0})), 0.0);
    EXPECT_DOUBLE_EQ(normalized_inf_laplacian(make_jet({0.0, 1.0}, {1, 0, 4})), 4.0);
}

TEST(InfLaplacian, ZeroGradient) {
    try {
        (void)normalized_inf_laplacian(make_jet({0.0, 0.0}, {1, 0, 1}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroGradient);
    }
}

TEST(PLaplacian, Examples) {
    EXPECT_DOUBLE_EQ(normalized_p_laplacian(make_jet({0.2, 0.4}, {2, 0, 2}), {3.0}), 6.0);
    EXPECT_DOUBLE_EQ(normalized_p_laplacian(make_jet({1.0, 0.0}, {0, 0, 0}), {7.0}), 0.0);
}

TEST(Envelope, Examples) {
    const SymMatrix d(2, {1, 0, 4});
    EXPECT_DOUBLE_EQ(envelope_eigenvalue(d, 3.0), 1.0);
    EXPECT_DOUBLE_EQ(envelope_eigenvalue(d, 1.5), 4.0);
    EXPECT_DOUBLE_EQ(envelope_eigenvalue(SymMatrix(2), 2.5), 0.0);
    EXPECT_DOUBLE_EQ(envelope_eigenvalue(SymMatrix(2), 1.2), 0.0);
}

TEST(OperatorProperty, PEqualsTwoIsTrace) {
    Rng rng(101);
    for (int i = 0; i < 500; ++i) {
        const Jet2 j = random_jet(rng, 1 + i % 2);
        if (j.grad_norm() < 1e-6) continue;
        EXPECT_NEAR(normalized_p_laplacian(j, {2.0}), j.hess.trace(), 1e-12);
    }
}

TEST(OperatorProperty, RotationInvariance) {
    Rng rng(202);
    for (int i = 0; i < 500; ++i) {
        const Jet2 j = random_jet(rng, 2);
        const double p = rng.uniform(1.05, 6.0);
        const double th = rng.uniform(0, 2 * std::numbers::pi);
        EXPECT_NEAR(normalized_p_laplacian(j, {p}), normalized_p_laplacian(rotate(j, th), {p}), 1e-12);
    }
}

TEST(OperatorProperty, EnvelopeMatchesClosedForm) {
    Rng rng(303);
    for (int i = 0; i < 500; ++i) {
        const double a = rng.uniform(-5, 5), b = rng.uniform(-5, 5), d = rng.uniform(-5, 5);
        const double p = rng.uniform(1.01, 5.0);
        // roots of l^2 - (a + d) l + (ad - b^2)
        const double tr = a + d, det = a * d - b * b;
        const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
        const double lmin = tr / 2 - disc, lmax = tr / 2 + disc;
        const double got = envelope_eigenvalue(SymMatrix(2, {a, b, d}), p);
        EXPECT_NEAR(got, p >= 2.0 ? lmin : lmax, 1e-12 * std::max(1.0, std::abs(got)));
    }
}

TEST(OperatorProperty, PucciBounds) {
    // tr(A D^2u) with A having eigenvalues 1 and p - 1 lies between the Pucci extremal operators
    Rng rng(404);
    for (int i = 0; i < 500; ++i) {
        const Jet2 j = random_jet(rng, 2);
        const double p = rng.uniform(1.05, 6.0);
        const auto ev = sym_eigenvalues(j.hess);
        const double lam = std::min(p - 1.0, 1.0), Lam = std::max(p - 1.0, 1.0);
        double pos = 0.0, neg = 0.0;
        for (double e : ev) (e > 0 ? pos : neg) += e;
        const double v = normalized_p_laplacian(j, {p});
        EXPECT_GE(v, lam * pos + Lam * neg - 1e-12);
        EXPECT_LE(v, Lam * pos + lam * neg + 1e-12);
    }
}

TEST(OperatorProperty, ScalingOfResidual) {
    // v(x, t) = a u(lx, l^2 t) + b has residual a l^2 times that of u
    Rng rng(505);
    const ScalarField x = ScalarField::coord(0), y = ScalarField::coord(1), t = ScalarField::time();
    auto build = [](const ScalarField& X, const ScalarField& Y, const ScalarField& T) {
        return exp(-(X * X + 2.0 * Y * Y) / (3.0 - T)) + X * T;
    };
    for (int i = 0; i < 250; ++i) {
        const double a = rng.uniform(0.2, 3.0), l = rng.uniform(0.3, 2.0), b = rng.uniform(-1, 1);
        const double p = rng.uniform(1.1, 5.0);
        const ScalarField u = build(x, y, t);
        const ScalarField v = a * build(l * x, l * y, l * l * t) + b;
        const SpacetimePoint q(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
        const auto ru = supersolution_residual(u.jet(parabolic_scale(q, l)), {p});
        const auto rv = supersolution_residual(v.jet(q), {p});
        if (ru.branch != CheckBranch::GradNonzero) continue;
        EXPECT_NEAR(rv.residual, a * l * l * ru.residual, 1e-10 * std::max(1.0, std::abs(rv.residual)));
    }
}

TEST(ClassicalCheck, ManufacturedSolutionIsEquality) {
    // n = 1, p = 3: |x|^2 + 4t
    const ScalarField u = ScalarField::norm_sq() + 4.0 * ScalarField::time();
    const Domain d = domains::cylinder({-1.0}, {1.0}, -1.0, 0.0);
    std::vector<SpacetimePoint> s;
    for (int i = 1; i < 50; ++i) s.emplace_back(-1.0 + i / 25.0, -0.5);
    const CheckReport r = classical_supersolution_check(u, d, {3.0}, s);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.worst_residual, 0.0);
    EXPECT_TRUE(classical_subsolution_check(u, d, {3.0}, s).pass);
}

TEST(ClassicalCheck, MinusTFails) {
    const Domain d = domains::cylinder({-1.0}, {1.0}, -1.0, 0.0);
    const std::vector<SpacetimePoint> s = {SpacetimePoint(0.0, -0.5), SpacetimePoint(0.3, -0.2)};
    const CheckReport r = classical_supersolution_check(-ScalarField::time(), d, {2.0}, s);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.n_failed, 2u);
    EXPECT_EQ(r.branch_counts.grad_zero_psd, 2u);
    EXPECT_DOUBLE_EQ(r.worst_residual, -1.0);
    // deterministic tie-break: lexicographically smallest point
    EXPECT_EQ(r.worst_point, SpacetimePoint(0.0, -0.5));
}

TEST(ClassicalCheck, ExteriorBallBracketExample) {
    // n = 1, p = 2, xi1 = (1, 0), j = 3 at (0.5, -0.1): bracket = -0.4, residual >= 0
    const double j = 3.0;
    const ScalarField dt = ScalarField::time();
    const ScalarField R2 = ScalarField::norm_sq({1.0}) + dt * dt;
    const ScalarField w = std::exp(-j) - exp(-j * R2);
    const Domain d = domains::cylinder({-1.0}, {0.9}, -1.0, 1.0);
    const CheckReport r = classical_supersolution_check(w, d, {2.0}, {SpacetimePoint(0.5, -0.1)});
    EXPECT_TRUE(r.pass);
    const double R2v = 0.25 + 0.01;
    EXPECT_NEAR(r.worst_residual, -2.0 * j * std::exp(-j * R2v) * -0.4, 1e-12);
}

TEST(ClassicalCheck, VacuousBranch) {
    // -|x|^2 at x = 0 has a negative definite Hessian; nothing is required
    const Domain d = domains::cylinder({-1.0}, {1.0}, -1.0, 0.0);
    const CheckReport r =
        classical_supersolution_check(-ScalarField::norm_sq() - ScalarField::time(), d, {2.0}, {SpacetimePoint(0.0, -0.5)});
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.branch_counts.grad_zero_vacuous, 1u);
}

TEST(ClassicalCheck, Errors) {
    const Domain d = domains::cylinder({-1.0}, {1.0}, -1.0, 0.0);
    try {
        (void)classical_supersolution_check(ScalarField::time(), d, {2.0}, {SpacetimePoint(2.0, -0.5)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SampleOutsideDomain);
    }
    try {
        (void)classical_supersolution_check(log(ScalarField::coord(0)), d, {2.0}, {SpacetimePoint(-0.5, -0.5)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularSample);
    }
    try {
        (void)classical_supersolution_check(ScalarField::time(), d, {1.0}, {SpacetimePoint(0.0, -0.5)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidParameter);
    }
}
