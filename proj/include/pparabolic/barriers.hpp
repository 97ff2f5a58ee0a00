#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pparabolic/error.hpp"
#include "pparabolic/fields.hpp"
#include "pparabolic/geometry.hpp"
#include "pparabolic/operator.hpp"
#include "pparabolic/sampling.hpp"
#include "pparabolic/solver.hpp"

namespace pparabolic {

// ---------------------------------------------------------------------------
// Sampling of barrier domains

struct SamplerSpec {
    std::size_t interior = 10000;
    std::size_t axis = 1000;
    /// Total over all dyadic time bands below t0.
    std::size_t bands_total = 1000;
    int bands = 20;
    std::uint64_t seed = 0;
};

namespace detail {

inline SpacetimePoint box_point(const Box& b, const std::array<double, 3>& u) {
    SpacetimePoint p;
    p.n = b.n;
    for (int i = 0; i < b.n; ++i) p.x[i] = b.lo[i] + u[i] * (b.hi[i] - b.lo[i]);
    p.t = b.t_lo + u[b.n] * (b.t_hi - b.t_lo);
    return p;
}

} // namespace detail

/// Interior points of `dom`: a Halton set over the bounding box, points on
/// the axis x = x0, and points in the time bands (t0 - 2^-m, t0 - 2^-m-1).
inline std::vector<SpacetimePoint> barrier_samples(const Domain& dom, const SpacetimePoint& xi0,
                                                   const SamplerSpec& spec) {
    const Box& b = dom.bbox();
    const int n = b.n;
    std::vector<SpacetimePoint> out;
    out.reserve(spec.interior + spec.axis + spec.bands_total);

    HaltonSequence seq(1 + spec.seed * 1000003ULL);
    std::size_t got = 0;
    for (std::size_t tries = 0; got < spec.interior && tries < 200 * spec.interior + 1000; ++tries, seq.advance()) {
        const SpacetimePoint p = detail::box_point(b, {seq.coordinate(0), seq.coordinate(1), seq.coordinate(2)});
        if (!dom.contains(p)) continue;
        out.push_back(p);
        ++got;
    }

    // axis: t uniform over the time range, x = x0
    got = 0;
    HaltonSequence tseq(1 + spec.seed * 7919ULL);
    for (std::size_t tries = 0; got < spec.axis && tries < 200 * spec.axis + 1000; ++tries, tseq.advance()) {
        SpacetimePoint p = xi0;
        p.t = b.t_lo + tseq.coordinate(0) * (b.t_hi - b.t_lo);
        if (!dom.contains(p)) continue;
        out.push_back(p);
        ++got;
    }

    // dyadic bands below t0, sampled across the slice's spatial extent
    if (spec.bands > 0 && spec.bands_total > 0) {
        Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
        const std::size_t per_band = spec.bands_total / static_cast<std::size_t>(spec.bands);
        std::size_t extra = spec.bands_total % static_cast<std::size_t>(spec.bands);
        for (int m = 1; m <= spec.bands; ++m) {
            const std::size_t want = per_band + (extra > 0 ? 1 : 0);
            if (extra > 0) --extra;
            const double t_hi = std::min(xi0.t - std::ldexp(1.0, -m - 1), b.t_hi);
            const double t_lo = std::max(xi0.t - std::ldexp(1.0, -m), b.t_lo);
            if (!(t_lo < t_hi)) continue;
            std::size_t have = 0;
            for (std::size_t tries = 0; have < want && tries < 2000 * want; ++tries) {
                SpacetimePoint p = xi0;
                p.t = rng.uniform(t_lo, t_hi);
                // spatial extent at this time, from the axis if it is inside
                std::array<double, kMaxSpaceDim> lo{}, hi{};
                const bool axis_inside = dom.contains(p);
                for (int i = 0; i < n; ++i) {
                    lo[i] = b.lo[i];
                    hi[i] = b.hi[i];
                    if (axis_inside) {
                        SpacetimePoint q = p;
                        q.x[i] = b.hi[i];
                        hi[i] = project_to_boundary(dom, p, q).x[i];
                        q.x[i] = b.lo[i];
                        lo[i] = project_to_boundary(dom, p, q).x[i];
                    }
                }
                for (int i = 0; i < n; ++i) p.x[i] = rng.uniform(lo[i], hi[i]);
                if (!dom.contains(p)) continue;
                out.push_back(p);
                ++have;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generic barrier verification

struct LimitPoint {
    double r;
    double max_abs;
    std::size_t count;
};

struct BarrierReport {
    bool pass = false;
    CheckReport supersolution;
    bool positivity_pass = false;
    std::size_t positivity_checked = 0;
    std::size_t positivity_failed = 0;
    std::size_t positivity_skipped = 0;  // boundary samples where the field is singular
    double min_value = std::numeric_limits<double>::infinity();
    SpacetimePoint min_point{};
    bool limit_pass = false;
    std::vector<LimitPoint> limit_profile;
};

struct VerifyOptions {
    SamplerSpec sampler{};
    std::size_t boundary_samples = 2000;
    /// Boundary samples closer than this (parabolic distance) to xi0 are not
    /// checked for positivity.
    double exclusion_radius = 0.0;
    int r_min_exp = 3;
    int r_max_exp = 10;
};

/// Checks that `field` is a barrier at xi0: supersolution on the samples,
/// positive on interior and boundary samples, and sup |field| over
/// B_r(x0) x (t0 - r^2, t0 + r^2) strictly decreasing for r = 2^-3, ..., 2^-10.
inline BarrierReport verify_barrier(const ScalarField& field, const Domain& dom, const SpacetimePoint& xi0,
                                    const OperatorParams& params, const VerifyOptions& opt = {}) {
    BarrierReport rep;
    std::vector<SpacetimePoint> samples = barrier_samples(dom, xi0, opt.sampler);
    rep.supersolution = classical_supersolution_check(field, dom, params, samples);

    // (ii) positivity
    auto check_positive = [&](const SpacetimePoint& p) {
        double v = 0.0;
        try {
            v = field.value(p);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularPoint) throw;
            ++rep.positivity_skipped;
            return;
        }
        ++rep.positivity_checked;
        if (!(v > 0.0)) ++rep.positivity_failed;
        if (v < rep.min_value) {
            rep.min_value = v;
            rep.min_point = p;
        }
    };
    for (const auto& s : samples) check_positive(s);
    const double excl = opt.exclusion_radius > 0.0 ? opt.exclusion_radius : std::ldexp(1.0, -opt.r_max_exp);
    for (const auto& z : parabolic_boundary_sample(dom, opt.boundary_samples, opt.sampler.seed))
        if (parabolic_distance(z, xi0) > excl) check_positive(z);
    rep.positivity_pass = rep.positivity_failed == 0 && rep.positivity_checked > 0;

    // (iii) limit at xi0
    std::vector<SpacetimePoint> near = samples;
    for (int e = opt.r_min_exp; e <= opt.r_max_exp; ++e) {
        const double r = std::ldexp(1.0, -e);
        for (double frac : {0.999, 0.9, 0.5, 0.1, 0.01}) {
            // on the axis below and above xi0, and beside it at t0
            for (double sg : {-1.0, 1.0}) {
                SpacetimePoint q = xi0;
                q.t = xi0.t + sg * r * r * frac;
                if (dom.contains(q)) near.push_back(q);
                for (int i = 0; i < xi0.n; ++i) {
                    SpacetimePoint s = xi0;
                    s.x[i] += sg * r * frac;
                    if (dom.contains(s)) near.push_back(s);
                }
            }
        }
    }
    rep.limit_pass = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int e = opt.r_min_exp; e <= opt.r_max_exp; ++e) {
        const double r = std::ldexp(1.0, -e);
        LimitPoint lp{r, 0.0, 0};
        for (const auto& q : near) {
            if (std::sqrt(space_norm_sq(q, xi0)) >= r || std::abs(q.t - xi0.t) >= r * r) continue;
            double v = 0.0;
            try {
                v = std::abs(field.value(q));
            } catch (const Error& err) {
                if (err.code() != ErrorCode::SingularPoint) throw;
                continue;
            }
            lp.max_abs = std::max(lp.max_abs, v);
            ++lp.count;
        }
        if (lp.count == 0 || !(lp.max_abs < prev)) rep.limit_pass = false;
        prev = lp.max_abs;
        rep.limit_profile.push_back(lp);
    }

    rep.pass = rep.supersolution.pass && rep.positivity_pass && rep.limit_pass;
    return rep;
}

// ---------------------------------------------------------------------------
// Exterior ball barrier

struct ExteriorBallBarrier {
    SpacetimePoint xi0;
    SpacetimePoint xi1;
    double R1 = 0.0;
    double j = 0.0;
    double delta = 0.0;
    bool north_pole = false;
    int n = 1;
    double p = 2.0;

    /// w = e^{-j R1^2} - e^{-j R^2}, R = |xi - xi1|.
    ScalarField field() const {
        const std::vector<double> c(xi1.space().begin(), xi1.space().end());
        const ScalarField dt = ScalarField::time() - xi1.t;
        const ScalarField R2 = ScalarField::norm_sq(c) + dt * dt;
        return ScalarField::constant(std::exp(-j * R1 * R1)) - exp(-j * R2);
    }

    /// Bracket n + p - 2 - 2j(p - 1)|x - x1|^2 - (t - t1) of the residual
    /// Delta_p^N w - w_t = 2j e^{-jR^2} [bracket].
    double bracket(const SpacetimePoint& x) const {
        return n + p - 2.0 - 2.0 * j * (p - 1.0) * space_norm_sq(x, xi1) - (x.t - xi1.t);
    }

    /// Neighbourhood of xi0 outside a ball twice as large and tangent at xi0,
    /// so the barrier is positive on its closure except at xi0.
    Domain domain() const {
        SpacetimePoint far = xi0;
        for (int i = 0; i < n; ++i) far.x[i] = xi0.x[i] + 2.0 * (xi1.x[i] - xi0.x[i]);
        far.t = xi0.t + 2.0 * (xi1.t - xi0.t);
        return domains::ball_complement(far, 2.0 * R1, xi0, delta / std::sqrt(static_cast<double>(n)));
    }
};

inline ExteriorBallBarrier make_exterior_ball_barrier(const SpacetimePoint& xi0, const SpacetimePoint& xi1, double R1,
                                                      int n, double p) {
    require(xi0.n == n && xi1.n == n, ErrorCode::InvalidParameter, "exterior ball: dimension mismatch");
    require(p > 1.0 && std::isfinite(p), ErrorCode::InvalidParameter, "p must satisfy 1 < p < inf");
    require(R1 > 0.0, ErrorCode::InvalidParameter, "exterior ball: R1 must be positive");
    require(std::abs(distance(xi0, xi1) - R1) <= 1e-9, ErrorCode::GeometryViolation,
            "exterior ball: |xi0 - xi1| differs from R1");
    ExteriorBallBarrier bar;
    bar.xi0 = xi0;
    bar.xi1 = xi1;
    bar.R1 = R1;
    bar.n = n;
    bar.p = p;
    const double dx = std::sqrt(space_norm_sq(xi0, xi1));
    if (dx > 1e-12) {
        bar.delta = 0.5 * dx;
        bar.j = 1.1 * (n + p - 2.0 + std::abs(xi1.t - xi0.t) + bar.delta) / (2.0 * (p - 1.0) * bar.delta * bar.delta);
        return bar;
    }
    require(xi1.t < xi0.t, ErrorCode::GeometryViolation,
            "exterior ball: xi0 is the south pole; only tangent or north-pole contact is supported");
    if (!(R1 > n + p - 2.0))
        throw Error(ErrorCode::RadiusTooSmall, "north pole contact needs R1 > n + p - 2");
    bar.north_pole = true;
    bar.delta = 0.5 * (R1 - (n + p - 2.0));
    bar.j = 1.0;
    return bar;
}

// ---------------------------------------------------------------------------
// Petrovskii barriers

namespace detail {

/// |log|t|| as a field, for -1 < t < 0.
inline ScalarField abs_log_abs_t() { return -log(-ScalarField::time()); }

} // namespace detail

/// -f(t) e^{|x|^2/(k|t|)} + h(t) with k = 4(p - 1), a = (n + p - 2)/k,
/// f = |log|t||^{-a-1}, h = 2 |log|t||^{-a}.
struct PetrovskiiBarrier {
    int n = 1;
    double p = 2.0;
    double k = 4.0;
    double a = 0.25;

    ScalarField f() const { return pow(detail::abs_log_abs_t(), -a - 1.0); }
    ScalarField h() const { return 2.0 * pow(detail::abs_log_abs_t(), -a); }
    ScalarField field() const {
        return -f() * exp(ScalarField::norm_sq() / (k * -ScalarField::time())) + h();
    }
    /// Positivity region |x|^2 < k|t| log|log|t|| + k|t| log 2.
    bool positive_region(const SpacetimePoint& x) const {
        double r2 = 0.0;
        for (int i = 0; i < x.n; ++i) r2 += x.x[i] * x.x[i];
        const double s = -x.t;
        return r2 < k * s * std::log(-std::log(s)) + k * s * std::log(2.0);
    }
};

inline PetrovskiiBarrier make_petrovskii_barrier(int n, double p) {
    require(n >= 1 && n <= kMaxSpaceDim, ErrorCode::InvalidParameter, "n must be 1 or 2");
    require(p > 1.0 && std::isfinite(p), ErrorCode::InvalidParameter, "p must satisfy 1 < p < inf");
    PetrovskiiBarrier b;
    b.n = n;
    b.p = p;
    b.k = 4.0 * (p - 1.0);
    b.a = (n + p - 2.0) / b.k;
    return b;
}

/// Subsolution used to show irregularity when A > 4(p - 1):
/// -f(t) e^{|x|^2/(k|t|)} + h(t) with f = |log|t||^{-a-1},
/// h = 2b / (a |log|t||^{a/2}).
struct IrregularityBarrier {
    int n = 1;
    double p = 2.0;
    double A = 8.0;
    double k = 6.0;
    double a = 1.0 / 3.0;
    double b = 8.0 / 3.0;
    double c = 2.0;

    ScalarField f() const { return pow(detail::abs_log_abs_t(), -a - 1.0); }
    ScalarField h() const { return (2.0 * b / a) * pow(detail::abs_log_abs_t(), -a / 2.0); }
    ScalarField field() const {
        return -f() * exp(ScalarField::norm_sq() / (k * -ScalarField::time())) + h();
    }

    // Closed forms in the log-time variable L = |log|t||, usable where t
    // itself underflows.
    double f_of(double L) const { return std::pow(L, -a - 1.0); }
    double h_of(double L) const { return 2.0 * b / (a * std::pow(L, a / 2.0)); }
    double axis_value(double L) const { return -f_of(L) + h_of(L); }
    /// u on the lateral boundary |x|^2 = A|t| log L, where e^{s} = L^{A/k}.
    double boundary_value(double L) const { return -f_of(L) * std::pow(L, A / k) + h_of(L); }
    /// Sign-determining factor of u_t(0, t): (a + 1)/L - b L^{a/2}.
    double axis_dt_factor(double L) const { return (a + 1.0) / L - b * std::pow(L, a / 2.0); }
};

inline IrregularityBarrier make_irregularity_barrier(int n, double p, double A, std::optional<double> k = {}) {
    require(n >= 1 && n <= kMaxSpaceDim, ErrorCode::InvalidParameter, "n must be 1 or 2");
    require(p > 1.0 && std::isfinite(p), ErrorCode::InvalidParameter, "p must satisfy 1 < p < inf");
    const double k_lo = 4.0 * (p - 1.0);
    if (!(A > k_lo)) throw Error(ErrorCode::PreconditionViolated, "irregularity barrier needs A > 4(p - 1)");
    IrregularityBarrier bar;
    bar.n = n;
    bar.p = p;
    bar.A = A;
    bar.k = k.value_or(0.5 * (k_lo + A));
    require(bar.k > k_lo && bar.k < A, ErrorCode::PreconditionViolated, "need 4(p - 1) < k < A");
    bar.a = A / bar.k - 1.0;
    bar.b = 4.0 * (n + p - 2.0) / bar.k;
    bar.c = bar.k - k_lo;
    return bar;
}

struct IrregularityReport {
    bool pass = false;
    double tau = 0.0;
    int halvings = 0;
    // conditions on the samples with -tau < t < 0
    bool cond_a = false;  // (a + 1)/L <= b/2
    bool cond_b = false;  // c s/k + b e^{-s} L^{a/2} >= b, s = |x|^2/(k|t|)
    bool cond_c = false;  // u_t(0, t) < 0
    std::size_t b_case_small = 0;  // s <= a log(L)/2: holds by the exponential term
    std::size_t b_case_large = 0;  // s > a log(L)/2: checked in full
    std::size_t b_failures = 0;
    double b_worst_margin = std::numeric_limits<double>::infinity();
    CheckReport subsolution;
    double boundary_identity_error = 0.0;
    bool boundary_limit_pass = false;
    bool axis_limit_pass = false;
    std::vector<std::pair<double, double>> axis_profile;      // (L, u(0, t))
    std::vector<std::pair<double, double>> boundary_profile;  // (L, u on the lateral boundary)
};

namespace detail {

struct IrregularityConditions {
    bool a = true, b = true, c = true;
    std::size_t small = 0, large = 0, fail = 0;
    double worst = std::numeric_limits<double>::infinity();
};

inline IrregularityConditions irregularity_conditions(const IrregularityBarrier& bar,
                                                      const std::vector<SpacetimePoint>& samples, double tau) {
    IrregularityConditions r;
    for (const auto& s : samples) {
        if (!(s.t > -tau && s.t < 0.0)) continue;
        const double L = -std::log(-s.t);
        double r2 = 0.0;
        for (int i = 0; i < s.n; ++i) r2 += s.x[i] * s.x[i];
        const double sv = r2 / (bar.k * -s.t);
        if (!((bar.a + 1.0) / L <= bar.b / 2.0)) r.a = false;
        const double margin = bar.c * sv / bar.k + bar.b * std::exp(-sv) * std::pow(L, bar.a / 2.0) - bar.b;
        if (sv <= 0.5 * bar.a * std::log(L)) ++r.small;
        else ++r.large;
        if (margin < 0.0) {
            r.b = false;
            ++r.fail;
        }
        r.worst = std::min(r.worst, margin);
        if (r2 == 0.0 && !(bar.axis_dt_factor(L) < 0.0)) r.c = false;
    }
    return r;
}

} // namespace detail

/// Searches tau = 1/3, 1/6, ... for a depth on which the subsolution
/// conditions hold on the samples, then checks the boundary identity and
/// the two limits.
inline IrregularityReport verify_irregularity_barrier(const IrregularityBarrier& bar, const Domain& dom,
                                                      const OperatorParams& params, const SamplerSpec& sampler = {}) {
    require(dom.kind() == DomainKind::Petrovskii, ErrorCode::InvalidParameter,
            "irregularity barrier is verified on a Petrovskii domain");
    require(std::abs(dom.descriptor().at("A").get<double>() - bar.A) <= 1e-12 * bar.A, ErrorCode::InvalidParameter,
            "domain A differs from the barrier's A");
    const SpacetimePoint xi0(std::vector<double>(static_cast<std::size_t>(dom.dim()), 0.0), 0.0);
    const auto samples = barrier_samples(dom, xi0, sampler);

    IrregularityReport rep;
    double tau = 1.0 / 3.0;
    for (;;) {
        const auto cond = detail::irregularity_conditions(bar, samples, tau);
        if (cond.a && cond.b && cond.c) {
            rep.cond_a = rep.cond_b = rep.cond_c = true;
            rep.b_case_small = cond.small;
            rep.b_case_large = cond.large;
            rep.b_worst_margin = cond.worst;
            break;
        }
        tau *= 0.5;
        ++rep.halvings;
        if (tau < 1e-6) {
            throw Error(ErrorCode::NoAdmissibleTau,
                        "conditions (a)-(c) fail on samples for every tau >= 1e-6 (last failure counts: b " +
                            std::to_string(cond.fail) + ", worst margin " + std::to_string(cond.worst) + ")");
        }
    }
    rep.tau = tau;

    std::vector<SpacetimePoint> inner;
    for (const auto& s : samples)
        if (s.t > -tau) inner.push_back(s);
    rep.subsolution = classical_subsolution_check(bar.field(), dom, params, inner);

    // u = h - 1 on the lateral boundary, at exact boundary points
    const ScalarField u = bar.field();
    const ScalarField h = bar.h();
    for (int i = 1; i <= 200; ++i) {
        const double t = -(1.0 / 3.0) * std::pow(10.0, -6.0 * i / 200.0);
        const double L = -std::log(-t);
        const double r = std::sqrt(bar.A * -t * std::log(L));
        SpacetimePoint z = xi0;
        z.t = t;
        const double ang = 0.7 * i;
        z.x[0] = dom.dim() == 1 ? (i % 2 ? r : -r) : r * std::cos(ang);
        if (dom.dim() > 1) z.x[1] = r * std::sin(ang);
        rep.boundary_identity_error = std::max(rep.boundary_identity_error, std::abs(u.value(z) - (h.value(z) - 1.0)));
    }

    // limits in log-time; convergence is like a power of L
    rep.axis_limit_pass = true;
    rep.boundary_limit_pass = true;
    double prev_axis = std::numeric_limits<double>::infinity();
    for (int e = 1; e <= 100; ++e) {
        const double L = std::pow(10.0, e);
        const double ua = bar.axis_value(L);
        const double ub = bar.boundary_value(L);
        rep.axis_profile.emplace_back(L, ua);
        rep.boundary_profile.emplace_back(L, ub);
        if (!(std::abs(ua) < prev_axis)) rep.axis_limit_pass = false;
        prev_axis = std::abs(ua);
    }
    const double L_end = rep.axis_profile.back().first;
    rep.axis_limit_pass = rep.axis_limit_pass && std::abs(bar.axis_value(L_end)) < 1e-3;
    rep.boundary_limit_pass = std::abs(bar.boundary_value(L_end) + 1.0) < 1e-3;

    rep.pass = rep.cond_a && rep.cond_b && rep.cond_c && rep.subsolution.pass &&
               rep.boundary_identity_error <= 1e-10 && rep.axis_limit_pass && rep.boundary_limit_pass;
    return rep;
}

// ---------------------------------------------------------------------------
// Tusk-house contraction factor

struct TuskHouseBarrierSpec {
    std::vector<double> xhat{1.0};
    double R = 0.5;
    double R0 = 2.0;

    int dim() const { return static_cast<int>(xhat.size()); }
    Domain domain() const { return domains::tusk_house(xhat, R, R0); }

    /// Continuous extension of the data: -t on the tusk boundary, 1 on the
    /// rest of the boundary of the tusk house.
    BoundaryData data() const {
        const double c = 1.0 / (R0 - detail::norm_of(xhat) - R);
        const auto xh = detail::to_array(xhat);
        const double RR = R;
        return [c, xh, RR](const SpacetimePoint& x) {
            const double s = std::sqrt(std::max(-x.t, 0.0));
            double d2 = 0.0;
            for (int i = 0; i < x.n; ++i) d2 += (x.x[i] - s * xh[i]) * (x.x[i] - s * xh[i]);
            const double dist = std::max(0.0, std::sqrt(d2) - RR * s);
            return std::min(1.0, s * s + c * dist + std::max(x.t, 0.0));
        };
    }

    /// Samples of K, the closure of the boundary of the once-rescaled house
    /// minus the tusk: the bottom t = -1/4, the side |x| = R0/2 for
    /// -1/4 <= t <= 0 and the cone |x| = (R0/2)(1 - 4t) for 0 <= t <= 1/4.
    std::vector<SpacetimePoint> k_samples(std::size_t per_piece) const {
        const int n = dim();
        const Tusk tusk{detail::to_array(xhat), R, 1.0};
        std::vector<SpacetimePoint> out;
        const double half = 0.5 * R0;
        auto on_sphere = [&](double rad, double t, double frac) {
            SpacetimePoint p;
            p.n = n;
            p.t = t;
            if (n == 1) {
                p.x[0] = frac < 0.5 ? -rad : rad;
            } else {
                const double ang = 2.0 * std::numbers::pi * frac;
                p.x[0] = rad * std::cos(ang);
                p.x[1] = rad * std::sin(ang);
            }
            return p;
        };
        for (std::size_t i = 0; i < per_piece; ++i) {
            const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(per_piece);
            // bottom: radial coordinate and angle from a 2-D Halton pair
            SpacetimePoint b;
            b.n = n;
            b.t = -0.25;
            if (n == 1) {
                b.x[0] = -half + 2.0 * half * u;
            } else {
                const double rad = half * std::sqrt(radical_inverse(i + 1, 2));
                const double ang = 2.0 * std::numbers::pi * radical_inverse(i + 1, 3);
                b.x[0] = rad * std::cos(ang);
                b.x[1] = rad * std::sin(ang);
            }
            if (!tusk.contains_closed(b)) out.push_back(b);
            const double frac = n == 1 ? static_cast<double>(i % 2) : radical_inverse(i + 1, 5);
            out.push_back(on_sphere(half, -0.25 * u, frac));
            const double tc = 0.25 * u;
            out.push_back(on_sphere(half * (1.0 - 4.0 * tc), tc, frac));
        }
        return out;
    }
};

struct AlphaBeta {
    double alpha1 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double h = 0.0;
    std::size_t k_points = 0;
};

inline double holder_exponent_from_alpha(double alpha) {
    require(alpha > 0.0 && alpha < 1.0, ErrorCode::InvalidParameter, "alpha must lie in (0, 1)");
    return -std::log(alpha) / std::log(2.0);
}

/// Solves the tusk-house problem at step h and takes alpha1 = max of the
/// solution over samples of K; alpha = max(alpha1, 1/4), beta = -log(alpha)/log 2.
inline AlphaBeta estimate_alpha_and_beta(const TuskHouseBarrierSpec& spec, const OperatorParams& params, double h,
                                         std::size_t per_piece = 200) {
    const Domain dom = spec.domain();
    GridSpec gs;
    gs.h = h;
    gs.store_stride = 0;
    gs.t_stop = 0.25;
    Solver solver(dom, spec.data(), params, gs);
    const Grid& g = solver.grid();

    const auto K = spec.k_samples(per_piece);
    // nearest time level of each K point
    std::vector<int> level(K.size());
    for (std::size_t i = 0; i < K.size(); ++i)
        level[i] = static_cast<int>(std::lround((K[i].t - g.t_lo) / g.dt));

    AlphaBeta ab;
    ab.h = h;
    ab.alpha1 = -std::numeric_limits<double>::infinity();
    solver.solve([&](const Slice& s) {
        for (std::size_t i = 0; i < K.size(); ++i) {
            if (level[i] != s.m) continue;
            if (const auto v = interpolate(g, s, K[i])) {
                ab.alpha1 = std::max(ab.alpha1, *v);
                ++ab.k_points;
            }
        }
    });
    require(ab.k_points > 0, ErrorCode::ResolutionTooCoarse, "no sample of K fell on resolved nodes");
    if (ab.alpha1 >= 1.0 - h) throw Error(ErrorCode::ResolutionTooCoarse, "alpha1 is not separated from 1");
    ab.alpha = std::max(ab.alpha1, 0.25);
    ab.beta = holder_exponent_from_alpha(ab.alpha);
    return ab;
}

} // namespace pparabolic
