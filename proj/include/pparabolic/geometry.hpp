#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pparabolic/error.hpp"
#include "pparabolic/expression.hpp"
#include "pparabolic/sampling.hpp"
#include "pparabolic/spacetime.hpp"

namespace pparabolic {

enum class DomainKind {
    Cylinder,
    BallCylinder,
    TuskComplement,
    TuskHouse,
    Petrovskii,
    BallComplement,
    EllipseChain,
    WedgeCylinder,
    Generic,
    Scaled,
    Restricted,
};

/// Tusk {|x - (-t)^{1/2} xhat|^2 < R^2 (-t), -T < t < 0} at the origin.
struct Tusk {
    std::array<double, kMaxSpaceDim> xhat{};
    double R = 0.0;
    double T = 1.0;

    double excess(const SpacetimePoint& p) const {
        const double s = std::sqrt(std::max(-p.t, 0.0));
        double d = 0.0;
        for (int i = 0; i < p.n; ++i) d += (p.x[i] - s * xhat[i]) * (p.x[i] - s * xhat[i]);
        return d - R * R * (-p.t);
    }
    bool contains_open(const SpacetimePoint& p) const { return p.t > -T && p.t < 0.0 && excess(p) < 0.0; }
    bool contains_closed(const SpacetimePoint& p) const { return p.t >= -T && p.t <= 0.0 && excess(p) <= 0.0; }
};

/// Bounded open space-time set: a membership predicate restricted to the
/// open bounding box. Immutable and cheap to copy.
class Domain {
public:
    using Predicate = std::function<bool(const SpacetimePoint&)>;

    /// `cylindrical` promises that membership does not depend on t inside the
    /// bounding box's time range.
    Domain(DomainKind kind, Box bbox, Predicate inside, nlohmann::json descriptor, bool cylindrical = false)
        : kind_(kind), bbox_(bbox), inside_(std::make_shared<const Predicate>(std::move(inside))),
          descriptor_(std::make_shared<const nlohmann::json>(std::move(descriptor))), cylindrical_(cylindrical) {}

    DomainKind kind() const { return kind_; }
    int dim() const { return bbox_.n; }
    const Box& bbox() const { return bbox_; }
    const nlohmann::json& descriptor() const { return *descriptor_; }
    bool cylindrical() const { return cylindrical_; }

    bool contains(const SpacetimePoint& p) const {
        return p.n == bbox_.n && bbox_.contains_strictly(p) && (*inside_)(p);
    }

private:
    DomainKind kind_;
    Box bbox_;
    std::shared_ptr<const Predicate> inside_;
    std::shared_ptr<const nlohmann::json> descriptor_;
    bool cylindrical_ = false;
};

inline bool membership(const Domain& dom, const SpacetimePoint& xi) { return dom.contains(xi); }

namespace detail {

inline void check_dim(int n) {
    require(n >= 1 && n <= kMaxSpaceDim, ErrorCode::InvalidParameter,
            "spatial dimension must be 1 or 2, got " + std::to_string(n));
}

inline std::array<double, kMaxSpaceDim> to_array(const std::vector<double>& v) {
    std::array<double, kMaxSpaceDim> a{};
    for (std::size_t i = 0; i < v.size() && i < a.size(); ++i) a[i] = v[i];
    return a;
}

inline double norm_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

inline Box cube_box(int n, double half, double t_lo, double t_hi) {
    Box b;
    b.n = n;
    for (int i = 0; i < n; ++i) {
        b.lo[i] = -half;
        b.hi[i] = half;
    }
    b.t_lo = t_lo;
    b.t_hi = t_hi;
    return b;
}

/// max over 0 < s < 1/3 of s log(-log s); attained where log L = 1/L, L = -log s.
inline double petrovskii_profile_max() {
    double L = 1.76;
    for (int it = 0; it < 50; ++it) {
        const double g = std::log(L) - 1.0 / L;
        const double dg = 1.0 / L + 1.0 / (L * L);
        L -= g / dg;
    }
    return std::exp(-L) * std::log(L);
}

// Points on the closure of the tusk-house hull {-1 < t < 1, |x| < R0 min(1, 1 - t)}.
inline bool in_tusk_house_hull(const SpacetimePoint& p, double R0) {
    if (!(p.t > -1.0 && p.t < 1.0)) return false;
    double r2 = 0.0;
    for (int i = 0; i < p.n; ++i) r2 += p.x[i] * p.x[i];
    const double rad = R0 * std::min(1.0, 1.0 - p.t);
    return r2 < rad * rad;
}

} // namespace detail

namespace domains {

/// Q x (t1, t2) with Q the open box (lo, hi).
inline Domain cylinder(const std::vector<double>& lo, const std::vector<double>& hi, double t1, double t2) {
    const int n = static_cast<int>(lo.size());
    detail::check_dim(n);
    require(hi.size() == lo.size(), ErrorCode::InvalidParameter, "cylinder: lo and hi differ in length");
    require(t1 < t2, ErrorCode::InvalidParameter, "cylinder: need t1 < t2");
    Box b;
    b.n = n;
    for (int i = 0; i < n; ++i) {
        require(lo[i] < hi[i], ErrorCode::InvalidParameter, "cylinder: need lo < hi");
        b.lo[i] = lo[i];
        b.hi[i] = hi[i];
    }
    b.t_lo = t1;
    b.t_hi = t2;
    nlohmann::json d = {{"kind", "cylinder"}, {"n", n}, {"lo", lo}, {"hi", hi}, {"t1", t1}, {"t2", t2}};
    return Domain(DomainKind::Cylinder, b, [](const SpacetimePoint&) { return true; }, std::move(d), true);
}

/// B(center, radius) x (t1, t2).
inline Domain ball_cylinder(const std::vector<double>& center, double radius, double t1, double t2) {
    const int n = static_cast<int>(center.size());
    detail::check_dim(n);
    require(radius > 0.0, ErrorCode::InvalidParameter, "ball_cylinder: radius must be positive");
    require(t1 < t2, ErrorCode::InvalidParameter, "ball_cylinder: need t1 < t2");
    Box b;
    b.n = n;
    for (int i = 0; i < n; ++i) {
        b.lo[i] = center[i] - radius;
        b.hi[i] = center[i] + radius;
    }
    b.t_lo = t1;
    b.t_hi = t2;
    const auto c = detail::to_array(center);
    nlohmann::json d = {{"kind", "ball_cylinder"}, {"center", center}, {"radius", radius}, {"t1", t1}, {"t2", t2}};
    return Domain(
        DomainKind::BallCylinder, b,
        [c, radius](const SpacetimePoint& p) {
            double s = 0.0;
            for (int i = 0; i < p.n; ++i) s += (p.x[i] - c[i]) * (p.x[i] - c[i]);
            return s < radius * radius;
        },
        std::move(d), true);
}

/// (-L, L)^n x (-T, T) minus the closed tusk.
inline Domain tusk_complement(const std::vector<double>& xhat, double R, double T, double L) {
    const int n = static_cast<int>(xhat.size());
    detail::check_dim(n);
    require(R > 0.0 && T > 0.0 && L > 0.0, ErrorCode::InvalidParameter, "tusk_complement: R, T, L must be positive");
    const Tusk tusk{detail::to_array(xhat), R, T};
    nlohmann::json d = {{"kind", "tusk_complement"}, {"xhat", xhat}, {"R", R}, {"T", T}, {"L", L}};
    return Domain(DomainKind::TuskComplement, detail::cube_box(n, L, -T, T),
                  [tusk](const SpacetimePoint& p) { return !tusk.contains_closed(p); }, std::move(d));
}

/// The tusk house: {-1 < t < 1, |x| < R0 min(1, 1 - t)} minus the closed tusk
/// with T = 1.
inline Domain tusk_house(const std::vector<double>& xhat, double R, double R0) {
    const int n = static_cast<int>(xhat.size());
    detail::check_dim(n);
    require(R > 0.0, ErrorCode::InvalidParameter, "tusk_house: R must be positive");
    require(R0 > detail::norm_of(xhat) + R, ErrorCode::InvalidParameter, "tusk_house: need R0 > |xhat| + R");
    const Tusk tusk{detail::to_array(xhat), R, 1.0};
    nlohmann::json d = {{"kind", "tusk_house"}, {"xhat", xhat}, {"R", R}, {"R0", R0}};
    return Domain(
        DomainKind::TuskHouse, detail::cube_box(n, R0, -1.0, 1.0),
        [tusk, R0](const SpacetimePoint& p) { return detail::in_tusk_house_hull(p, R0) && !tusk.contains_closed(p); },
        std::move(d));
}

/// {|x|^2 < A |t| log|log|t||, -1/3 < t < 0}.
inline Domain petrovskii(double A, int n) {
    detail::check_dim(n);
    require(A > 0.0, ErrorCode::InvalidParameter, "petrovskii: A must be positive");
    const double half = std::sqrt(A * detail::petrovskii_profile_max()) * 1.01;
    nlohmann::json d = {{"kind", "petrovskii"}, {"A", A}, {"n", n}};
    return Domain(
        DomainKind::Petrovskii, detail::cube_box(n, half, -1.0 / 3.0, 0.0),
        [A](const SpacetimePoint& p) {
            if (!(p.t > -1.0 / 3.0 && p.t < 0.0)) return false;
            double r2 = 0.0;
            for (int i = 0; i < p.n; ++i) r2 += p.x[i] * p.x[i];
            const double s = -p.t;
            return r2 < A * s * std::log(-std::log(s));
        },
        std::move(d));
}

/// The box {|x - x0|_inf < delta, |t - t0| < delta} minus the closed
/// space-time ball B(xi1, R1); xi0 must lie on the sphere.
inline Domain ball_complement(const SpacetimePoint& xi1, double R1, const SpacetimePoint& xi0, double delta) {
    detail::check_dim(xi1.n);
    require(xi0.n == xi1.n, ErrorCode::InvalidParameter, "ball_complement: dimension mismatch");
    require(R1 > 0.0 && delta > 0.0, ErrorCode::InvalidParameter, "ball_complement: R1 and delta must be positive");
    require(std::abs(distance(xi0, xi1) - R1) <= 1e-9, ErrorCode::GeometryViolation,
            "ball_complement: |xi0 - xi1| differs from R1");
    const int n = xi1.n;
    Box b;
    b.n = n;
    for (int i = 0; i < n; ++i) {
        b.lo[i] = xi0.x[i] - delta;
        b.hi[i] = xi0.x[i] + delta;
    }
    b.t_lo = xi0.t - delta;
    b.t_hi = xi0.t + delta;
    auto coords = [](const SpacetimePoint& p) {
        std::vector<double> v(p.space().begin(), p.space().end());
        v.push_back(p.t);
        return v;
    };
    nlohmann::json d = {{"kind", "ball_complement"}, {"xi1", coords(xi1)}, {"R1", R1}, {"xi0", coords(xi0)},
                        {"delta", delta}};
    return Domain(
        DomainKind::BallComplement, b,
        [xi1, R1](const SpacetimePoint& p) {
            const double s = space_norm_sq(p, xi1) + (p.t - xi1.t) * (p.t - xi1.t);
            return s > R1 * R1;
        },
        std::move(d));
}

/// Tusk-house hull with radius R0 minus the closed ellipses
/// E_k = {(|x - q^k xhat|/(a q^k))^2 + ((t + c q^{2k})/(b q^{2k}))^2 < 1}, k >= 1.
inline Domain ellipse_chain(const std::vector<double>& xhat, double a, double b, double c, double q, double R0) {
    const int n = static_cast<int>(xhat.size());
    detail::check_dim(n);
    require(a > 0.0 && b > 0.0 && c > 0.0, ErrorCode::InvalidParameter, "ellipse_chain: a, b, c must be positive");
    require(q > 0.0 && q < 1.0, ErrorCode::InvalidParameter, "ellipse_chain: need 0 < q < 1");
    require(R0 > detail::norm_of(xhat) * q + a * q, ErrorCode::InvalidParameter,
            "ellipse_chain: first ellipse must fit inside the hull");
    const auto xh = detail::to_array(xhat);
    nlohmann::json d = {{"kind", "ellipse_chain"}, {"xhat", xhat}, {"a", a}, {"b", b},
                        {"c", c},                  {"q", q},       {"R0", R0}};
    return Domain(
        DomainKind::EllipseChain, detail::cube_box(n, R0, -1.0, 1.0),
        [xh, a, b, c, q, R0](const SpacetimePoint& p) {
            if (!detail::in_tusk_house_hull(p, R0)) return false;
            double qk = 1.0;
            for (int k = 1; k <= 400; ++k) {
                qk *= q;
                const double q2k = qk * qk;
                if (q2k < 1e-300) break;
                double dx = 0.0;
                for (int i = 0; i < p.n; ++i) dx += (p.x[i] - qk * xh[i]) * (p.x[i] - qk * xh[i]);
                const double ex = dx / (a * a * q2k);
                const double et = (p.t + c * q2k) / (b * q2k);
                if (ex + et * et <= 1.0) return false;
            }
            return true;
        },
        std::move(d));
}

/// Cylinder over G = B(center, radius) minus the closed cone
/// {(x - x0) . y >= a |x - x0|}, for t1 < t < t2.
inline Domain wedge_cylinder(const std::vector<double>& x0, const std::vector<double>& y, double a,
                             const std::vector<double>& center, double radius, double t1, double t2) {
    const int n = static_cast<int>(center.size());
    detail::check_dim(n);
    require(x0.size() == center.size() && y.size() == center.size(), ErrorCode::InvalidParameter,
            "wedge_cylinder: dimension mismatch");
    require(a > 0.0 && radius > 0.0 && t1 < t2, ErrorCode::InvalidParameter, "wedge_cylinder: invalid parameters");
    Box b;
    b.n = n;
    for (int i = 0; i < n; ++i) {
        b.lo[i] = center[i] - radius;
        b.hi[i] = center[i] + radius;
    }
    b.t_lo = t1;
    b.t_hi = t2;
    const auto xc = detail::to_array(center);
    const auto xv = detail::to_array(x0);
    const auto yv = detail::to_array(y);
    nlohmann::json d = {{"kind", "wedge_cylinder"}, {"x0", x0},         {"y", y},   {"a", a},
                        {"center", center},         {"radius", radius}, {"t1", t1}, {"t2", t2}};
    return Domain(
        DomainKind::WedgeCylinder, b,
        [xc, xv, yv, a, radius](const SpacetimePoint& p) {
            double r2 = 0.0, dot = 0.0, d2 = 0.0;
            for (int i = 0; i < p.n; ++i) {
                r2 += (p.x[i] - xc[i]) * (p.x[i] - xc[i]);
                dot += (p.x[i] - xv[i]) * yv[i];
                d2 += (p.x[i] - xv[i]) * (p.x[i] - xv[i]);
            }
            return r2 < radius * radius && dot < a * std::sqrt(d2);
        },
        std::move(d), true);
}

/// {expr < 0} inside the given box. Points where the expression is singular
/// are treated as outside.
inline Domain generic(const Box& bbox, const std::string& expr) {
    detail::check_dim(bbox.n);
    const ScalarField f = parse_expression(expr);
    std::vector<double> lo(bbox.lo.begin(), bbox.lo.begin() + bbox.n);
    std::vector<double> hi(bbox.hi.begin(), bbox.hi.begin() + bbox.n);
    nlohmann::json d = {{"kind", "generic"}, {"n", bbox.n}, {"lo", lo},          {"hi", hi},
                        {"t1", bbox.t_lo},   {"t2", bbox.t_hi}, {"expr", expr}};
    return Domain(
        DomainKind::Generic, bbox,
        [f](const SpacetimePoint& p) {
            try {
                return f.value(p) < 0.0;
            } catch (const Error& e) {
                if (e.code() == ErrorCode::SingularPoint) return false;
                throw;
            }
        },
        std::move(d));
}

/// base intersected with the open box.
inline Domain restricted(const Domain& base, const Box& box) {
    require(box.n == base.dim(), ErrorCode::InvalidParameter, "restricted: dimension mismatch");
    const Box b = intersect(base.bbox(), box);
    require(b.t_lo < b.t_hi, ErrorCode::EmptyDomain, "restricted: empty intersection");
    std::vector<double> lo(box.lo.begin(), box.lo.begin() + box.n);
    std::vector<double> hi(box.hi.begin(), box.hi.begin() + box.n);
    for (int i = 0; i < box.n; ++i)
        require(b.lo[i] < b.hi[i], ErrorCode::EmptyDomain, "restricted: empty intersection");
    nlohmann::json d = {{"kind", "restricted"}, {"base", base.descriptor()}, {"lo", lo},
                        {"hi", hi},             {"t1", box.t_lo},            {"t2", box.t_hi}};
    return Domain(DomainKind::Restricted, b, [base](const SpacetimePoint& p) { return base.contains(p); },
                  std::move(d), base.cylindrical());
}

} // namespace domains

/// Preimage {(x, t) : (b^k x, b^{2k} t) in dom}.
inline Domain scale_domain(const Domain& dom, double b, int k) {
    require(b > 1.0, ErrorCode::InvalidParameter, "scale_domain: need b > 1");
    const double lam = std::pow(b, k);
    Box box = dom.bbox();
    for (int i = 0; i < box.n; ++i) {
        box.lo[i] /= lam;
        box.hi[i] /= lam;
    }
    box.t_lo /= lam * lam;
    box.t_hi /= lam * lam;
    nlohmann::json d = {{"kind", "scaled"}, {"base", dom.descriptor()}, {"b", b}, {"k", k}};
    return Domain(DomainKind::Scaled, box, [dom, lam](const SpacetimePoint& p) {
        return dom.contains(parabolic_scale(p, lam));
    }, std::move(d), dom.cylindrical());
}

/// Builds a domain from its JSON descriptor.
inline Domain domain_from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        auto vec = [&](const char* key) { return j.at(key).get<std::vector<double>>(); };
        auto num = [&](const char* key) { return j.at(key).get<double>(); };
        auto point = [&](const char* key) {
            const auto v = vec(key);
            require(v.size() >= 2 && v.size() <= kMaxSpaceDim + 1, ErrorCode::InvalidDescriptor,
                    std::string("point '") + key + "' must have n + 1 coordinates");
            return SpacetimePoint(std::span<const double>(v.data(), v.size() - 1), v.back());
        };
        auto box_of = [&](int n) {
            const auto lo = vec("lo");
            const auto hi = vec("hi");
            require(static_cast<int>(lo.size()) == n && static_cast<int>(hi.size()) == n,
                    ErrorCode::InvalidDescriptor, "lo/hi must have n entries");
            Box b;
            b.n = n;
            for (int i = 0; i < n; ++i) {
                b.lo[i] = lo[i];
                b.hi[i] = hi[i];
            }
            b.t_lo = num("t1");
            b.t_hi = num("t2");
            return b;
        };

        if (kind == "cylinder") return domains::cylinder(vec("lo"), vec("hi"), num("t1"), num("t2"));
        if (kind == "ball_cylinder") return domains::ball_cylinder(vec("center"), num("radius"), num("t1"), num("t2"));
        if (kind == "tusk_complement")
            return domains::tusk_complement(vec("xhat"), num("R"), j.value("T", 1.0), j.value("L", 2.0));
        if (kind == "tusk_house") return domains::tusk_house(vec("xhat"), num("R"), num("R0"));
        if (kind == "petrovskii") return domains::petrovskii(num("A"), j.value("n", 1));
        if (kind == "ball_complement")
            return domains::ball_complement(point("xi1"), num("R1"), point("xi0"), num("delta"));
        if (kind == "ellipse_chain")
            return domains::ellipse_chain(vec("xhat"), num("a"), num("b"), num("c"), num("q"), num("R0"));
        if (kind == "wedge_cylinder")
            return domains::wedge_cylinder(vec("x0"), vec("y"), num("a"), vec("center"), num("radius"), num("t1"),
                                           num("t2"));
        if (kind == "generic") {
            const int n = j.at("n").get<int>();
            detail::check_dim(n);
            return domains::generic(box_of(n), j.at("expr").get<std::string>());
        }
        if (kind == "scaled") return scale_domain(domain_from_json(j.at("base")), num("b"), j.at("k").get<int>());
        if (kind == "restricted") {
            const Domain base = domain_from_json(j.at("base"));
            return domains::restricted(base, box_of(base.dim()));
        }
        throw Error(ErrorCode::InvalidDescriptor, "unknown domain kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidDescriptor, e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidParameter) throw Error(ErrorCode::InvalidDescriptor, e.what());
        throw;
    }
}

/// Bisects the segment from an inside point to an outside point down to
/// 1e-12 of its length; returns the outside endpoint of the final bracket.
inline SpacetimePoint project_to_boundary(const Domain& dom, const SpacetimePoint& inside,
                                          const SpacetimePoint& outside) {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (dom.contains(lerp(inside, outside, mid))) lo = mid;
        else hi = mid;
    }
    return lerp(inside, outside, hi);
}

/// Some interior point, found by quasi-random search of the bounding box.
inline SpacetimePoint find_interior_point(const Domain& dom, std::uint64_t max_tries = 1000000) {
    const Box& b = dom.bbox();
    HaltonSequence seq;
    for (std::uint64_t i = 0; i < max_tries; ++i, seq.advance()) {
        SpacetimePoint p;
        p.n = b.n;
        for (int d = 0; d < b.n; ++d) p.x[d] = b.lo[d] + seq.coordinate(d) * (b.hi[d] - b.lo[d]);
        p.t = b.t_lo + seq.coordinate(b.n) * (b.t_hi - b.t_lo);
        if (dom.contains(p)) return p;
    }
    throw Error(ErrorCode::EmptyDomain, "no interior point found in the bounding box");
}

namespace detail {

// Boundary point with the domain locally filling the half-space below a flat
// top face; such points do not belong to the parabolic boundary.
inline bool on_flat_top(const Domain& dom, const SpacetimePoint& z, double eps) {
    auto shifted = [&](int axis, double sx, double st) {
        SpacetimePoint q = z;
        if (axis >= 0) q.x[axis] += sx;
        q.t += st;
        return q;
    };
    if (dom.contains(shifted(-1, 0.0, eps)) || !dom.contains(shifted(-1, 0.0, -eps))) return false;
    for (int i = 0; i < z.n; ++i)
        for (double s : {-eps, eps})
            if (!dom.contains(shifted(i, s, -eps)) || dom.contains(shifted(i, s, eps))) return false;
    return true;
}

} // namespace detail

/// Deterministic samples of the parabolic boundary. Cylinders use the bottom
/// plus the lateral boundary; other domains use the topological boundary
/// without flat top faces, located by bisection from interior points.
inline std::vector<SpacetimePoint> parabolic_boundary_sample(const Domain& dom, std::size_t count,
                                                             std::uint64_t seed) {
    std::vector<SpacetimePoint> out;
    if (count == 0) return out;
    out.reserve(count);
    Rng rng(seed);
    const Box& b = dom.bbox();
    const int n = b.n;

    if (dom.kind() == DomainKind::Cylinder) {
        while (out.size() < count) {
            SpacetimePoint p;
            p.n = n;
            for (int i = 0; i < n; ++i) p.x[i] = rng.uniform(b.lo[i], b.hi[i]);
            if (rng.uniform() < 0.5) {
                p.t = b.t_lo;
            } else {
                p.t = rng.uniform(b.t_lo, b.t_hi);
                const int face = static_cast<int>(rng.next() % static_cast<std::uint64_t>(2 * n));
                p.x[face / 2] = (face % 2 == 0) ? b.lo[face / 2] : b.hi[face / 2];
            }
            out.push_back(p);
        }
        return out;
    }
    if (dom.kind() == DomainKind::BallCylinder) {
        const auto& d = dom.descriptor();
        const auto c = d.at("center").get<std::vector<double>>();
        const double r = d.at("radius").get<double>();
        while (out.size() < count) {
            SpacetimePoint p;
            p.n = n;
            const bool bottom = rng.uniform() < 0.5;
            if (n == 1) {
                const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
                p.x[0] = c[0] + (bottom ? rng.uniform(-r, r) : side * r);
            } else {
                const double ang = rng.uniform(0.0, 2.0 * std::numbers::pi);
                const double rad = bottom ? r * std::sqrt(rng.uniform()) : r;
                p.x[0] = c[0] + rad * std::cos(ang);
                p.x[1] = c[1] + rad * std::sin(ang);
            }
            p.t = bottom ? b.t_lo : rng.uniform(b.t_lo, b.t_hi);
            if (dom.contains(p)) continue;  // rounding put a lateral point inside
            out.push_back(p);
        }
        return out;
    }

    const SpacetimePoint seed_point = find_interior_point(dom);
    const double diag = b.diagonal();
    const double eps = 1e-7 * diag;
    std::size_t attempts = 0;
    while (out.size() < count) {
        require(++attempts < 1000 * count + 100000, ErrorCode::EmptyDomain,
                "could not locate parabolic boundary points");
        // random interior start
        SpacetimePoint start;
        start.n = n;
        for (int i = 0; i < n; ++i) start.x[i] = rng.uniform(b.lo[i], b.hi[i]);
        start.t = rng.uniform(b.t_lo, b.t_hi);
        if (!dom.contains(start)) start = seed_point;

        // random direction in R^{n+1}, marched until it leaves the domain
        std::array<double, kMaxSpaceDim + 1> dir{};
        double norm = 0.0;
        for (int i = 0; i <= n; ++i) {
            dir[i] = rng.uniform(-1.0, 1.0);
            norm += dir[i] * dir[i];
        }
        norm = std::sqrt(norm);
        if (norm < 1e-3) continue;
        SpacetimePoint end = start;
        const double step = diag / 256.0;
        SpacetimePoint prev = start;
        bool left = false;
        for (int s = 1; s <= 1024; ++s) {
            for (int i = 0; i < n; ++i) end.x[i] = start.x[i] + s * step * dir[i] / norm;
            end.t = start.t + s * step * dir[n] / norm;
            if (!dom.contains(end)) {
                left = true;
                break;
            }
            prev = end;
        }
        if (!left) continue;
        const SpacetimePoint z = project_to_boundary(dom, prev, end);
        if (detail::on_flat_top(dom, z, eps)) continue;
        out.push_back(z);
    }
    return out;
}

} // namespace pparabolic
