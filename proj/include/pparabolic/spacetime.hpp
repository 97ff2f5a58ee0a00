#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "pparabolic/error.hpp"

namespace pparabolic {

inline constexpr int kMaxSpaceDim = 2;

/// A point xi = (x, t) with x in R^n, n in {1, 2}.
struct SpacetimePoint {
    std::array<double, kMaxSpaceDim> x{};
    double t = 0.0;
    int n = 1;

    SpacetimePoint() = default;
    SpacetimePoint(double x0, double time) : x{x0, 0.0}, t(time), n(1) {}
    SpacetimePoint(double x0, double x1, double time) : x{x0, x1}, t(time), n(2) {}
    SpacetimePoint(std::span<const double> xs, double time) : t(time), n(static_cast<int>(xs.size())) {
        require(n >= 1 && n <= kMaxSpaceDim, ErrorCode::InvalidParameter,
                "spatial dimension must be 1 or 2, got " + std::to_string(n));
        for (int i = 0; i < n; ++i) x[i] = xs[i];
    }

    std::span<const double> space() const { return {x.data(), static_cast<std::size_t>(n)}; }

    bool finite() const {
        for (int i = 0; i < n; ++i)
            if (!std::isfinite(x[i])) return false;
        return std::isfinite(t);
    }

    friend bool operator==(const SpacetimePoint& a, const SpacetimePoint& b) {
        if (a.n != b.n || a.t != b.t) return false;
        for (int i = 0; i < a.n; ++i)
            if (a.x[i] != b.x[i]) return false;
        return true;
    }
};

inline double space_norm_sq(const SpacetimePoint& a, const SpacetimePoint& b) {
    double s = 0.0;
    for (int i = 0; i < a.n; ++i) s += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
    return s;
}

/// Euclidean distance in R^{n+1}.
inline double distance(const SpacetimePoint& a, const SpacetimePoint& b) {
    return std::sqrt(space_norm_sq(a, b) + (a.t - b.t) * (a.t - b.t));
}

/// Parabolic distance |x - y| + |t - s|^{1/2}.
inline double parabolic_distance(const SpacetimePoint& a, const SpacetimePoint& b) {
    return std::sqrt(space_norm_sq(a, b)) + std::sqrt(std::abs(a.t - b.t));
}

/// Affine combination (1 - s) a + s b.
inline SpacetimePoint lerp(const SpacetimePoint& a, const SpacetimePoint& b, double s) {
    SpacetimePoint r = a;
    for (int i = 0; i < a.n; ++i) r.x[i] = a.x[i] + s * (b.x[i] - a.x[i]);
    r.t = a.t + s * (b.t - a.t);
    return r;
}

/// (lambda x, lambda^2 t).
inline SpacetimePoint parabolic_scale(const SpacetimePoint& xi, double lambda) {
    require(lambda > 0.0, ErrorCode::InvalidParameter, "parabolic scale factor must be positive");
    SpacetimePoint r = xi;
    for (int i = 0; i < xi.n; ++i) r.x[i] *= lambda;
    r.t *= lambda * lambda;
    return r;
}

/// Axis-aligned box in R^{n+1}; the time extent is stored separately.
struct Box {
    int n = 1;
    std::array<double, kMaxSpaceDim> lo{};
    std::array<double, kMaxSpaceDim> hi{};
    double t_lo = 0.0;
    double t_hi = 0.0;

    /// Strict interior test; points on a face are outside.
    bool contains_strictly(const SpacetimePoint& p) const {
        if (!(p.t > t_lo && p.t < t_hi)) return false;
        for (int i = 0; i < n; ++i)
            if (!(p.x[i] > lo[i] && p.x[i] < hi[i])) return false;
        return true;
    }

    double diagonal() const {
        double s = (t_hi - t_lo) * (t_hi - t_lo);
        for (int i = 0; i < n; ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
        return std::sqrt(s);
    }

    double spatial_diameter() const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
        return std::sqrt(s);
    }

    /// Spatial diameter plus the square root of the time extent.
    double parabolic_diameter() const { return spatial_diameter() + std::sqrt(t_hi - t_lo); }
};

inline Box intersect(const Box& a, const Box& b) {
    Box r = a;
    for (int i = 0; i < a.n; ++i) {
        r.lo[i] = std::max(a.lo[i], b.lo[i]);
        r.hi[i] = std::min(a.hi[i], b.hi[i]);
    }
    r.t_lo = std::max(a.t_lo, b.t_lo);
    r.t_hi = std::min(a.t_hi, b.t_hi);
    return r;
}

} // namespace pparabolic
