#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pparabolic/error.hpp"
#include "pparabolic/geometry.hpp"
#include "pparabolic/operator.hpp"
#include "pparabolic/selling.hpp"

namespace pparabolic {

/// Continuous boundary data, defined on all of space-time; only its values on
/// the parabolic boundary matter.
using BoundaryData = std::function<double(const SpacetimePoint&)>;

enum class NodeState : std::uint8_t {
    Outside = 0,
    Data = 1,    // bottom boundary node carrying boundary data
    Active = 2,  // interior node
};

struct GridSpec {
    double h = 1.0 / 64.0;
    /// Requested time step; 0 picks the largest stable step dividing the time range.
    double dt = 0.0;
    /// Keep every k-th slice (the last one is always kept); 0 keeps only the last.
    std::size_t store_stride = 1;
    /// March only up to this time.
    std::optional<double> t_stop;
    /// Gradient threshold; defaults to h^2 max(1, |p - 2|).
    std::optional<double> grad_tol;
};

/// Largest stable explicit time step.
inline double cfl_limit(double h, int n, double p) { return h * h / (2.0 * (n + std::abs(p - 2.0)) + 1.0); }

/// Uniform lattice x = k h over the bounding box, time levels t_lo + m dt.
struct Grid {
    int n = 1;
    double h = 0.0;
    double dt = 0.0;
    double t_lo = 0.0;
    int n_steps = 0;
    std::array<long, 2> k_lo{0, 0};
    std::array<long, 2> count{1, 1};

    std::size_t size() const { return static_cast<std::size_t>(count[0] * count[1]); }
    double time(int m) const { return t_lo + m * dt; }

    std::array<long, 2> lattice(std::size_t idx) const {
        const long i = static_cast<long>(idx);
        return {k_lo[0] + i % count[0], k_lo[1] + i / count[0]};
    }
    /// Index of lattice point k, or -1 if it falls off the lattice.
    long index(long k0, long k1) const {
        const long i0 = k0 - k_lo[0], i1 = k1 - k_lo[1];
        if (i0 < 0 || i0 >= count[0] || i1 < 0 || i1 >= count[1]) return -1;
        return i0 + count[0] * i1;
    }
    SpacetimePoint point(std::size_t idx, double t) const {
        const auto k = lattice(idx);
        SpacetimePoint p;
        p.n = n;
        p.x[0] = static_cast<double>(k[0]) * h;
        p.x[1] = n > 1 ? static_cast<double>(k[1]) * h : 0.0;
        p.t = t;
        return p;
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.n == b.n && a.h == b.h && a.dt == b.dt && a.t_lo == b.t_lo && a.n_steps == b.n_steps &&
               a.k_lo == b.k_lo && a.count == b.count;
    }
};

inline Grid make_grid(const Domain& dom, const GridSpec& spec, double p) {
    require(spec.h > 0.0 && std::isfinite(spec.h), ErrorCode::InvalidParameter, "grid step h must be positive");
    const Box& b = dom.bbox();
    Grid g;
    g.n = b.n;
    g.h = spec.h;
    for (int i = 0; i < b.n; ++i) {
        const long lo = static_cast<long>(std::ceil(b.lo[i] / spec.h));
        const long hi = static_cast<long>(std::floor(b.hi[i] / spec.h));
        require(hi >= lo, ErrorCode::EmptyDomain, "bounding box contains no lattice nodes");
        g.k_lo[i] = lo;
        g.count[i] = hi - lo + 1;
    }
    const double span = b.t_hi - b.t_lo;
    const double dt_max = cfl_limit(spec.h, b.n, p);
    if (spec.dt > 0.0) {
        if (spec.dt > dt_max) throw Error(ErrorCode::CFLViolation, "dt exceeds h^2 / (2(n + |p - 2|) + 1)");
        g.n_steps = static_cast<int>(std::ceil(span / spec.dt - 1e-9));
    } else {
        g.n_steps = static_cast<int>(std::ceil(span / dt_max));
    }
    g.dt = span / g.n_steps;
    g.t_lo = b.t_lo;
    return g;
}

struct Slice {
    int m = 0;
    double t = 0.0;
    std::vector<double> u;
    std::vector<NodeState> state;

    bool known(std::size_t idx) const { return state[idx] != NodeState::Outside; }
};

using SliceObserver = std::function<void(const Slice&)>;

/// Stored slices of a solve, plus the range of boundary values it read.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<Slice> slices, double data_min, double data_max)
        : grid_(grid), slices_(std::move(slices)), data_min_(data_min), data_max_(data_max) {}

    const Grid& grid() const { return grid_; }
    const std::vector<Slice>& slices() const { return slices_; }
    const Slice& last() const { return slices_.back(); }
    double data_min() const { return data_min_; }
    double data_max() const { return data_max_; }

private:
    Grid grid_;
    std::vector<Slice> slices_;
    double data_min_;
    double data_max_;
};

/// Explicit monotone scheme for u_t = Delta_p^N u on a domain.
///
/// At a node with discrete gradient above grad_tol the operator is
/// tr(A D^2 u) with A = I + (p - 2) nu nu^T, discretized through a Selling
/// decomposition of A into nonnegative multiples of lattice second
/// differences. Below grad_tol nu is replaced by an eigenvector of the
/// discrete Hessian for the envelope eigenvalue. Off-domain stencil points
/// read the boundary data at the boundary crossing along the stencil arm.
class Solver {
public:
    Solver(Domain dom, BoundaryData F, OperatorParams params, GridSpec spec)
        : dom_(std::move(dom)), F_(std::move(F)), params_(params), spec_(spec) {
        params_.validate();
        require(static_cast<bool>(F_), ErrorCode::InvalidParameter, "boundary data missing");
        grid_ = make_grid(dom_, spec_, params_.p);
        const double p = params_.p;
        grad_tol_ = spec_.grad_tol.value_or(spec_.h * spec_.h * std::max(1.0, std::abs(p - 2.0)));
        eta_ = 1e-6 * grid_.dt;
        if (dom_.cylindrical()) build_cylinder_cache();
        last_step_ = grid_.n_steps;
        if (spec_.t_stop) {
            const double tol = 1e-9 * grid_.dt;
            last_step_ = 0;
            while (last_step_ < grid_.n_steps && grid_.time(last_step_ + 1) <= *spec_.t_stop + tol) ++last_step_;
        }
    }

    const Grid& grid() const { return grid_; }
    int last_step() const { return last_step_; }
    double grad_tol() const { return grad_tol_; }

    Slice initial_slice() const { return advance(nullptr, 0); }
    Slice step(const Slice& prev) const { return advance(&prev, prev.m + 1); }

    GridFunction solve(const SliceObserver& observer = {}) const {
        std::vector<Slice> kept;
        Slice cur = initial_slice();
        for (;;) {
            if (observer) observer(cur);
            const bool last = cur.m >= last_step_;
            if (last || (spec_.store_stride > 0 && cur.m % static_cast<int>(spec_.store_stride) == 0))
                kept.push_back(cur);
            if (last) break;
            cur = step(cur);
        }
        return GridFunction(grid_, std::move(kept), data_min_, data_max_);
    }

private:
    struct Arm {
        double value;
        double theta;  // distance to the arm's end, in units of the lattice offset
    };

    bool member(std::size_t idx, double t) const {
        if (!dom_.cylindrical()) return dom_.contains(grid_.point(idx, t));
        const Box& b = dom_.bbox();
        return t > b.t_lo && t < b.t_hi && spatial_mask_[idx] != 0;
    }

    // Bisection parameter of the boundary crossing from an inside point to an
    // outside point, to 1e-12 of the segment.
    double crossing(const SpacetimePoint& in, const SpacetimePoint& out) const {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            if (dom_.contains(lerp(in, out, mid))) lo = mid;
            else hi = mid;
        }
        return hi;
    }

    static std::uint64_t cache_key(std::size_t idx, int o0, int o1) {
        return (static_cast<std::uint64_t>(idx) << 16) | (static_cast<std::uint64_t>(o0 + 128) << 8) |
               static_cast<std::uint64_t>(o1 + 128);
    }

    static constexpr int kCacheReach = 3;

    void build_cylinder_cache() {
        const Box& b = dom_.bbox();
        const double t_mid = 0.5 * (b.t_lo + b.t_hi);
        const std::size_t N = grid_.size();
        spatial_mask_.assign(N, 0);
        for (std::size_t i = 0; i < N; ++i) spatial_mask_[i] = dom_.contains(grid_.point(i, t_mid)) ? 1 : 0;
        const int r1 = grid_.n > 1 ? kCacheReach : 0;
        deep_.assign(N, 0);
        for (std::size_t i = 0; i < N; ++i) {
            if (!spatial_mask_[i]) continue;
            const auto k = grid_.lattice(i);
            bool all = true;
            for (int o1 = -r1; o1 <= r1 && all; ++o1)
                for (int o0 = -kCacheReach; o0 <= kCacheReach && all; ++o0) {
                    const long j = grid_.index(k[0] + o0, k[1] + o1);
                    all = j >= 0 && spatial_mask_[static_cast<std::size_t>(j)];
                }
            deep_[i] = all ? 1 : 0;
        }
        for (std::size_t i = 0; i < N; ++i) {
            if (!spatial_mask_[i]) continue;
            const auto k = grid_.lattice(i);
            for (int o1 = -r1; o1 <= r1; ++o1)
                for (int o0 = -kCacheReach; o0 <= kCacheReach; ++o0) {
                    if (o0 == 0 && o1 == 0) continue;
                    const long j = grid_.index(k[0] + o0, k[1] + o1);
                    if (j >= 0 && spatial_mask_[static_cast<std::size_t>(j)]) continue;
                    SpacetimePoint in = grid_.point(i, t_mid);
                    SpacetimePoint out = in;
                    out.x[0] += o0 * grid_.h;
                    if (grid_.n > 1) out.x[1] += o1 * grid_.h;
                    ghost_cache_.emplace(cache_key(i, o0, o1), crossing(in, out));
                }
        }
    }

    double F_at(const SpacetimePoint& p, double& lo, double& hi) const {
        const double v = F_(p);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        return v;
    }

    // Value at node idx + (o0, o1) on the previous slice, or boundary data at
    // the crossing when that point is not a known node.
    Arm arm(const Slice& prev, std::size_t idx, const std::array<long, 2>& k, int o0, int o1, double t_c, double& lo,
            double& hi) const {
        const long j = grid_.index(k[0] + o0, k[1] + o1);
        if (j >= 0 && prev.known(static_cast<std::size_t>(j))) return {prev.u[static_cast<std::size_t>(j)], 1.0};

        SpacetimePoint in = grid_.point(idx, t_c);
        SpacetimePoint out = in;
        out.x[0] += o0 * grid_.h;
        if (grid_.n > 1) out.x[1] += o1 * grid_.h;
        double s = 1.0;
        if (dom_.cylindrical()) {
            const auto it = ghost_cache_.find(cache_key(idx, o0, o1));
            s = it != ghost_cache_.end() ? it->second : crossing(in, out);
        } else if (dom_.contains(in) && !dom_.contains(out)) {
            s = crossing(in, out);
        }
        return {F_at(lerp(in, out, s), lo, hi), s};
    }

    // Nonuniform second difference along an offset of squared length len2*h^2,
    // with arms at theta_plus and theta_minus.
    double second_difference(double u, const Arm& a, const Arm& b, double len2, double& centre) const {
        const double h2 = grid_.h * grid_.h * len2;
        const double tp = a.theta, tm = b.theta;
        centre = 2.0 / (tp * tm * h2);
        return 2.0 * (tm * (a.value - u) + tp * (b.value - u)) / (tp * tm * (tp + tm) * h2);
    }

    struct Update {
        double value;
        double lo;
        double hi;
    };

    Update update_node(const Slice& prev, std::size_t idx, double t_c) const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        if (!deep_.empty() && deep_[idx]) {
            const long stride = grid_.count[0];
            const auto pos = grid_.lattice(idx);
            auto get = [&](int o0, int o1) {
                if (std::abs(o0) > kCacheReach || std::abs(o1) > kCacheReach) return arm(prev, idx, pos, o0, o1, t_c, lo, hi);
                return Arm{prev.u[static_cast<std::size_t>(static_cast<long>(idx) + o0 + o1 * stride)], 1.0};
            };
            const double v = update_core(prev.u[idx], get);
            return {v, lo, hi};
        }
        const auto pos = grid_.lattice(idx);
        auto get = [&](int o0, int o1) { return arm(prev, idx, pos, o0, o1, t_c, lo, hi); };
        const double v = update_core(prev.u[idx], get);
        return {v, lo, hi};
    }

    template <class Get>
    double update_core(double u, Get&& get) const {
        const double p = params_.p;
        const double dt = grid_.dt;

        if (grid_.n == 1) {
            Arm a = get(1, 0);
            Arm b = get(-1, 0);
            double c = 0.0;
            const double d = second_difference(u, a, b, 1.0, c);
            return relax(u, dt * (p - 1.0) * d, dt * (p - 1.0) * c);
        }

        const Arm xp = get(1, 0), xm = get(-1, 0);
        const Arm yp = get(0, 1), ym = get(0, -1);
        std::array<double, 2> nu{1.0, 0.0};
        if (p != 2.0) {
            const double g0 = (xp.value - xm.value) / ((xp.theta + xm.theta) * grid_.h);
            const double g1 = (yp.value - ym.value) / ((yp.theta + ym.theta) * grid_.h);
            const double g = std::sqrt(g0 * g0 + g1 * g1);
            if (g > grad_tol_) {
                nu = {g0 / g, g1 / g};
            } else {
                double c = 0.0;
                const double h00 = second_difference(u, xp, xm, 1.0, c);
                const double h11 = second_difference(u, yp, ym, 1.0, c);
                const double dpp = second_difference(u, get(1, 1), get(-1, -1), 2.0, c);
                const double dpm = second_difference(u, get(1, -1), get(-1, 1), 2.0, c);
                // D_(1,1) and D_(1,-1) are normalized by |e|^2 = 2
                const double h01 = 0.5 * (dpp - dpm);
                nu = envelope_direction(h00, h01, h11, p);
            }
        }

        std::array<SellingTerm, 3> terms;
        if (p == 2.0) {
            terms = {SellingTerm{{1, 0}, 1.0}, SellingTerm{{0, 1}, 1.0}, SellingTerm{{1, 1}, 0.0}};
        } else {
            const double q = p - 2.0;
            terms = selling_decomposition(1.0 + q * nu[0] * nu[0], q * nu[0] * nu[1], 1.0 + q * nu[1] * nu[1]);
        }

        std::array<Arm, 6> arms{};
        for (int k = 0; k < 3; ++k) {
            if (terms[k].rho == 0.0) continue;
            const auto& e = terms[k].e;
            arms[2 * k] = e[0] == 1 && e[1] == 0 ? xp : e[0] == 0 && e[1] == 1 ? yp : get(e[0], e[1]);
            arms[2 * k + 1] = e[0] == 1 && e[1] == 0 ? xm : e[0] == 0 && e[1] == 1 ? ym : get(-e[0], -e[1]);
        }
        auto total = [&](double& centre) {
            double L = 0.0;
            centre = 0.0;
            for (int k = 0; k < 3; ++k) {
                if (terms[k].rho == 0.0) continue;
                const auto& e = terms[k].e;
                const double len2 = static_cast<double>(e[0] * e[0] + e[1] * e[1]);
                double c = 0.0;
                // second differences here are scaled by |e|^2 h^2 so that rho
                // multiplies the plain lattice difference
                L += terms[k].rho * len2 * second_difference(u, arms[2 * k], arms[2 * k + 1], len2, c);
                centre += terms[k].rho * len2 * c;
            }
            return L;
        };
        double centre = 0.0;
        const double L = total(centre);
        return relax(u, dt * L, dt * centre);
    }

    // Explicit step u + dL when the centre weight w = dt * sum of coefficients
    // is at most 1; otherwise the centre is taken implicitly, which keeps the
    // update monotone next to a close boundary crossing.
    static double relax(double u, double dL, double w) { return w <= 1.0 ? u + dL : u + dL / (1.0 + w); }

    static std::array<double, 2> envelope_direction(double h00, double h01, double h11, double p) {
        const double mean = 0.5 * (h00 + h11);
        const double rad = std::hypot(0.5 * (h00 - h11), h01);
        const double lam = p >= 2.0 ? mean - rad : mean + rad;
        if (rad == 0.0) return {1.0, 0.0};
        // rows of H - lam I; pick the better conditioned null vector
        const std::array<double, 2> v1{h01, lam - h00};
        const std::array<double, 2> v2{lam - h11, h01};
        const auto& v = std::hypot(v1[0], v1[1]) >= std::hypot(v2[0], v2[1]) ? v1 : v2;
        const double nv = std::hypot(v[0], v[1]);
        return {v[0] / nv, v[1] / nv};
    }

    Slice advance(const Slice* prev, int m) const {
        const std::size_t N = grid_.size();
        Slice s;
        s.m = m;
        s.t = grid_.time(m);
        s.u.assign(N, std::numeric_limits<double>::quiet_NaN());
        s.state.assign(N, NodeState::Outside);
        const double t = s.t;
        const double t_prev = m > 0 ? grid_.time(m - 1) : t;
        double lo = data_min_, hi = data_max_;

#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi)
        for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(N); ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            const SpacetimePoint x = grid_.point(i, t);
            if (member(i, t)) {
                s.state[i] = NodeState::Active;
                if (prev && prev->known(i)) {
                    const double t_c = prev->state[i] == NodeState::Data ? t_prev + eta_ : t_prev;
                    const Update up = update_node(*prev, i, t_c);
                    s.u[i] = up.value;
                    lo = std::min(lo, up.lo);
                    hi = std::max(hi, up.hi);
                } else if (prev) {
                    // newly covered: data where the node entered the domain
                    const double sc = crossing(x, grid_.point(i, t_prev));
                    s.u[i] = F_at(lerp(x, grid_.point(i, t_prev), sc), lo, hi);
                } else {
                    s.u[i] = F_at(x, lo, hi);
                }
            } else if (m < grid_.n_steps && member(i, t + eta_)) {
                s.state[i] = NodeState::Data;
                s.u[i] = F_at(x, lo, hi);
            }
        }
        data_min_ = lo;
        data_max_ = hi;
        return s;
    }

    Domain dom_;
    BoundaryData F_;
    OperatorParams params_;
    GridSpec spec_;
    Grid grid_;
    double grad_tol_ = 0.0;
    double eta_ = 0.0;
    int last_step_ = 0;
    std::vector<std::uint8_t> spatial_mask_;
    std::vector<std::uint8_t> deep_;  // cylindrical only: every node within kCacheReach is inside
    std::unordered_map<std::uint64_t, double> ghost_cache_;
    mutable double data_min_ = std::numeric_limits<double>::infinity();
    mutable double data_max_ = -std::numeric_limits<double>::infinity();
};

inline GridFunction solve(const Domain& dom, const BoundaryData& F, const OperatorParams& params,
                          const GridSpec& spec, const SliceObserver& observer = {}) {
    return Solver(dom, F, params, spec).solve(observer);
}

/// True iff u >= v at every known node of every stored slice.
inline bool discrete_comparison(const GridFunction& u, const GridFunction& v) {
    require(u.grid() == v.grid() && u.slices().size() == v.slices().size(), ErrorCode::GridMismatch,
            "grid functions live on different grids");
    for (std::size_t s = 0; s < u.slices().size(); ++s) {
        const Slice& a = u.slices()[s];
        const Slice& b = v.slices()[s];
        require(a.m == b.m && a.state == b.state, ErrorCode::GridMismatch, "grid functions have different node sets");
        for (std::size_t i = 0; i < a.u.size(); ++i)
            if (a.known(i) && a.u[i] < b.u[i]) return false;
    }
    return true;
}

/// Multilinear interpolation of a slice at a spatial point; empty if any
/// cell corner is not a known node.
inline std::optional<double> interpolate(const Grid& g, const Slice& s, const SpacetimePoint& p) {
    std::array<long, 2> base{0, 0};
    std::array<double, 2> w{0.0, 0.0};
    for (int d = 0; d < g.n; ++d) {
        const double q = p.x[d] / g.h;
        base[d] = static_cast<long>(std::floor(q));
        w[d] = q - static_cast<double>(base[d]);
    }
    if (g.n == 1) base[1] = g.k_lo[1];
    double acc = 0.0;
    const int c1 = g.n > 1 ? 2 : 1;
    for (int b1 = 0; b1 < c1; ++b1)
        for (int b0 = 0; b0 < 2; ++b0) {
            const double wt = (b0 ? w[0] : 1.0 - w[0]) * (g.n > 1 ? (b1 ? w[1] : 1.0 - w[1]) : 1.0);
            if (wt == 0.0) continue;
            const long j = g.index(base[0] + b0, base[1] + b1);
            if (j < 0 || !s.known(static_cast<std::size_t>(j))) return std::nullopt;
            acc += wt * s.u[static_cast<std::size_t>(j)];
        }
    return acc;
}

} // namespace pparabolic
