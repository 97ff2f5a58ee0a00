#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pparabolic/error.hpp"
#include "pparabolic/geometry.hpp"
#include "pparabolic/operator.hpp"
#include "pparabolic/sampling.hpp"
#include "pparabolic/solver.hpp"

namespace pparabolic {

enum class Verdict { Regular, Irregular, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Regular: return "regular";
    case Verdict::Irregular: return "irregular";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

/// Grid ladder used when none is given: finer in one space dimension.
inline std::vector<double> default_ladder(int n) {
    if (n == 1) return {1.0 / 128.0, 1.0 / 256.0, 1.0 / 512.0};
    return {1.0 / 32.0, 1.0 / 64.0};
}

struct ClassifyOptions {
    /// Empty means default_ladder(n).
    std::vector<double> ladder;
    double theta_reg = 0.25;
    double theta_irr = 0.25;
    /// An irregular verdict also needs the last four gaps to have stalled:
    /// relative decrease at most this.
    double stall_tol = 0.1;
    int j_min = 2;
    int j_max = 8;
};

/// sup |u - f0| over active nodes of Theta cap (B_r(x0) x (t0 - r^2, t0)).
struct Gap {
    double r = 0.0;
    std::optional<double> value;
};

struct HolderFit {
    double beta = 0.0;
    double C = 0.0;
    double residual = 0.0;  // RMS of the log-log regression
    std::size_t used = 0;
};

struct GridRun {
    double h = 0.0;
    std::vector<Gap> gaps;
    std::optional<double> final_gap;
    bool regular_like = false;
    bool irregular_like = false;
};

struct RegularityReport {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<Gap> gaps;  // finest grid
    std::optional<HolderFit> holder;
    std::vector<GridRun> runs;
    double scale = 0.0;  // S in r_j = 2^-j S
    double rho = 0.0;    // probe scale
};

namespace detail {

/// Length scale of a domain for the dyadic radii: the larger of the
/// bounding box's spatial half-extent and the square root of its time span.
inline double radius_scale(const Box& b) {
    double s = std::sqrt(b.t_hi - b.t_lo);
    for (int i = 0; i < b.n; ++i) s = std::max(s, 0.5 * (b.hi[i] - b.lo[i]));
    return s;
}

inline std::vector<double> dyadic_radii(double S, int j_min, int j_max) {
    std::vector<double> r;
    for (int j = j_min; j <= j_max; ++j) r.push_back(std::ldexp(S, -j));
    return r;
}

/// Accumulates sup |u - f0| per radius from slices strictly before t0.
class GapAccumulator {
public:
    GapAccumulator(const Grid& g, SpacetimePoint xi0, double f0, std::vector<double> radii)
        : g_(g), xi0_(xi0), f0_(f0), radii_(std::move(radii)), sup_(radii_.size()) {}

    void add(const Slice& s) {
        if (!(s.t < xi0_.t - 1e-9 * g_.dt)) return;
        const double dtau = xi0_.t - s.t;
        if (dtau >= radii_.front() * radii_.front()) return;
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            if (s.state[i] != NodeState::Active) continue;
            const SpacetimePoint q = g_.point(i, s.t);
            const double dx = std::sqrt(space_norm_sq(q, xi0_));
            const double v = std::abs(s.u[i] - f0_);
            for (std::size_t j = 0; j < radii_.size(); ++j) {
                const double r = radii_[j];
                if (dx >= r || dtau >= r * r) break;  // radii decrease
                sup_[j] = std::max(sup_[j].value_or(0.0), v);
            }
        }
    }

    std::vector<Gap> gaps() const {
        std::vector<Gap> out;
        for (std::size_t j = 0; j < radii_.size(); ++j) out.push_back({radii_[j], sup_[j]});
        return out;
    }

private:
    Grid g_;
    SpacetimePoint xi0_;
    double f0_;
    std::vector<double> radii_;
    std::vector<std::optional<double>> sup_;
};

inline std::optional<double> final_gap(const std::vector<Gap>& gaps) {
    for (auto it = gaps.rbegin(); it != gaps.rend(); ++it)
        if (it->value) return it->value;
    return std::nullopt;
}

inline std::vector<double> defined_gaps(const std::vector<Gap>& gaps) {
    std::vector<double> v;
    for (const auto& g : gaps)
        if (g.value) v.push_back(*g.value);
    return v;
}

inline bool last_four_decreasing(const std::vector<Gap>& gaps) {
    const auto v = defined_gaps(gaps);
    if (v.size() < 4) return false;
    for (std::size_t i = v.size() - 3; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

inline bool last_four_stalled(const std::vector<Gap>& gaps, double tol) {
    const auto v = defined_gaps(gaps);
    if (v.size() < 4) return false;
    const double first = v[v.size() - 4];
    return first - v.back() <= tol * first;
}

inline void require_boundary_point(const Domain& dom, const SpacetimePoint& xi0, double S) {
    require(xi0.n == dom.dim(), ErrorCode::NotABoundaryPoint, "point dimension differs from the domain");
    if (dom.contains(xi0)) throw Error(ErrorCode::NotABoundaryPoint, "point lies inside the domain");
    const double r = std::ldexp(S, -8);
    HaltonSequence seq;
    for (int i = 0; i < 4096; ++i, seq.advance()) {
        SpacetimePoint q = xi0;
        for (int d = 0; d < xi0.n; ++d) q.x[d] += r * (2.0 * seq.coordinate(d) - 1.0);
        q.t += r * r * (2.0 * seq.coordinate(xi0.n) - 1.0);
        if (dom.contains(q)) return;
    }
    throw Error(ErrorCode::NotABoundaryPoint, "no interior point near the given point");
}

} // namespace detail

/// Probe data min(1, d_par(xi, xi0)/rho), d_par = |x - x0| + |t - t0|^{1/2}.
inline BoundaryData probe_data(const SpacetimePoint& xi0, double rho) {
    return [xi0, rho](const SpacetimePoint& q) {
        return std::min(1.0, (std::sqrt(space_norm_sq(q, xi0)) + std::sqrt(std::abs(q.t - xi0.t))) / rho);
    };
}

/// Least-squares fit of log gap against log r: gap ~ C r^beta.
inline HolderFit fit_holder(const std::vector<Gap>& gaps) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& g : gaps)
        if (g.value && *g.value > 0.0) pts.emplace_back(std::log(g.r), std::log(*g.value));
    if (pts.size() < 3) throw Error(ErrorCode::InsufficientDecades, "fewer than 3 usable radii for the fit");
    const double m = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    HolderFit f;
    f.beta = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icpt = (sy - f.beta * sx) / m;
    f.C = std::exp(icpt);
    double ss = 0;
    for (auto [x, y] : pts) ss += (y - icpt - f.beta * x) * (y - icpt - f.beta * x);
    f.residual = std::sqrt(ss / m);
    f.used = pts.size();
    return f;
}

/// Gap profile of stored slices of a solve.
inline std::vector<Gap> gap_profile(const GridFunction& u, const SpacetimePoint& xi0, double f0,
                                    const std::vector<double>& radii) {
    detail::GapAccumulator acc(u.grid(), xi0, f0, radii);
    for (const auto& s : u.slices()) acc.add(s);
    return acc.gaps();
}

/// Hölder fit over the dyadic radii of a stored solve.
inline HolderFit fit_holder(const GridFunction& u, const SpacetimePoint& xi0, double f0,
                            const std::vector<double>& radii) {
    return fit_holder(gap_profile(u, xi0, f0, radii));
}

/// Numerical regularity verdict at xi0 from solves of the probe problem on
/// each grid of the ladder.
inline RegularityReport classify(const Domain& dom, const SpacetimePoint& xi0, const OperatorParams& params,
                                 const ClassifyOptions& opt = {}) {
    params.validate();
    const std::vector<double> ladder = opt.ladder.empty() ? default_ladder(dom.dim()) : opt.ladder;
    require(opt.j_min < opt.j_max, ErrorCode::InvalidParameter, "need j_min < j_max");
    RegularityReport rep;
    rep.scale = detail::radius_scale(dom.bbox());
    rep.rho = dom.bbox().parabolic_diameter() / 4.0;
    detail::require_boundary_point(dom, xi0, rep.scale);
    const auto radii = detail::dyadic_radii(rep.scale, opt.j_min, opt.j_max);
    const BoundaryData F = probe_data(xi0, rep.rho);

    for (double h : ladder) {
        GridSpec gs;
        gs.h = h;
        gs.store_stride = 0;
        gs.t_stop = xi0.t;
        Solver solver(dom, F, params, gs);
        detail::GapAccumulator acc(solver.grid(), xi0, 0.0, radii);
        solver.solve([&](const Slice& s) { acc.add(s); });
        GridRun run;
        run.h = h;
        run.gaps = acc.gaps();
        run.final_gap = detail::final_gap(run.gaps);
        run.regular_like = run.final_gap && *run.final_gap < opt.theta_reg && detail::last_four_decreasing(run.gaps);
        run.irregular_like =
            run.final_gap && *run.final_gap > opt.theta_irr && detail::last_four_stalled(run.gaps, opt.stall_tol);
        rep.runs.push_back(std::move(run));
    }

    // the verdict must hold on the two finest grids
    const std::size_t m = rep.runs.size();
    const GridRun& fine = rep.runs.back();
    const GridRun& prev = rep.runs[m >= 2 ? m - 2 : 0];
    if (fine.regular_like && prev.regular_like) rep.verdict = Verdict::Regular;
    else if (fine.irregular_like && prev.irregular_like) rep.verdict = Verdict::Irregular;
    rep.gaps = fine.gaps;
    if (rep.verdict == Verdict::Regular) {
        try {
            rep.holder = fit_holder(rep.gaps);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientDecades) throw;
        }
    }
    return rep;
}

struct SweepRow {
    double A = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<double> final_gap;
    double threshold = 0.0;
};

/// Classifies the last point of Petrovskii(A) for each A.
inline std::vector<SweepRow> petrovskii_sweep(double p, int n, const std::vector<double>& A_list,
                                              const ClassifyOptions& opt = {}) {
    std::vector<SweepRow> rows;
    const SpacetimePoint xi0(std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.0);
    for (double A : A_list) {
        require(A > 0.0, ErrorCode::InvalidParameter, "A must be positive");
        const RegularityReport r = classify(domains::petrovskii(A, n), xi0, OperatorParams{p}, opt);
        rows.push_back({A, r.verdict, detail::final_gap(r.gaps), 4.0 * (p - 1.0)});
    }
    return rows;
}

} // namespace pparabolic
