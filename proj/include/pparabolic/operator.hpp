#pragma once

#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <vector>

#include "pparabolic/error.hpp"
#include "pparabolic/fields.hpp"
#include "pparabolic/geometry.hpp"

namespace pparabolic {

struct OperatorParams {
    double p = 2.0;
    double grad_tol = 1e-10;
    double slack = 0.0;

    void validate() const {
        require(std::isfinite(p) && p > 1.0, ErrorCode::InvalidParameter, "p must satisfy 1 < p < inf");
        require(grad_tol >= 0.0, ErrorCode::InvalidParameter, "grad_tol must be nonnegative");
        require(slack >= 0.0, ErrorCode::InvalidParameter, "slack must be nonnegative");
    }
};

/// Eigenvalues (ascending) of a symmetric matrix with n <= 2.
inline std::array<double, 2> sym_eigenvalues(const SymMatrix& m) {
    if (m.dim() == 1) return {m(0, 0), m(0, 0)};
    require(m.dim() == 2, ErrorCode::InvalidParameter, "closed-form eigenvalues need n <= 2");
    const double mean = 0.5 * (m(0, 0) + m(1, 1));
    const double rad = std::hypot(0.5 * (m(0, 0) - m(1, 1)), m(0, 1));
    return {mean - rad, mean + rad};
}

/// Smallest eigenvalue if p >= 2, largest if p < 2.
inline double envelope_eigenvalue(const SymMatrix& hess, double p) {
    const auto ev = sym_eigenvalues(hess);
    return p >= 2.0 ? ev[0] : ev[1];
}

/// <D^2u nu, nu> with nu = grad/|grad|.
inline double normalized_inf_laplacian(const Jet2& j, double grad_tol = 1e-10) {
    const double g = j.grad_norm();
    if (!(g > grad_tol)) throw Error(ErrorCode::ZeroGradient, "gradient below grad_tol");
    std::vector<double> nu(j.grad);
    for (double& c : nu) c /= g;
    return j.hess.quadratic_form(nu);
}

inline double normalized_p_laplacian(const Jet2& j, const OperatorParams& params) {
    return j.hess.trace() + (params.p - 2.0) * normalized_inf_laplacian(j, params.grad_tol);
}

/// Which branch of the classical criterion a sample fell into.
enum class CheckBranch { GradNonzero, GradZeroPsd, GradZeroVacuous };

struct BranchCounts {
    std::size_t grad_nonzero = 0;
    std::size_t grad_zero_psd = 0;
    std::size_t grad_zero_vacuous = 0;
};

struct CheckReport {
    bool pass = true;
    std::size_t n_samples = 0;
    std::size_t n_failed = 0;
    /// Smallest residual over non-vacuous samples (+inf if none).
    double worst_residual = std::numeric_limits<double>::infinity();
    SpacetimePoint worst_point{};
    BranchCounts branch_counts{};
};

struct SupersolutionResidual {
    CheckBranch branch;
    double residual;  // u_t - Delta_p^N u, or u_t on the PSD branch, 0 if vacuous
};

/// Residual of the classical supersolution criterion at a single jet.
inline SupersolutionResidual supersolution_residual(const Jet2& j, const OperatorParams& params) {
    if (j.grad_norm() > params.grad_tol) return {CheckBranch::GradNonzero, j.dt - normalized_p_laplacian(j, params)};
    const double lmin = j.hess.dim() == 0 ? 0.0 : sym_eigenvalues(j.hess)[0];
    if (lmin >= -params.slack) return {CheckBranch::GradZeroPsd, j.dt};
    return {CheckBranch::GradZeroVacuous, 0.0};
}

namespace detail {

inline bool lex_less(const SpacetimePoint& a, const SpacetimePoint& b) {
    for (int i = 0; i < a.n; ++i)
        if (a.x[i] != b.x[i]) return a.x[i] < b.x[i];
    return a.t < b.t;
}

inline Jet2 negate(const Jet2& j) { return jet::scale(j, -1.0); }

inline CheckReport run_check(const ScalarField& field, const Domain& dom, const OperatorParams& params,
                             const std::vector<SpacetimePoint>& samples, bool negated) {
    params.validate();
    const std::size_t m = samples.size();
    std::vector<SupersolutionResidual> res(m);
    std::vector<int> status(m, 0);  // 0 ok, 1 outside, 2 singular, 3 other error
    std::vector<std::exception_ptr> errors(m);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        if (!dom.contains(s)) {
            status[i] = 1;
            continue;
        }
        try {
            Jet2 j = field.jet(s);
            if (negated) j = negate(j);
            res[i] = supersolution_residual(j, params);
        } catch (const Error& e) {
            status[i] = e.code() == ErrorCode::SingularPoint ? 2 : 3;
            errors[i] = std::current_exception();
        } catch (...) {
            status[i] = 3;
            errors[i] = std::current_exception();
        }
    }

    CheckReport rep;
    rep.n_samples = m;
    for (std::size_t i = 0; i < m; ++i) {
        if (status[i] == 1) throw Error(ErrorCode::SampleOutsideDomain, "check sample lies outside the domain");
        if (status[i] == 2) throw Error(ErrorCode::SingularSample, "field is singular at a check sample");
        if (status[i] == 3) std::rethrow_exception(errors[i]);
        const auto& r = res[i];
        switch (r.branch) {
        case CheckBranch::GradNonzero: ++rep.branch_counts.grad_nonzero; break;
        case CheckBranch::GradZeroPsd: ++rep.branch_counts.grad_zero_psd; break;
        case CheckBranch::GradZeroVacuous: ++rep.branch_counts.grad_zero_vacuous; continue;
        }
        if (r.residual < -params.slack) ++rep.n_failed;
        if (r.residual < rep.worst_residual ||
            (r.residual == rep.worst_residual && lex_less(samples[i], rep.worst_point))) {
            rep.worst_residual = r.residual;
            rep.worst_point = samples[i];
        }
    }
    rep.pass = rep.n_failed == 0;
    return rep;
}

} // namespace detail

/// Samples the classical criterion for a smooth supersolution: where the
/// gradient is nonzero, u_t - Delta_p^N u >= -slack; where it vanishes and the
/// Hessian is PSD, u_t >= -slack; otherwise nothing is required.
inline CheckReport classical_supersolution_check(const ScalarField& field, const Domain& dom,
                                                 const OperatorParams& params,
                                                 const std::vector<SpacetimePoint>& samples) {
    return detail::run_check(field, dom, params, samples, false);
}

/// Subsolution check, i.e. the supersolution check of -field.
inline CheckReport classical_subsolution_check(const ScalarField& field, const Domain& dom,
                                               const OperatorParams& params,
                                               const std::vector<SpacetimePoint>& samples) {
    return detail::run_check(field, dom, params, samples, true);
}

} // namespace pparabolic
