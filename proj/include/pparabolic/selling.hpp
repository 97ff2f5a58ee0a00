#pragma once

#include <array>
#include <cmath>

#include "pparabolic/error.hpp"

namespace pparabolic {

/// One term rho * e e^T of a lattice decomposition, e an integer offset.
struct SellingTerm {
    std::array<int, 2> e{};
    double rho = 0.0;
};

/// Writes a symmetric positive definite 2x2 matrix D = [[d00, d01], [d01, d11]]
/// as sum_k rho_k e_k e_k^T with rho_k >= 0 and integer offsets e_k, using
/// Selling's reduction of an obtuse superbase. Second differences along the
/// e_k then give a monotone discretization of tr(D D^2 u) that is exact on
/// quadratics.
inline std::array<SellingTerm, 3> selling_decomposition(double d00, double d01, double d11) {
    require(d00 > 0.0 && d11 > 0.0 && d00 * d11 - d01 * d01 > 0.0, ErrorCode::InvalidParameter,
            "selling_decomposition: matrix must be positive definite");
    // Diagonally dominant case: the canonical superbase is already obtuse.
    const double a = std::abs(d01);
    if (a <= d00 && a <= d11) {
        const int sg = d01 >= 0.0 ? 1 : -1;
        return {SellingTerm{{1, 0}, d00 - a}, SellingTerm{{0, 1}, d11 - a}, SellingTerm{{1, sg}, a}};
    }
    using V = std::array<long, 2>;
    std::array<V, 3> b{V{1, 0}, V{0, 1}, V{-1, -1}};
    auto dot = [&](const V& u, const V& v) {
        return d00 * static_cast<double>(u[0] * v[0]) + d01 * static_cast<double>(u[0] * v[1] + u[1] * v[0]) +
               d11 * static_cast<double>(u[1] * v[1]);
    };
    for (int iter = 0; iter < 200; ++iter) {
        bool changed = false;
        for (int i = 0; i < 3 && !changed; ++i) {
            for (int j = i + 1; j < 3 && !changed; ++j) {
                if (dot(b[i], b[j]) > 0.0) {
                    const int k = 3 - i - j;
                    const V bi = b[i], bj = b[j];
                    b[i] = V{-bi[0], -bi[1]};
                    b[j] = bj;
                    b[k] = V{bi[0] - bj[0], bi[1] - bj[1]};
                    changed = true;
                }
            }
        }
        if (!changed) {
            std::array<SellingTerm, 3> out;
            for (int k = 0; k < 3; ++k) {
                const int i = (k + 1) % 3, j = (k + 2) % 3;
                out[k].rho = -dot(b[i], b[j]);
                out[k].e = {static_cast<int>(-b[k][1]), static_cast<int>(b[k][0])};
            }
            return out;
        }
    }
    throw Error(ErrorCode::InvalidParameter, "selling_decomposition: reduction did not terminate");
}

} // namespace pparabolic
