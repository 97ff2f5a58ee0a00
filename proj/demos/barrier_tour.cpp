// Walks through the explicit barrier families with small sample sets and
// prints what each check found.

#include <cstdio>

#include "pparabolic/pparabolic.hpp"

using namespace pparabolic;

namespace {

void show(const char* name, const BarrierReport& r) {
    std::printf("%-34s %s  samples %zu  worst residual %+.3e  min value %.3e\n", name, r.pass ? "pass" : "FAIL",
                r.supersolution.n_samples, r.supersolution.worst_residual, r.min_value);
}

} // namespace

int main() {
    VerifyOptions vo;
    vo.sampler = SamplerSpec{.interior = 3000, .axis = 300, .bands_total = 300};
    const SpacetimePoint o1(0.0, 0.0);
    const SpacetimePoint o2(0.0, 0.0, 0.0);

    {
        const auto bar = make_exterior_ball_barrier(o1, SpacetimePoint(1.0, 0.0), 1.0, 1, 2.0);
        show("exterior ball, tangent, p=2", verify_barrier(bar.field(), bar.domain(), o1, {2.0}, vo));
    }
    {
        const auto bar = make_exterior_ball_barrier(o2, SpacetimePoint(0.0, 0.0, -4.0), 4.0, 2, 3.0);
        show("exterior ball, north pole, p=3", verify_barrier(bar.field(), bar.domain(), o2, {3.0}, vo));
    }
    for (double p : {1.5, 3.0}) {
        const auto bar = make_petrovskii_barrier(1, p);
        char name[64];
        std::snprintf(name, sizeof name, "petrovskii k=%g, p=%g", bar.k, p);
        show(name, verify_barrier(bar.field(), domains::petrovskii(bar.k, 1), o1, {p}, vo));
    }
    // -t is not a supersolution: the check should say so
    {
        const auto bar = make_exterior_ball_barrier(o1, SpacetimePoint(1.0, 0.0), 1.0, 1, 2.0);
        show("-t on the same domain", verify_barrier(-ScalarField::time(), bar.domain(), o1, {2.0}, vo));
    }

    {
        const auto bar = make_irregularity_barrier(1, 2.0, 16.0);
        const auto r = verify_irregularity_barrier(bar, domains::petrovskii(16.0, 1), {2.0}, vo.sampler);
        std::printf("%-34s %s  tau %.3e  boundary identity error %.1e\n", "irregularity barrier, A=16, p=2",
                    r.pass ? "pass" : "FAIL", r.tau, r.boundary_identity_error);
    }

    const auto ab = estimate_alpha_and_beta(TuskHouseBarrierSpec{}, {2.0}, 1.0 / 32);
    std::printf("%-34s alpha1 %.4f  alpha %.4f  beta %.4f (h = 1/32)\n", "tusk house contraction", ab.alpha1, ab.alpha,
                ab.beta);
    return 0;
}
