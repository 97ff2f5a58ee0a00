// Acceptance run: one PASS/FAIL line per criterion, indented diagnostics.
// Usage: acceptance <path to pparabolic CLI>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pparabolic/pparabolic.hpp"

using namespace pparabolic;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void note(const char* fmt, auto... args) {
    std::printf("  ");
    if constexpr (sizeof...(args) == 0) std::fputs(fmt, stdout);
    else std::printf(fmt, args...);
    std::printf("\n");
    std::fflush(stdout);
}

void verdict(int id, bool pass, const std::string& what) {
    std::printf("%s %d %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    failures += !pass;
}

double max_active_error(const Domain& d, const BoundaryData& F, const BoundaryData& exact, double p, double h) {
    double e = 0.0;
    Solver s(d, F, {p}, {.h = h, .store_stride = 0});
    s.solve([&](const Slice& sl) {
        for (std::size_t i = 0; i < sl.u.size(); ++i)
            if (sl.state[i] == NodeState::Active) e = std::max(e, std::abs(sl.u[i] - exact(s.grid().point(i, sl.t))));
    });
    return e;
}

BoundaryData manufactured(int n, double p) {
    const double c = 2.0 * (n + p - 2.0);
    return [c](const SpacetimePoint& q) {
        double r2 = 0.0;
        for (int i = 0; i < q.n; ++i) r2 += q.x[i] * q.x[i];
        return r2 + c * q.t;
    };
}

// ---------------------------------------------------------------------------

void criterion1() {
    bool ok = true;
    const Domain c1 = domains::cylinder({-1.0}, {1.0}, -1.0, 0.0);
    for (double p : {1.5, 2.0, 3.0}) {
        const double e = max_active_error(c1, manufactured(1, p), manufactured(1, p), p, 1.0 / 64);
        note("n=1 p=%g h=1/64 max error %.3e", p, e);
        ok = ok && e <= 1e-8;
    }
    // n = 2 on the unit disc cylinder: the lateral boundary is off the lattice
    const Domain c2 = domains::ball_cylinder({0.0, 0.0}, 1.0, -1.0, 0.0);
    for (double p : {1.5, 2.0, 3.0}) {
        const auto F = manufactured(2, p);
        const double e32 = max_active_error(c2, F, F, p, 1.0 / 32);
        const double e64 = max_active_error(c2, F, F, p, 1.0 / 64);
        note("n=2 p=%g disc cylinder h=1/32 %.3e h=1/64 %.3e ratio %.3f", p, e32, e64, e32 / e64);
        ok = ok && e32 <= 1e-2 && e32 / e64 >= 1.8;
    }
    verdict(1, ok, "manufactured quadratic solution");
}

void criterion2() {
    const double pi = std::numbers::pi;
    const Domain c1 = domains::cylinder({-1.0}, {1.0}, -1.0, 0.0);
    const BoundaryData F = [pi](const SpacetimePoint& q) {
        return std::exp(-pi * pi * (q.t + 1.0)) * std::sin(pi * q.x[0]);
    };
    const double e64 = max_active_error(c1, F, F, 2.0, 1.0 / 64);
    const double e128 = max_active_error(c1, F, F, 2.0, 1.0 / 128);
    const double ratio = e64 / e128;
    note("h=1/64 %.3e h=1/128 %.3e ratio %.3f (observed order %.2f)", e64, e128, ratio, std::log2(ratio));
    verdict(2, e64 <= 5e-3 && ratio >= 1.5 && ratio <= 2.5, "heat reduction: error <= 5e-3 and halves within 25%");
}

void criterion3() {
    bool ok = true;
    const SamplerSpec full{};  // 10^4 interior + 10^3 axis + 10^3 band samples
    for (int n : {1, 2}) {
        const SpacetimePoint origin(std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.0);
        for (double p : {1.5, 2.0, 3.0}) {
            const auto bar = make_petrovskii_barrier(n, p);
            VerifyOptions vo;
            vo.sampler = full;
            const auto r = verify_barrier(bar.field(), domains::petrovskii(bar.k, n), origin, {p}, vo);
            const bool pass = r.pass && r.supersolution.worst_residual >= -1e-8;
            note("(a) petrovskii n=%d p=%g k=%g samples %zu worst residual %.3e %s", n, p, bar.k,
                 r.supersolution.n_samples, r.supersolution.worst_residual, pass ? "ok" : "fail");
            ok = ok && pass;
        }
    }
    struct Triple {
        double p;
        int n;
        double A;
    };
    for (const Triple tr : {Triple{2.0, 1, 8.0}, Triple{3.0, 1, 16.0}, Triple{2.0, 2, 8.0}}) {
        try {
            const auto bar = make_irregularity_barrier(tr.n, tr.p, tr.A);
            const auto r = verify_irregularity_barrier(bar, domains::petrovskii(tr.A, tr.n), {tr.p}, full);
            const bool pass = r.pass && r.tau >= 1e-4 && r.boundary_identity_error <= 1e-10;
            note("(b) irregularity p=%g n=%d A=%g tau %.3e identity error %.2e %s", tr.p, tr.n, tr.A, r.tau,
                 r.boundary_identity_error, pass ? "ok" : "fail");
            ok = ok && pass;
        } catch (const Error& e) {
            note("(b) irregularity p=%g n=%d A=%g %s", tr.p, tr.n, tr.A, e.what());
            ok = false;
        }
    }
    for (int n : {1, 2}) {
        const SpacetimePoint origin(std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.0);
        for (double p : {1.5, 2.0, 3.0}) {
            const double R1 = 2.0 * (n + p - 2.0);
            for (bool north : {false, true}) {
                SpacetimePoint xi1 = origin;
                if (north) xi1.t = -R1;
                else xi1.x[0] = R1;
                const auto bar = make_exterior_ball_barrier(origin, xi1, R1, n, p);
                VerifyOptions vo;
                vo.sampler = full;
                const auto r = verify_barrier(bar.field(), bar.domain(), origin, {p}, vo);
                note("(c) exterior ball %s n=%d p=%g R1=%g worst residual %.3e %s", north ? "north pole" : "tangent",
                     n, p, R1, r.supersolution.worst_residual, r.pass ? "ok" : "fail");
                ok = ok && r.pass;
            }
        }
    }
    verdict(3, ok, "barrier sign suites");
}

RegularityReport tusk_report;

void criterion4() {
    bool ok = true;
    const SpacetimePoint origin(0.0, 0.0);
    auto show = [](const char* name, const RegularityReport& r) {
        std::string per_grid;
        for (const auto& g : r.runs) {
            char buf[96];
            std::snprintf(buf, sizeof buf, " h=1/%.0f gap=%.4f%s%s", 1.0 / g.h, g.final_gap.value_or(NAN),
                          g.regular_like ? " R" : "", g.irregular_like ? " I" : "");
            per_grid += buf;
        }
        note("%s -> %s;%s", name, verdict_name(r.verdict), per_grid.c_str());
    };
    tusk_report = classify(TuskHouseBarrierSpec{}.domain(), origin, {2.0});
    show("tusk house", tusk_report);
    ok = ok && tusk_report.verdict == Verdict::Regular;

    const auto top = classify(domains::cylinder({-1.0}, {1.0}, -1.0, 0.0), origin, {2.0});
    show("cylinder top point", top);
    ok = ok && top.verdict == Verdict::Irregular;

    for (double A : {2.0, 4.0, 16.0, 64.0}) {
        const auto r = classify(domains::petrovskii(A, 1), origin, {2.0});
        char name[32];
        std::snprintf(name, sizeof name, "petrovskii A=%g", A);
        show(name, r);
        if (A <= 4.0) ok = ok && r.verdict == Verdict::Regular;
        else if (A >= 64.0) ok = ok && r.verdict == Verdict::Irregular;
        else ok = ok && r.verdict != Verdict::Regular;
    }
    verdict(4, ok, "classifier catalogue");
}

void criterion5() {
    const auto ab = estimate_alpha_and_beta(TuskHouseBarrierSpec{}, {2.0}, 1.0 / 64);
    const double bound = std::min(0.5, holder_exponent_from_alpha(ab.alpha) / 2.0);
    bool ok = tusk_report.verdict == Verdict::Regular && tusk_report.holder.has_value();
    if (ok) {
        const HolderFit& f = *tusk_report.holder;
        note("alpha1 %.6f alpha %.6f bound min{1/2, -log(alpha)/(2 log 2)} = %.4f", ab.alpha1, ab.alpha, bound);
        note("fitted beta %.4f residual %.4f |beta - bound| %.4f, beta - bound %.4f", f.beta, f.residual,
             std::abs(f.beta - bound), f.beta - bound);
        ok = f.beta > 0.0 && f.residual < 0.2 && std::abs(f.beta - bound) <= 0.15;
    } else {
        note("tusk house not classified regular, no fit");
    }
    verdict(5, ok, "Hoelder estimate on the tusk house");
}

// ---------------------------------------------------------------------------

Jet2 random_jet(Rng& rng, int n) {
    Jet2 j(n);
    j.dt = rng.uniform(-3, 3);
    for (int i = 0; i < n; ++i) j.grad[i] = rng.uniform(-2, 2);
    for (int i = 0; i < n; ++i)
        for (int k = i; k < n; ++k) j.hess.at(i, k) = rng.uniform(-3, 3);
    return j;
}

bool comparison_suite() {
    Rng rng(61);
    const Domain d1 = domains::cylinder({-1.0}, {1.0}, -0.5, 0.0);
    const Domain d2 = domains::ball_cylinder({0.0, 0.0}, 1.0, -0.1, 0.0);
    const Domain d3 = domains::petrovskii(5.0, 1);
    const char* names[4] = {"1-D cylinder", "2-D disc p=2", "2-D disc p!=2", "1-D petrovskii"};
    int cases[4] = {}, bad[4] = {};
    for (int i = 0; i < 240; ++i) {
        const int kind = i % 4;
        const double p = kind == 1 ? 2.0 : rng.uniform(1.2, 5.0);
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), w = rng.uniform(0.5, 6.0);
        const double gap = rng.uniform(0.0, 0.5), cx = rng.uniform(-1, 1);
        const BoundaryData lower = [=](const SpacetimePoint& q) {
            return a * std::sin(w * q.x[0] + b * q.x[1]) + b * q.t;
        };
        const BoundaryData upper = [=](const SpacetimePoint& q) {
            return lower(q) + gap * std::max(0.0, 1.0 - std::abs(q.x[0] - cx));
        };
        const Domain& d = kind == 0 ? d1 : kind == 3 ? d3 : d2;
        const GridSpec spec{.h = kind == 1 || kind == 2 ? 1.0 / 8 : 1.0 / 16};
        ++cases[kind];
        bad[kind] += !discrete_comparison(solve(d, upper, {p}, spec), solve(d, lower, {p}, spec));
    }
    int total = 0;
    for (int k = 0; k < 4; ++k) {
        note("comparison %s: %d/%d cases violated", names[k], bad[k], cases[k]);
        total += bad[k];
    }
    return total == 0;
}

bool maximum_principle_suite() {
    Rng rng(62);
    const Domain d = domains::petrovskii(6.0, 1);
    const Domain d2 = domains::ball_cylinder({0.0, 0.0}, 1.0, -0.1, 0.0);
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
        const double p = rng.uniform(1.2, 5.0), w = rng.uniform(1, 20), ph = rng.uniform(0, 6);
        const BoundaryData F = [=](const SpacetimePoint& q) { return std::cos(w * q.x[0] + ph * q.x[1]) * (1.0 + q.t); };
        const auto g = solve(i % 2 ? d2 : d, F, {p}, {.h = i % 2 ? 1.0 / 8 : 1.0 / 16, .store_stride = 1});
        bool ok = true;
        for (const Slice& s : g.slices())
            for (std::size_t k = 0; k < s.u.size(); ++k)
                if (s.known(k) && (s.u[k] < g.data_min() || s.u[k] > g.data_max())) ok = false;
        bad += !ok;
    }
    note("maximum principle: %d/200 cases violated", bad);
    return bad == 0;
}

bool scaling_suite() {
    // v(y, s) = a u(l y, l^2 s) + b on the scaled domain and grid; l a power of two
    Rng rng(63);
    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const int kind = i % 3;
        const double l = std::ldexp(1.0, static_cast<int>(rng.uniform(-2, 3)));
        const double p = rng.uniform(1.2, 5.0), w = rng.uniform(1, 8), a = rng.uniform(0.1, 4.0), b = rng.uniform(-3, 3);
        const BoundaryData F = [=](const SpacetimePoint& q) { return std::sin(w * q.x[0]) * std::cos(q.x[1]) + q.t; };
        const BoundaryData G = [=](const SpacetimePoint& q) { return a * F(parabolic_scale(q, l)) + b; };
        Domain du = domains::cylinder({-1.0}, {1.0}, -0.25, 0.0), dv = du;
        double h = 1.0 / 16;
        if (kind == 0) {
            dv = domains::cylinder({-1.0 / l}, {1.0 / l}, -0.25 / (l * l), 0.0);
        } else if (kind == 1) {
            du = domains::cylinder({-1.0, -1.0}, {1.0, 1.0}, -0.1, 0.0);
            dv = domains::cylinder({-1.0 / l, -1.0 / l}, {1.0 / l, 1.0 / l}, -0.1 / (l * l), 0.0);
            h = 1.0 / 8;
        } else {
            du = domains::ball_cylinder({0.0, 0.0}, 1.0, -0.1, 0.0);
            dv = domains::ball_cylinder({0.0, 0.0}, 1.0 / l, -0.1 / (l * l), 0.0);
            h = 1.0 / 8;
        }
        GridSpec su{.h = h, .store_stride = 0};
        su.grad_tol = h * h * std::max(1.0, std::abs(p - 2.0));
        GridSpec sv{.h = h / l, .store_stride = 0};
        sv.grad_tol = a * l * *su.grad_tol;
        const auto u = solve(du, F, {p}, su);
        const auto v = solve(dv, G, {p}, sv);
        const Slice& x = u.last();
        const Slice& y = v.last();
        bool ok = x.u.size() == y.u.size() && x.state == y.state;
        for (std::size_t k = 0; ok && k < x.u.size(); ++k) {
            if (!x.known(k)) continue;
            const double d = std::abs(y.u[k] - (a * x.u[k] + b));
            worst = std::max(worst, d);
            if (d > 1e-10 * (1.0 + std::abs(b) + a)) ok = false;
        }
        bad += !ok;
    }
    note("parabolic and affine scaling: %d/200 cases violated, worst deviation %.2e", bad, worst);
    return bad == 0;
}

bool operator_suite() {
    Rng rng(64);
    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
        const Jet2 j = random_jet(rng, 2);
        if (j.grad_norm() < 1e-6) continue;
        const double p = i < 200 ? 2.0 : rng.uniform(1.05, 6.0);
        double d;
        if (i < 200) {
            d = std::abs(normalized_p_laplacian(j, {2.0}) - j.hess.trace());
        } else {
            const double th = rng.uniform(0, 2 * std::numbers::pi), c = std::cos(th), s = std::sin(th);
            Jet2 r = j;
            r.grad[0] = c * j.grad[0] - s * j.grad[1];
            r.grad[1] = s * j.grad[0] + c * j.grad[1];
            const double A = j.hess(0, 0), B = j.hess(0, 1), D = j.hess(1, 1);
            r.hess.at(0, 0) = c * c * A - 2 * c * s * B + s * s * D;
            r.hess.at(0, 1) = c * s * (A - D) + (c * c - s * s) * B;
            r.hess.at(1, 1) = s * s * A + 2 * c * s * B + c * c * D;
            d = std::abs(normalized_p_laplacian(j, {p}) - normalized_p_laplacian(r, {p}));
        }
        worst = std::max(worst, d);
        bad += d > 1e-12;
    }
    note("p=2 reduction and rotation invariance: %d/400 cases over 1e-12, worst %.2e", bad, worst);
    return bad == 0;
}

bool envelope_suite() {
    Rng rng(65);
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(-5, 5), b = rng.uniform(-5, 5), d = rng.uniform(-5, 5);
        const double p = i % 2 ? rng.uniform(1.01, 2.0) : rng.uniform(2.0, 6.0);
        const double tr = a + d, det = a * d - b * b;
        const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
        const double want = p >= 2.0 ? tr / 2 - disc : tr / 2 + disc;
        const double got = envelope_eigenvalue(SymMatrix(2, {a, b, d}), p);
        bad += std::abs(got - want) > 1e-12 * std::max(1.0, std::abs(want));
    }
    note("envelope eigenvalue: %d/200 cases off the closed form", bad);
    return bad == 0;
}

bool positivity_suite() {
    // nonnegative data positive only on a patch of the bottom; positive at the
    // last interior time level
    Rng rng(66);
    const Domain d = domains::cylinder({-1.0}, {1.0}, -1.0, 0.0);
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
        const double p = rng.uniform(1.2, 5.0), cx = rng.uniform(-0.8, 0.8), width = rng.uniform(0.1, 0.4);
        const BoundaryData F = [=](const SpacetimePoint& q) {
            return q.t <= -1.0 + 1e-12 ? std::max(0.0, 1.0 - std::abs(q.x[0] - cx) / width) : 0.0;
        };
        const auto g = solve(d, F, {p}, {.h = 1.0 / 16, .store_stride = 1});
        const Slice& s = g.slices()[g.slices().size() - 2];
        bool ok = false;
        for (std::size_t k = 0; k < s.u.size(); ++k) {
            if (s.state[k] != NodeState::Active) continue;
            ok = true;
            if (!(s.u[k] > 0.0)) {
                ok = false;
                break;
            }
        }
        bad += !ok;
    }
    note("strong minimum positivity: %d/200 cases violated", bad);
    return bad == 0;
}

void criterion6() {
    bool ok = comparison_suite();
    ok = maximum_principle_suite() && ok;
    ok = scaling_suite() && ok;
    ok = operator_suite() && ok;
    ok = envelope_suite() && ok;
    ok = positivity_suite() && ok;
    verdict(6, ok, "structural property suites");
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void criterion7(const std::string& cli) {
    const fs::path root = fs::temp_directory_path() / "pparabolic_acceptance_replay";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path cyl = root / "cylinder.json", petr = root / "petrovskii.json";
    std::ofstream(cyl) << R"({"kind":"cylinder","lo":[-1.0],"hi":[1.0],"t1":-0.5,"t2":0.0})";
    std::ofstream(petr) << R"({"kind":"petrovskii","A":3.0,"n":1})";
    const std::vector<std::string> runs = {
        "--seed 5 verify-barrier --family petrovskii --p 3 --n 2",
        "verify-barrier --family irregularity --p 2 --n 1 --A 8",
        "solve --domain " + cyl.string() + " --data manufactured --p 1.5 --h 0.03125 --slices 4",
        "solve --domain " + petr.string() + " --data 'expr:sin(4*x)*exp(t)' --p 4 --h 0.015625",
        "classify --domain " + cyl.string() + " --point 1,-0.25 --p 3 --ladder 0.03125,0.015625",
        "petrovskii-sweep --p 2 --n 1 --A 2,64 --ladder 0.015625,0.0078125",
    };
    bool ok = true;
    int i = 0;
    for (const auto& args : runs) {
        const fs::path a = root / ("run" + std::to_string(i)), b = root / ("replay" + std::to_string(i));
        ++i;
        const int ra = std::system((cli + " --out " + a.string() + " " + args).c_str());
        const int rb = std::system((cli + " --out " + b.string() + " replay --manifest " +
                                    (a / "run_manifest.json").string()).c_str());
        bool same = ra == 0 && rb == 0 && fs::is_directory(a);
        std::size_t files = 0;
        if (same)
            for (const auto& e : fs::directory_iterator(a)) {
                ++files;
                same = same && fs::exists(b / e.path().filename()) && slurp(e.path()) == slurp(b / e.path().filename());
            }
        note("%s: %zu artifacts %s", args.substr(0, 40).c_str(), files,
             same ? "byte-identical" : "DIFFER or run failed");
        ok = ok && same && files >= 2;
    }
    fs::remove_all(root);
    verdict(7, ok, "manifest replay reproduces artifacts byte for byte");
}

template <class F>
void timed(const char* label, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    note("[%s took %.1f s]", label, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <pparabolic cli>\n");
        return 2;
    }
    timed("1", criterion1);
    timed("2", criterion2);
    timed("3", criterion3);
    timed("4", criterion4);
    timed("5", criterion5);
    timed("6", criterion6);
    timed("7", [&] { criterion7(argv[1]); });
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
