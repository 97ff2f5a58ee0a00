#pragma once

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pparabolic/pparabolic.hpp"

namespace pparabolic::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kComputation = 1, kValidation = 2, kChecksFailed = 3 };

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 failed");
    }
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

/// Hash of the canonical (sorted-key, compact) dump of the config.
inline std::string config_hash(const json& config) { return sha256_hex(config.dump()); }

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::InvalidParameter, "cannot write " + path.string());
    os << text;
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::InvalidDescriptor, "cannot read " + path);
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidDescriptor, std::string("malformed JSON: ") + e.what());
    }
}

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidParameter, "not a number: " + item);
        }
    }
    return out;
}

inline SamplerSpec sampler_of(const json& c) {
    SamplerSpec s;
    s.interior = c.at("interior").get<std::size_t>();
    s.axis = c.at("axis").get<std::size_t>();
    s.bands_total = c.at("bands_total").get<std::size_t>();
    s.seed = c.at("seed").get<std::uint64_t>();
    return s;
}

inline OperatorParams params_of(const json& c) {
    OperatorParams p;
    p.p = c.at("p").get<double>();
    p.slack = c.value("slack", 0.0);
    p.grad_tol = c.value("grad_tol", 1e-10);
    p.validate();
    return p;
}

// ---------------------------------------------------------------------------
// Command execution from a resolved config. Returns the exit code and the
// list of artifact file names written into `out`.

struct Outcome {
    int code = kOk;
    std::vector<std::string> artifacts;
};

inline Outcome run_verify_barrier(const json& c, const fs::path& out, const std::string& hash) {
    const std::string family = c.at("family").get<std::string>();
    const int n = c.at("n").get<int>();
    const OperatorParams params = params_of(c);
    require(n == 1 || n == 2, ErrorCode::InvalidParameter, "n must be 1 or 2");
    const SpacetimePoint origin(std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.0);
    VerifyOptions vo;
    vo.sampler = sampler_of(c);

    json report;
    bool pass = false;
    if (family == "exterior_ball") {
        const std::string contact = c.at("contact").get<std::string>();
        ExteriorBallBarrier bar;
        if (contact == "tangent") {
            SpacetimePoint xi1 = origin;
            const double R1 = c.at("R1").is_null() ? 1.0 : c.at("R1").get<double>();
            xi1.x[0] = R1;
            bar = make_exterior_ball_barrier(origin, xi1, R1, n, params.p);
        } else if (contact == "north_pole") {
            const double R1 = c.at("R1").is_null() ? 2.0 * (n + params.p - 2.0) : c.at("R1").get<double>();
            SpacetimePoint xi1 = origin;
            xi1.t = -R1;
            bar = make_exterior_ball_barrier(origin, xi1, R1, n, params.p);
        } else {
            throw Error(ErrorCode::InvalidParameter, "contact must be tangent or north_pole");
        }
        const BarrierReport r = verify_barrier(bar.field(), bar.domain(), origin, params, vo);
        report = to_json(r);
        report["barrier"] = {{"xi1", to_json(bar.xi1)}, {"R1", bar.R1},       {"j", bar.j},
                             {"delta", bar.delta},      {"north_pole", bar.north_pole}};
        pass = r.pass;
    } else if (family == "petrovskii") {
        const PetrovskiiBarrier bar = make_petrovskii_barrier(n, params.p);
        const double A = c.at("A").is_null() ? bar.k : c.at("A").get<double>();
        const BarrierReport r = verify_barrier(bar.field(), domains::petrovskii(A, n), origin, params, vo);
        report = to_json(r);
        report["barrier"] = {{"A", A}, {"k", bar.k}, {"a", bar.a}};
        pass = r.pass;
    } else if (family == "irregularity") {
        require(!c.at("A").is_null(), ErrorCode::InvalidParameter, "irregularity needs --A");
        const double A = c.at("A").get<double>();
        const IrregularityBarrier bar = make_irregularity_barrier(n, params.p, A);
        const IrregularityReport r = verify_irregularity_barrier(bar, domains::petrovskii(A, n), params, vo.sampler);
        report = to_json(r);
        report["barrier"] = {{"A", A}, {"k", bar.k}, {"a", bar.a}, {"b", bar.b}, {"c", bar.c}};
        pass = r.pass;
    } else if (family == "tusk_house") {
        TuskHouseBarrierSpec spec;
        spec.xhat = c.at("xhat").get<std::vector<double>>();
        spec.R = c.at("R").get<double>();
        spec.R0 = c.at("R0").get<double>();
        require(spec.dim() == n, ErrorCode::InvalidParameter, "xhat length differs from n");
        const AlphaBeta ab = estimate_alpha_and_beta(spec, params, c.at("h").get<double>());
        report = to_json(ab);
        pass = ab.alpha1 < 1.0;
        report["pass"] = pass;
    } else {
        throw Error(ErrorCode::InvalidParameter, "unknown family " + family);
    }
    report["family"] = family;
    report["config_hash"] = hash;
    write_json(out / "barrier_report.json", report);
    return {pass ? kOk : kChecksFailed, {"barrier_report.json"}};
}

/// Named boundary data for `solve`, with the exact solution when known.
struct NamedData {
    BoundaryData F;
    std::function<double(const SpacetimePoint&)> exact;  // empty if unknown
};

inline NamedData named_data(const std::string& name, int n, double p) {
    if (name == "manufactured") {
        auto f = [n, p](const SpacetimePoint& q) {
            double r2 = 0.0;
            for (int i = 0; i < q.n; ++i) r2 += q.x[i] * q.x[i];
            return r2 + 2.0 * (n + p - 2.0) * q.t;
        };
        return {f, f};
    }
    if (name == "heat_mode") {
        auto f = [n](const SpacetimePoint& q) {
            double v = std::exp(-n * std::numbers::pi * std::numbers::pi * (q.t + 1.0));
            for (int i = 0; i < q.n; ++i) v *= std::sin(std::numbers::pi * q.x[i]);
            return v;
        };
        return {f, p == 2.0 ? std::function<double(const SpacetimePoint&)>(f) : nullptr};
    }
    if (name.rfind("constant:", 0) == 0) {
        const double v = parse_list(name.substr(9)).at(0);
        auto f = [v](const SpacetimePoint&) { return v; };
        return {f, f};
    }
    if (name.rfind("expr:", 0) == 0) {
        const ScalarField field = parse_expression(name.substr(5));
        return {[field](const SpacetimePoint& q) { return field.value(q); }, nullptr};
    }
    throw Error(ErrorCode::InvalidParameter, "unknown data " + name);
}

inline Outcome run_solve(const json& c, const fs::path& out, const std::string& hash) {
    const Domain dom = domain_from_json(c.at("domain"));
    const OperatorParams params = params_of(c);
    const NamedData data = named_data(c.at("data").get<std::string>(), dom.dim(), params.p);
    GridSpec gs;
    gs.h = c.at("h").get<double>();
    require(gs.h > 0.0, ErrorCode::InvalidParameter, "h must be positive");
    gs.store_stride = 0;
    Solver solver(dom, data.F, params, gs);
    const Grid& g = solver.grid();
    const int slices = c.at("slices").get<int>();
    require(slices >= 1, ErrorCode::InvalidParameter, "slices must be at least 1");

    std::vector<int> wanted;
    const int last = solver.last_step();
    for (int i = 0; i < slices; ++i)
        wanted.push_back(slices == 1 ? last : static_cast<int>(std::lround(double(i) * last / (slices - 1))));

    std::string csv = "# config_hash: " + hash + "\n";
    csv += g.n == 1 ? "x,t,u\n" : "x,y,t,u\n";
    double max_err = 0.0, u_min = INFINITY, u_max = -INFINITY;
    std::size_t known = 0;
    std::size_t next = 0;
    const GridFunction gf = solver.solve([&](const Slice& s) {
        const bool emit = next < wanted.size() && wanted[next] == s.m;
        while (next < wanted.size() && wanted[next] == s.m) ++next;
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            if (!s.known(i)) continue;
            const SpacetimePoint q = g.point(i, s.t);
            ++known;
            u_min = std::min(u_min, s.u[i]);
            u_max = std::max(u_max, s.u[i]);
            if (data.exact) max_err = std::max(max_err, std::abs(s.u[i] - data.exact(q)));
            if (emit) {
                for (int d = 0; d < g.n; ++d) csv += fmt(q.x[d]) + ",";
                csv += fmt(s.t) + "," + fmt(s.u[i]) + "\n";
            }
        }
    });
    write_text(out / "slices.csv", csv);
    json summary = {{"h", g.h},
                    {"dt", g.dt},
                    {"n_steps", solver.last_step()},
                    {"grad_tol", solver.grad_tol()},
                    {"known_node_values", known},
                    {"u_min", u_min},
                    {"u_max", u_max},
                    {"data_min", gf.data_min()},
                    {"data_max", gf.data_max()},
                    {"max_error", data.exact ? json(max_err) : json(nullptr)},
                    {"config_hash", hash}};
    write_json(out / "solve_summary.json", summary);
    return {kOk, {"slices.csv", "solve_summary.json"}};
}

inline ClassifyOptions classify_options_of(const json& c) {
    ClassifyOptions o;
    o.ladder = c.at("ladder").get<std::vector<double>>();
    o.theta_reg = c.at("theta_reg").get<double>();
    o.theta_irr = c.at("theta_irr").get<double>();
    o.stall_tol = c.at("stall_tol").get<double>();
    return o;
}

inline Outcome run_classify(const json& c, const fs::path& out, const std::string& hash) {
    const Domain dom = domain_from_json(c.at("domain"));
    const auto coords = c.at("point").get<std::vector<double>>();
    require(static_cast<int>(coords.size()) == dom.dim() + 1, ErrorCode::InvalidParameter,
            "point needs n space coordinates and a time");
    const SpacetimePoint xi0(std::vector<double>(coords.begin(), coords.end() - 1), coords.back());
    const RegularityReport r = classify(dom, xi0, params_of(c), classify_options_of(c));
    json j = to_json(r);
    j["config_hash"] = hash;
    write_json(out / "regularity_report.json", j);
    return {kOk, {"regularity_report.json"}};
}

inline Outcome run_sweep(const json& c, const fs::path& out, const std::string& hash) {
    const double p = c.at("p").get<double>();
    const auto rows =
        petrovskii_sweep(p, c.at("n").get<int>(), c.at("A").get<std::vector<double>>(), classify_options_of(c));
    std::string csv = "# config_hash: " + hash + "\nA,verdict,final_gap,threshold\n";
    for (const auto& r : rows)
        csv += fmt(r.A) + "," + verdict_name(r.verdict) + "," + (r.final_gap ? fmt(*r.final_gap) : "") + "," +
               fmt(r.threshold) + "\n";
    write_text(out / "sweep.csv", csv);
    return {kOk, {"sweep.csv"}};
}

/// Executes a resolved config and writes its artifacts and manifest.
inline int execute(const json& config, const fs::path& out) {
    fs::create_directories(out);
    const std::string hash = config_hash(config);
    const std::string cmd = config.at("command").get<std::string>();
    Outcome o;
    if (cmd == "verify-barrier") o = run_verify_barrier(config, out, hash);
    else if (cmd == "solve") o = run_solve(config, out, hash);
    else if (cmd == "classify") o = run_classify(config, out, hash);
    else if (cmd == "petrovskii-sweep") o = run_sweep(config, out, hash);
    else throw Error(ErrorCode::InvalidParameter, "unknown command " + cmd);
    const json manifest = {{"tool", "pparabolic"},
                           {"version", kVersion},
                           {"config", config},
                           {"config_hash", hash},
                           {"artifacts", o.artifacts},
                           {"exit_code", o.code}};
    write_json(out / "run_manifest.json", manifest);
    return o.code;
}

inline void report_error(std::ostream& err, const std::string& name, const std::string& what) {
    err << json{{"error", name}, {"message", what}}.dump() << "\n";
}

// ---------------------------------------------------------------------------
// Argument parsing

inline int main(int argc, char** argv, std::ostream& err = std::cerr) {
    CLI::App app{"Normalized p-parabolic equation: barriers, solver, boundary regularity"};
    app.set_help_flag("--help", "print this help and exit");  // -h is taken by the grid step
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    std::string out = "./out";
    app.add_option("--seed", seed, "random seed")->capture_default_str();
    app.add_option("--out", out, "output directory")->capture_default_str();

    double p = 2.0;
    int n = 1;
    double slack = 0.0;
    double grad_tol = 1e-10;

    // verify-barrier
    auto* vb = app.add_subcommand("verify-barrier", "verify an explicit barrier family");
    std::string family;
    std::optional<double> A_opt, R1_opt;
    std::string contact = "tangent";
    std::size_t interior = 10000, axis = 1000, bands_total = 1000;
    std::string xhat = "1";
    double R = 0.5, R0 = 2.0, h_tusk = 1.0 / 64.0;
    vb->add_option("--family", family, "exterior_ball|petrovskii|irregularity|tusk_house")
        ->required()
        ->check(CLI::IsMember({"exterior_ball", "petrovskii", "irregularity", "tusk_house"}));
    vb->add_option("--p", p)->capture_default_str();
    vb->add_option("--n", n)->capture_default_str();
    vb->add_option("--A", A_opt, "Petrovskii constant");
    vb->add_option("--contact", contact, "exterior ball contact: tangent|north_pole")->capture_default_str();
    vb->add_option("--R1", R1_opt, "exterior ball radius");
    vb->add_option("--interior", interior)->capture_default_str();
    vb->add_option("--axis", axis)->capture_default_str();
    vb->add_option("--bands", bands_total, "samples over all dyadic time bands")->capture_default_str();
    vb->add_option("--slack", slack)->capture_default_str();
    vb->add_option("--grad-tol", grad_tol)->capture_default_str();
    vb->add_option("--xhat", xhat, "tusk direction, comma separated")->capture_default_str();
    vb->add_option("--R", R, "tusk radius")->capture_default_str();
    vb->add_option("--R0", R0, "tusk house radius")->capture_default_str();
    vb->add_option("--h", h_tusk, "grid step for tusk_house")->capture_default_str();

    // solve
    auto* sv = app.add_subcommand("solve", "solve the Dirichlet problem on a domain");
    std::string domain_path, data = "manufactured";
    double h = 1.0 / 32.0;
    int slices = 5;
    sv->add_option("--domain", domain_path, "domain JSON file")->required();
    sv->add_option("--data", data, "manufactured|heat_mode|constant:c|expr:<expression>")->capture_default_str();
    sv->add_option("--p", p)->capture_default_str();
    sv->add_option("--h", h)->capture_default_str();
    sv->add_option("--slices", slices, "number of evenly spaced slices written")->capture_default_str();

    // classify
    auto* cl = app.add_subcommand("classify", "numerical regularity verdict at a boundary point");
    std::string point, ladder;
    ClassifyOptions copt;
    cl->add_option("--domain", domain_path, "domain JSON file")->required();
    cl->add_option("--point", point, "x[,y],t")->required();
    cl->add_option("--p", p)->capture_default_str();
    cl->add_option("--ladder", ladder, "grid steps, comma separated (default by dimension)");
    cl->add_option("--theta-reg", copt.theta_reg)->capture_default_str();
    cl->add_option("--theta-irr", copt.theta_irr)->capture_default_str();
    cl->add_option("--stall-tol", copt.stall_tol)->capture_default_str();

    // petrovskii-sweep
    auto* sw = app.add_subcommand("petrovskii-sweep", "classify the last point of Petrovskii domains");
    std::string A_list;
    sw->add_option("--p", p)->capture_default_str();
    sw->add_option("--n", n)->capture_default_str();
    sw->add_option("--A", A_list, "comma separated")->required();
    sw->add_option("--ladder", ladder, "grid steps, comma separated (default by dimension)");
    sw->add_option("--theta-reg", copt.theta_reg)->capture_default_str();
    sw->add_option("--theta-irr", copt.theta_irr)->capture_default_str();
    sw->add_option("--stall-tol", copt.stall_tol)->capture_default_str();

    // replay
    auto* rp = app.add_subcommand("replay", "re-run the config recorded in a manifest");
    std::string manifest;
    rp->add_option("--manifest", manifest)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        json c;
        if (vb->parsed()) {
            c = {{"command", "verify-barrier"},
                 {"family", family},
                 {"p", p},
                 {"n", n},
                 {"A", A_opt ? json(*A_opt) : json(nullptr)},
                 {"contact", contact},
                 {"R1", R1_opt ? json(*R1_opt) : json(nullptr)},
                 {"interior", interior},
                 {"axis", axis},
                 {"bands_total", bands_total},
                 {"slack", slack},
                 {"grad_tol", grad_tol},
                 {"xhat", parse_list(xhat)},
                 {"R", R},
                 {"R0", R0},
                 {"h", h_tusk},
                 {"seed", seed}};
        } else if (sv->parsed()) {
            c = {{"command", "solve"}, {"domain", read_json_file(domain_path)},
                 {"data", data},       {"p", p},
                 {"h", h},             {"slices", slices},
                 {"seed", seed}};
        } else if (cl->parsed()) {
            const json dom = read_json_file(domain_path);
            c = {{"command", "classify"},
                 {"domain", dom},
                 {"point", parse_list(point)},
                 {"p", p},
                 {"ladder", ladder.empty() ? default_ladder(domain_from_json(dom).dim()) : parse_list(ladder)},
                 {"theta_reg", copt.theta_reg},
                 {"theta_irr", copt.theta_irr},
                 {"stall_tol", copt.stall_tol},
                 {"seed", seed}};
        } else if (sw->parsed()) {
            c = {{"command", "petrovskii-sweep"},
                 {"p", p},
                 {"n", n},
                 {"A", parse_list(A_list)},
                 {"ladder", ladder.empty() ? default_ladder(n) : parse_list(ladder)},
                 {"theta_reg", copt.theta_reg},
                 {"theta_irr", copt.theta_irr},
                 {"stall_tol", copt.stall_tol},
                 {"seed", seed}};
        } else {
            const json m = read_json_file(manifest);
            require(m.contains("config"), ErrorCode::InvalidDescriptor, "manifest has no config");
            c = m.at("config");
        }
        return execute(c, out);
    } catch (const Error& e) {
        report_error(err, std::string(e.name()), e.what());
        return is_validation_error(e.code()) ? kValidation : kComputation;
    } catch (const json::exception& e) {
        report_error(err, "InvalidDescriptor", e.what());
        return kValidation;
    } catch (const std::exception& e) {
        report_error(err, "InternalError", e.what());
        return kComputation;
    }
}

} // namespace pparabolic::cli
