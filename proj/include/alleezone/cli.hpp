#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "alleezone/alleezone.hpp"

namespace alleezone::cli {

using ordered_json = nlohmann::ordered_json;

// ── Formatting helpers ────────────────────────────────────────────────────────

// JSON numerics are emitted at 12 significant digits so identical flags give
// byte-identical files.
inline double round12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline ordered_json jnum(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round12(v);
}

// CSV floats use the shortest decimal that round-trips.
inline std::string csv_double(double v) {
    if (!std::isfinite(v)) return "";
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

// ── Shared parameter block ────────────────────────────────────────────────────

struct Params {
    double L = 10.0;
    double r = 0.2;
    double a = 0.1;
    std::string bc = "NN";
    std::string bc_raw; // "a1,a2,b1,b2" overrides the keyword
    double alpha = 0.0;
    double l = 4.0;
    double tol = 1e-12;

    BoundarySpec boundary() const {
        if (!bc_raw.empty()) {
            double c[4];
            char extra;
            if (std::sscanf(bc_raw.c_str(), "%lf,%lf,%lf,%lf%c", &c[0], &c[1], &c[2], &c[3],
                            &extra) != 4)
                throw ValidationError("--bc-raw expects a1,a2,b1,b2");
            return BoundarySpec(c[0], c[1], c[2], c[3]);
        }
        if (bc == "NN") return BoundarySpec::neumann_neumann();
        if (bc == "DD") return BoundarySpec::dirichlet_dirichlet();
        if (bc == "ND") return BoundarySpec::neumann_dirichlet();
        if (bc == "DN") return BoundarySpec::dirichlet_neumann();
        throw ValidationError("--bc expects one of NN, DD, ND, DN (or use --bc-raw)");
    }

    GrowthPair growth() const { return GrowthPair::cubic_logistic(r, a); }

    ordered_json to_json() const {
        const auto b = boundary();
        ordered_json j;
        j["L"] = jnum(L);
        j["r"] = jnum(r);
        j["a"] = jnum(a);
        j["bc"] = bc_raw.empty() ? bc : "raw";
        j["bc_coefficients"] = {jnum(b.a1), jnum(b.a2), jnum(b.b1), jnum(b.b2)};
        j["alpha"] = jnum(alpha);
        j["l"] = jnum(l);
        j["tol"] = jnum(tol);
        return j;
    }

    std::string csv_comment() const {
        const auto b = boundary();
        std::ostringstream os;
        os << "# allee_zone " << kVersion << " L=" << csv_double(L) << " r=" << csv_double(r)
           << " a=" << csv_double(a) << " bc=" << b.a1 << "," << b.a2 << "," << b.b1 << ","
           << b.b2 << " alpha=" << csv_double(alpha) << " l=" << csv_double(l) << "\n";
        return os.str();
    }
};

inline void add_common_options(CLI::App* cmd, Params& p, bool with_zone = true) {
    cmd->add_option("--L", p.L, "habitat length");
    cmd->add_option("--r", p.r, "intrinsic growth rate");
    cmd->add_option("--a", p.a, "Allee sparsity threshold");
    cmd->add_option("--bc", p.bc, "boundary pair keyword: NN, DD, ND, DN");
    cmd->add_option("--bc-raw", p.bc_raw, "raw Robin coefficients a1,a2,b1,b2");
    if (with_zone) {
        cmd->add_option("--alpha", p.alpha, "zone start");
        cmd->add_option("--l", p.l, "zone length");
    }
    cmd->add_option("--tol", p.tol, "eigenvalue tolerance");
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file: " + path);
    f << text;
}

inline std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) throw ValidationError("grid count must be >= 1");
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        v.push_back(lo);
        return v;
    }
    for (int i = 0; i < count; ++i)
        v.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return v;
}

// ── Subcommand bodies ─────────────────────────────────────────────────────────

inline int cmd_eigen(const Params& p, const std::string& out_path, std::ostream& out) {
    const auto bc = p.boundary();
    const auto growth = p.growth();
    const ZoneLayout layout(p.L, p.alpha, p.l);
    const auto res = principal_eigenvalue(layout, bc, growth, p.tol);
    const auto br = spectral_bracket(p.L, bc, growth);
    const auto residuals = verify_transcendental(res, layout, bc, growth);

    ordered_json j;
    j["version"] = kVersion;
    j["command"] = "eigen";
    j["params"] = p.to_json();
    j["lambda1"] = jnum(res.lambda1);
    j["case_tag"] = to_string(res.case_tag);
    j["f_tilde"] = jnum(res.f_tilde);
    j["g_tilde"] = jnum(res.g_tilde);
    j["solver_residual"] = jnum(res.residual);
    j["bracket"] = {{"lo", jnum(br.lo)}, {"hi", jnum(br.hi)}};
    ordered_json jr;
    for (const auto& e : residuals) jr[e.equation] = jnum(e.residual);
    j["transcendental_residuals"] = jr;
    j["predicted_fate"] = res.lambda1 < 0.0 ? "Persist" : "Extinct";
    write_text(out_path, j.dump(2) + "\n", out);
    return 0;
}

struct GridSpec {
    double alpha_min = 0.0, alpha_max = -1.0; // max < 0: default to L - l span
    int alpha_count = 19;
    double l_min = 0.5, l_max = -1.0;
    int l_count = 19;
};

inline int cmd_sweep(const Params& p, const GridSpec& g, const std::string& format,
                     const std::string& out_path, std::ostream& out) {
    const auto bc = p.boundary();
    const auto growth = p.growth();
    const double amax = g.alpha_max < 0.0 ? p.L - g.l_min : g.alpha_max;
    const double lmax = g.l_max < 0.0 ? p.L - 0.5 : g.l_max;
    const auto alphas = linspace(g.alpha_min, amax, g.alpha_count);
    const auto ls = linspace(g.l_min, lmax, g.l_count);
    const auto table = sweep(p.L, bc, growth, alphas, ls);

    if (format == "csv") {
        std::ostringstream os;
        os << p.csv_comment();
        os << "alpha,l,lambda1\n";
        for (std::size_t ia = 0; ia < alphas.size(); ++ia)
            for (std::size_t il = 0; il < ls.size(); ++il)
                os << csv_double(alphas[ia]) << "," << csv_double(ls[il]) << ","
                   << csv_double(table.at(ia, il)) << "\n";
        write_text(out_path, os.str(), out);
        return 0;
    }
    ordered_json j;
    j["version"] = kVersion;
    j["command"] = "sweep";
    j["params"] = p.to_json();
    j["alpha_grid"] = ordered_json::array();
    for (double a : alphas) j["alpha_grid"].push_back(jnum(a));
    j["l_grid"] = ordered_json::array();
    for (double l : ls) j["l_grid"].push_back(jnum(l));
    ordered_json rows = ordered_json::array();
    for (std::size_t ia = 0; ia < alphas.size(); ++ia) {
        ordered_json row = ordered_json::array();
        for (std::size_t il = 0; il < ls.size(); ++il) row.push_back(jnum(table.at(ia, il)));
        rows.push_back(row);
    }
    j["lambda1"] = rows;
    write_text(out_path, j.dump(2) + "\n", out);
    return 0;
}

inline int cmd_sensitivity(const Params& p, int alpha_count, const std::string& format,
                           const std::string& out_path, std::ostream& out) {
    const auto bc = p.boundary();
    const auto growth = p.growth();
    const double slack = p.L - p.l;
    const auto alphas = alpha_count > 1 ? linspace(0.0, slack, alpha_count)
                                        : std::vector<double>{p.alpha};

    struct Row {
        double alpha, lambda1;
        const char* tag;
        std::optional<double> closed;
        double fd;
    };
    std::vector<Row> rows;
    for (double a : alphas) {
        const ZoneLayout layout(p.L, a, p.l);
        const auto res = principal_eigenvalue(layout, bc, growth, p.tol);
        std::optional<double> closed;
        try {
            closed = dlambda_dalpha_closed(res, layout, bc, growth).dlambda_dalpha;
        } catch (const NoFormula&) {
        }
        rows.push_back({a, res.lambda1, to_string(res.case_tag), closed,
                        dlambda_dalpha_fd(layout, bc, growth)});
    }

    if (format == "csv") {
        std::ostringstream os;
        os << p.csv_comment();
        os << "alpha,lambda1,case_tag,dlambda_dalpha_closed,dlambda_dalpha_fd\n";
        for (const auto& r : rows)
            os << csv_double(r.alpha) << "," << csv_double(r.lambda1) << "," << r.tag << ","
               << (r.closed ? csv_double(*r.closed) : "") << "," << csv_double(r.fd) << "\n";
        write_text(out_path, os.str(), out);
        return 0;
    }
    ordered_json j;
    j["version"] = kVersion;
    j["command"] = "sensitivity";
    j["params"] = p.to_json();
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json e;
        e["alpha"] = jnum(r.alpha);
        e["lambda1"] = jnum(r.lambda1);
        e["case_tag"] = r.tag;
        e["dlambda_dalpha_closed"] = r.closed ? jnum(*r.closed) : ordered_json(nullptr);
        e["dlambda_dalpha_fd"] = jnum(r.fd);
        arr.push_back(e);
    }
    j["rows"] = arr;
    write_text(out_path, j.dump(2) + "\n", out);
    return 0;
}

struct SimFlags {
    double u0 = 0.01;
    double t_end = 2000.0;
    double dx = 0.025;
    double dt = 0.0;
    std::string scheme = "cn";
    double xi = 0.0;
    int snapshots = 256;
    double window = 0.0; // 0: 20% of t_end
};

inline ordered_json run_one_simulation(const Params& p, const SimFlags& s,
                                       const std::string& format, const std::string& out_path,
                                       std::ostream& out) {
    const auto bc = p.boundary();
    const auto growth = p.growth();
    const ZoneLayout layout(p.L, p.alpha, p.l);

    SimConfig cfg;
    cfg.dx = s.dx;
    cfg.dt = s.dt;
    cfg.t_end = s.t_end;
    cfg.scheme = s.scheme == "euler" ? Scheme::ExplicitEuler : Scheme::SemiImplicitCN;
    cfg.persistence_floor = s.xi;
    cfg.snapshot_count = s.snapshots;
    const auto traj = simulate(layout, bc, growth, {s.u0}, cfg);
    const double window = s.window > 0.0 ? s.window : 0.2 * s.t_end;
    const auto fate = classify_fate(traj, bc, traj.xi, window);
    const double lam = principal_eigenvalue(layout, bc, growth, p.tol).lambda1;

    if (!out_path.empty()) {
        if (format == "csv") {
            std::ostringstream os;
            os << p.csv_comment();
            os << "t,x,u\n";
            for (std::size_t k = 0; k < traj.times.size(); ++k)
                for (std::size_t i = 0; i < traj.cell_centers.size(); ++i)
                    os << csv_double(traj.times[k]) << "," << csv_double(traj.cell_centers[i])
                       << "," << csv_double(traj.snapshots[k][i]) << "\n";
            write_text(out_path, os.str(), out);
        } else {
            ordered_json jt;
            jt["version"] = kVersion;
            jt["command"] = "simulate";
            jt["params"] = p.to_json();
            jt["times"] = ordered_json::array();
            for (double t : traj.times) jt["times"].push_back(jnum(t));
            jt["x"] = ordered_json::array();
            for (double x : traj.cell_centers) jt["x"].push_back(jnum(x));
            jt["u"] = ordered_json::array();
            for (const auto& snap : traj.snapshots) {
                ordered_json row = ordered_json::array();
                for (double v : snap) row.push_back(jnum(v));
                jt["u"].push_back(row);
            }
            write_text(out_path, jt.dump(2) + "\n", out);
        }
    }

    ordered_json j;
    j["params"] = p.to_json();
    j["fate"] = to_string(fate.verdict);
    j["lambda1"] = jnum(lam);
    j["sign_agreement"] = (fate.verdict == Fate::Persist && lam < 0.0) ||
                          (fate.verdict == Fate::Extinct && lam > 0.0);
    j["sim_floor"] = jnum(fate.sim_floor);
    j["xi"] = jnum(traj.xi);
    return j;
}

inline int cmd_simulate(const Params& p, const SimFlags& s, const std::string& format,
                        const std::string& out_path, std::ostream& out) {
    ordered_json j;
    j["version"] = kVersion;
    j["command"] = "simulate";
    j["result"] = run_one_simulation(p, s, format, out_path, out);
    out << j.dump(2) << "\n";
    return 0;
}

inline int cmd_design(const Params& p, bool have_l, const std::string& out_path,
                      std::ostream& out) {
    const auto bc = p.boundary();
    const auto growth = p.growth();
    const auto rep =
        design_report(p.L, bc, growth, have_l ? std::optional<double>(p.l) : std::nullopt);

    ordered_json j;
    j["version"] = kVersion;
    j["command"] = "design";
    j["params"] = p.to_json();
    j["regime"] = rep.regime;
    ordered_json lb;
    for (const auto& [name, value] : rep.l_bars) lb[name] = jnum(value);
    j["l_bars"] = lb;
    switch (rep.alpha_star.kind) {
        case AlphaStar::Kind::Anywhere: j["alpha_star"] = "anywhere"; break;
        case AlphaStar::Kind::None: j["alpha_star"] = "none"; break;
        case AlphaStar::Kind::Values: {
            ordered_json vs = ordered_json::array();
            for (double v : rep.alpha_star.values) vs.push_back(jnum(v));
            j["alpha_star"] = vs;
            break;
        }
    }
    j["verdict_at_optimum"] = to_string(rep.verdict_at_optimum.verdict);
    j["lambda1_at_optimum"] = jnum(rep.verdict_at_optimum.lambda1);
    j["rule"] = rep.rule;
    write_text(out_path, j.dump(2) + "\n", out);
    return 0;
}

inline int cmd_oracle_compare(const Params& p, const GridSpec& g, const std::string& format,
                              const std::string& out_path, std::ostream& out) {
    const auto bc = p.boundary();
    const auto growth = p.growth();
    const double amax = g.alpha_max < 0.0 ? p.L - g.l_min : g.alpha_max;
    const double lmax = g.l_max < 0.0 ? p.L * 0.8 : g.l_max;
    const auto alphas = linspace(g.alpha_min, amax, g.alpha_count);
    const auto ls = linspace(g.l_min, lmax, g.l_count);

    struct Row {
        double alpha, l, tm, fd, err, diff;
    };
    std::vector<Row> rows;
    for (double a : alphas)
        for (double l : ls) {
            if (a + l > p.L || l <= 0.0) continue;
            const ZoneLayout layout(p.L, a, l);
            const double tm = principal_eigenvalue(layout, bc, growth, p.tol).lambda1;
            const auto fd = oracle_eigenvalue(layout, bc, growth);
            rows.push_back({a, l, tm, fd.value, fd.err_estimate, std::abs(tm - fd.value)});
        }

    if (format == "csv") {
        std::ostringstream os;
        os << p.csv_comment();
        os << "alpha,l,lambda1_transfer,lambda1_fd,fd_err_estimate,abs_diff\n";
        for (const auto& r : rows)
            os << csv_double(r.alpha) << "," << csv_double(r.l) << "," << csv_double(r.tm)
               << "," << csv_double(r.fd) << "," << csv_double(r.err) << ","
               << csv_double(r.diff) << "\n";
        write_text(out_path, os.str(), out);
        return 0;
    }
    ordered_json j;
    j["version"] = kVersion;
    j["command"] = "oracle-compare";
    j["params"] = p.to_json();
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json e;
        e["alpha"] = jnum(r.alpha);
        e["l"] = jnum(r.l);
        e["lambda1_transfer"] = jnum(r.tm);
        e["lambda1_fd"] = jnum(r.fd);
        e["fd_err_estimate"] = jnum(r.err);
        e["abs_diff"] = jnum(r.diff);
        arr.push_back(e);
    }
    j["rows"] = arr;
    write_text(out_path, j.dump(2) + "\n", out);
    return 0;
}

// Figure-style presets bundle the reference parameter set r=0.2, a=0.1,
// L=10, u0=0.01.  fig3 runs its three scenarios with a Neumann right end
// and reports fates alongside the eigenvalue signs.
inline int cmd_fig3(const SimFlags& base, const std::string& format,
                    const std::string& out_path, std::ostream& out) {
    SimFlags s = base;
    ordered_json j;
    j["version"] = kVersion;
    j["command"] = "simulate";
    j["preset"] = "fig3";
    j["right_end"] = "Neumann";
    ordered_json scenarios = ordered_json::array();
    struct Sc {
        const char* name;
        const char* bc;
        double alpha, l;
    };
    const Sc cases[] = {{"neumann_left_zone_1_4", "NN", 1.0, 3.0},
                        {"dirichlet_left_zone_1_4", "DN", 1.0, 3.0},
                        {"dirichlet_left_zone_3_6", "DN", 3.0, 3.0}};
    int idx = 0;
    for (const auto& c : cases) {
        Params p;
        p.L = 10.0;
        p.r = 0.2;
        p.a = 0.1;
        p.bc = c.bc;
        p.alpha = c.alpha;
        p.l = c.l;
        std::string path;
        if (!out_path.empty()) {
            path = out_path;
            const auto dot = path.rfind('.');
            const std::string suffix = "-" + std::string(1, static_cast<char>('a' + idx));
            if (dot == std::string::npos) path += suffix;
            else path.insert(dot, suffix);
        }
        ordered_json res = run_one_simulation(p, s, format, path, out);
        res["scenario"] = c.name;
        scenarios.push_back(res);
        ++idx;
    }
    j["scenarios"] = scenarios;
    out << j.dump(2) << "\n";
    return 0;
}

// ── Entry point ───────────────────────────────────────────────────────────────

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"principal-eigenvalue analysis of a protection zone in a 1-D "
                 "strong-Allee habitat"};
    app.require_subcommand(1);

    Params p;
    GridSpec grid;
    SimFlags sim;
    std::string out_path;
    std::string format = "json";
    std::string preset;
    double robin_ratio = 1.0;

    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "output file (default: stdout)");
        cmd->add_option("--format", format, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };
    auto add_grid = [&](CLI::App* cmd) {
        cmd->add_option("--alpha-min", grid.alpha_min);
        cmd->add_option("--alpha-max", grid.alpha_max);
        cmd->add_option("--alpha-count", grid.alpha_count);
        cmd->add_option("--l-min", grid.l_min);
        cmd->add_option("--l-max", grid.l_max);
        cmd->add_option("--l-count", grid.l_count);
    };

    auto* eigen_cmd = app.add_subcommand("eigen", "one lambda1 with case tag and residuals");
    add_common_options(eigen_cmd, p);
    add_output(eigen_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "lambda1 table over (alpha, l) grids");
    add_common_options(sweep_cmd, p, false);
    add_grid(sweep_cmd);
    add_output(sweep_cmd);
    sweep_cmd->add_option("--preset", preset, "fig1-rn or fig2-rd parameter bundles")
        ->check(CLI::IsMember({"fig1-rn", "fig2-rd"}));
    sweep_cmd->add_option("--ratio", robin_ratio, "Robin ratio a2/a1 for the presets");

    auto* sens_cmd = app.add_subcommand("sensitivity",
                                        "closed-form and finite-difference dlambda1/dalpha");
    add_common_options(sens_cmd, p);
    int sens_count = 0;
    sens_cmd->add_option("--alpha-count", sens_count,
                         "tabulate over this many starts in [0, L-l] (default: single alpha)");
    add_output(sens_cmd);

    auto* sim_cmd = app.add_subcommand("simulate", "time-domain run with fate classification");
    add_common_options(sim_cmd, p);
    sim_cmd->add_option("--u0", sim.u0, "constant initial density");
    sim_cmd->add_option("--t-end", sim.t_end, "integration horizon");
    sim_cmd->add_option("--dx", sim.dx, "grid spacing");
    sim_cmd->add_option("--dt", sim.dt, "time step (default: dx for CN)");
    sim_cmd->add_option("--scheme", sim.scheme, "cn or euler")
        ->check(CLI::IsMember({"cn", "euler"}));
    sim_cmd->add_option("--xi", sim.xi, "persistence floor (default: a/2)");
    sim_cmd->add_option("--snapshots", sim.snapshots, "snapshot count");
    sim_cmd->add_option("--window", sim.window, "fate window length (default: 0.2 t_end)");
    sim_cmd->add_option("--preset", preset, "fig3 scenario bundle")
        ->check(CLI::IsMember({"fig3"}));
    add_output(sim_cmd);

    auto* design_cmd = app.add_subcommand("design", "zone-design report");
    add_common_options(design_cmd, p, false);
    double design_l = -1.0;
    design_cmd->add_option("--l", design_l, "zone length to classify");
    add_output(design_cmd);

    auto* oracle_cmd = app.add_subcommand("oracle-compare",
                                          "transfer-matrix vs finite-difference table");
    add_common_options(oracle_cmd, p, false);
    add_grid(oracle_cmd);
    add_output(oracle_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            return 0;
        }
        err << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (eigen_cmd->parsed()) return cmd_eigen(p, out_path, out);
        if (sweep_cmd->parsed()) {
            if (preset == "fig1-rn" || preset == "fig2-rd") {
                p.L = 10.0;
                p.r = 0.2;
                p.a = 0.1;
                std::ostringstream raw;
                raw << "1," << robin_ratio << (preset == "fig1-rn" ? ",1,0" : ",0,1");
                p.bc_raw = raw.str();
            }
            return cmd_sweep(p, grid, format, out_path, out);
        }
        if (sens_cmd->parsed()) return cmd_sensitivity(p, sens_count, format, out_path, out);
        if (sim_cmd->parsed()) {
            if (preset == "fig3") return cmd_fig3(sim, format, out_path, out);
            return cmd_simulate(p, sim, format, out_path, out);
        }
        if (design_cmd->parsed()) {
            if (design_l > 0.0) p.l = design_l;
            return cmd_design(p, design_l > 0.0, out_path, out);
        }
        if (oracle_cmd->parsed()) return cmd_oracle_compare(p, grid, format, out_path, out);
        err << app.help();
        return 2;
    } catch (const ValidationError& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace alleezone::cli
