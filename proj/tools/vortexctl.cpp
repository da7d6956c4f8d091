// Command-line driver: parses a JSON run configuration, dispatches to
// the library, and writes deterministic reports (report.json,
// trajectory.csv, fields/*.csv). Identical config + seed + thread count
// produce byte-identical JSON: every float is printed at 17 significant
// digits and all sampling is seeded.
//
// Exit codes: 0 success, 2 validation error (bad config or module
// precondition), 3 numerical failure (solver or integrator).

#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vortex/approx.hpp"
#include "vortex/cylinder.hpp"
#include "vortex/errors.hpp"
#include "vortex/flow.hpp"
#include "vortex/fourier.hpp"
#include "vortex/loopspace.hpp"
#include "vortex/morsebott.hpp"
#include "vortex/rational.hpp"
#include "vortex/rng.hpp"
#include "vortex/serialize.hpp"
#include "vortex/toric.hpp"

namespace {

using nlohmann::json;
using namespace vortex;

struct RunContext {
    json config;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 1;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidOptions("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidOptions(std::string("config is not valid JSON: ") + e.what());
    }
}

TorusAction parse_action(const json& cfg) {
    if (!cfg.contains("action"))
        throw InvalidOptions("config needs an \"action\" object");
    const json& a = cfg.at("action");
    if (!a.contains("weights") || !a.at("weights").is_array() || a.at("weights").empty())
        throw InvalidOptions("action.weights must be a nonempty array of integer rows");
    const auto& w = a.at("weights");
    const int n = static_cast<int>(w.size());
    const int k = static_cast<int>(w.at(0).size());
    Eigen::MatrixXi weights(n, k);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(w.at(i).size()) != k)
            throw InvalidOptions("action.weights rows must have equal length");
        for (int j = 0; j < k; ++j) {
            if (!w.at(i).at(j).is_number_integer())
                throw InvalidOptions("action.weights entries must be integers");
            weights(i, j) = w.at(i).at(j).get<int>();
        }
    }
    if (a.contains("tau_rational")) {
        const auto& tr = a.at("tau_rational");
        if (static_cast<int>(tr.size()) != k)
            throw InvalidOptions("action.tau_rational must have one [num, den] pair per factor");
        RationalVector tau(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) {
            const auto& pr = tr.at(j);
            if (!pr.is_array() || pr.size() != 2 || !pr.at(0).is_number_integer() ||
                !pr.at(1).is_number_integer())
                throw InvalidOptions("tau_rational entries must be [numerator, denominator]");
            const long long num = pr.at(0).get<long long>();
            const long long den = pr.at(1).get<long long>();
            if (den == 0)
                throw InvalidOptions("tau_rational denominator must be nonzero");
            tau[static_cast<std::size_t>(j)] = Rational(num, den);
        }
        return TorusAction::create_exact(std::move(weights), std::move(tau));
    }
    if (!a.contains("tau") || static_cast<int>(a.at("tau").size()) != k)
        throw InvalidOptions("action.tau must be a length-k array (or give tau_rational)");
    Eigen::VectorXd tau(k);
    for (int j = 0; j < k; ++j)
        tau(j) = a.at("tau").at(j).get<double>();
    return TorusAction::create(std::move(weights), std::move(tau));
}

std::vector<Band> parse_bands(const json& cfg, int n) {
    if (!cfg.contains("bands"))
        throw InvalidOptions("config needs a \"bands\" array of [lo, hi] pairs");
    const auto& b = cfg.at("bands");
    if (static_cast<int>(b.size()) != n)
        throw InvalidOptions("bands must list one [lo, hi] pair per coordinate");
    std::vector<Band> bands;
    bands.reserve(b.size());
    for (const auto& pair : b) {
        if (!pair.is_array() || pair.size() != 2)
            throw InvalidOptions("each band must be a [lo, hi] pair");
        Band band;
        band.lo = pair.at(0).get<int>();
        band.hi = pair.at(1).get<int>();
        bands.push_back(band);
    }
    return bands;
}

Eigen::VectorXd parse_real_vector(const json& arr, int expect, const char* what) {
    if (static_cast<int>(arr.size()) != expect)
        throw InvalidOptions(std::string(what) + " has the wrong length");
    Eigen::VectorXd v(expect);
    for (int i = 0; i < expect; ++i)
        v(i) = arr.at(i).get<double>();
    return v;
}

JsonValue verdict_to_json(const RegularityVerdict& v) {
    JsonValue out = JsonValue::object();
    out["status"] = to_string(v.status);
    out["approximate"] = v.approximate;
    if (v.witness) {
        JsonValue w = JsonValue::object();
        JsonValue rows = JsonValue::array();
        for (int r : v.witness->rows)
            rows.push_back(r);
        w["rows"] = std::move(rows);
        JsonValue coeffs = JsonValue::array();
        for (const auto& c : v.witness->coeffs)
            coeffs.push_back(c.str()); // exact rational, emitted as "p/q"
        w["coefficients"] = std::move(coeffs);
        w["rank_of_rows"] = v.witness->rank_of_rows;
        out["witness"] = std::move(w);
    }
    return out;
}

JsonValue action_echo(const TorusAction& action) {
    JsonValue a = JsonValue::object();
    a["weights"] = JsonValue::from_int_matrix(action.weights);
    a["tau"] = JsonValue::from_vector(action.tau);
    a["exact_tau"] = static_cast<bool>(action.tau_exact);
    return a;
}

void emit_report(const RunContext& ctx, JsonValue& report) {
    write_file(ctx.out_dir + "/report.json", report.dump() + "\n");
}

// ---------------------------------------------------------------- commands

int cmd_regularity(const RunContext& ctx) {
    const TorusAction action = parse_action(ctx.config);
    const RegularityVerdict verdict =
        action.tau_exact ? classify_value(action) : classify_value_approx(action, action.tau);
    JsonValue report = JsonValue::object();
    report["command"] = "regularity";
    report["action"] = action_echo(action);
    report["proper"] = is_proper(action);
    report["verdict"] = verdict_to_json(verdict);
    emit_report(ctx, report);
    std::cout << "regularity: " << to_string(verdict.status)
              << (is_proper(action) ? ", proper" : ", not proper") << "\n";
    return 0;
}

int cmd_band(const RunContext& ctx) {
    const TorusAction action = parse_action(ctx.config);
    if (!ctx.config.contains("band"))
        throw InvalidOptions("config needs a \"band\" object with eta_minus / eta_plus");
    const json& b = ctx.config.at("band");
    const Eigen::VectorXd eta_minus =
        parse_real_vector(b.at("eta_minus"), action.k(), "band.eta_minus");
    const Eigen::VectorXd eta_plus =
        parse_real_vector(b.at("eta_plus"), action.k(), "band.eta_plus");
    const BandBound bb = theorem_B_band(action, eta_minus, eta_plus);
    JsonValue report = JsonValue::object();
    report["command"] = "band";
    report["action"] = action_echo(action);
    report["eta_minus"] = JsonValue::from_vector(eta_minus);
    report["eta_plus"] = JsonValue::from_vector(eta_plus);
    JsonValue coords = JsonValue::array();
    for (int j = 0; j < action.n(); ++j) {
        JsonValue c = JsonValue::object();
        c["coordinate"] = j;
        c["m_minus"] = bb.m_minus(j);
        c["m_plus"] = bb.m_plus(j);
        c["forced_zero"] = static_cast<bool>(bb.forced_zero[static_cast<std::size_t>(j)]);
        coords.push_back(std::move(c));
    }
    report["bands"] = std::move(coords);
    emit_report(ctx, report);
    std::cout << "band: window computed for " << action.n() << " coordinates\n";
    return 0;
}

FlowOptions parse_flow_options(const json& cfg) {
    FlowOptions opts;
    if (!cfg.contains("flow"))
        return opts;
    const json& f = cfg.at("flow");
    if (f.contains("s_max"))
        opts.s_max = f.at("s_max").get<double>();
    if (f.contains("grad_tol"))
        opts.grad_tol = f.at("grad_tol").get<double>();
    if (f.contains("dwell"))
        opts.dwell = f.at("dwell").get<double>();
    if (f.contains("blowup_radius"))
        opts.blowup_radius = f.at("blowup_radius").get<double>();
    if (f.contains("record_ds"))
        opts.record_ds = f.at("record_ds").get<double>();
    if (f.contains("rk_abs_tol"))
        opts.rk_abs_tol = f.at("rk_abs_tol").get<double>();
    if (f.contains("rk_rel_tol"))
        opts.rk_rel_tol = f.at("rk_rel_tol").get<double>();
    if (f.contains("max_steps"))
        opts.max_steps = f.at("max_steps").get<long>();
    return opts;
}

FlowState parse_initial_state(const RunContext& ctx, const ApproxSpace& space) {
    FlowState st;
    st.c = Eigen::VectorXcd::Zero(space.N);
    st.eta = Eigen::VectorXd::Zero(space.k());
    const json& f = ctx.config.contains("flow") ? ctx.config.at("flow") : json::object();
    const json& init = f.contains("initial") ? f.at("initial") : json::object();
    if (init.contains("c_re")) {
        const Eigen::VectorXd re = parse_real_vector(init.at("c_re"), space.N, "initial.c_re");
        const Eigen::VectorXd im = init.contains("c_im")
                                       ? parse_real_vector(init.at("c_im"), space.N, "initial.c_im")
                                       : Eigen::VectorXd::Zero(space.N);
        for (int l = 0; l < space.N; ++l)
            st.c(l) = std::complex<double>(re(l), im(l));
    } else {
        const double scale = init.contains("scale") ? init.at("scale").get<double>() : 0.5;
        Rng rng(Rng::derive(ctx.seed, 7));
        for (int l = 0; l < space.N; ++l)
            st.c(l) = std::complex<double>(rng.normal(), rng.normal()) * scale;
        if (init.contains("project") && init.at("project").get<bool>()) {
            if (!project_to_level_set(space, st.c))
                throw ProjectionDiverged("could not project the random start to the level set");
        }
    }
    if (init.contains("eta"))
        st.eta = parse_real_vector(init.at("eta"), space.k(), "initial.eta");
    return st;
}

void write_trajectory_csv(const RunContext& ctx, const FlowTrajectory& traj) {
    std::vector<std::vector<double>> rows;
    rows.reserve(traj.records.size());
    for (const FlowRecord& rec : traj.records)
        rows.push_back({rec.s, rec.action, rec.grad_norm, rec.mu_err, rec.energy_acc, rec.c_norm,
                        rec.eta_norm});
    write_file(ctx.out_dir + "/trajectory.csv",
               csv_table({"s", "action", "grad_norm", "mu_err", "energy", "c_norm", "eta_norm"},
                         rows));
}

void write_field_csv(const RunContext& ctx, const FlowTrajectory& traj) {
    const ApproxSpace& space = traj.space;
    std::vector<std::string> header = {"s"};
    for (int l = 0; l < space.N; ++l) {
        const std::string tag = std::to_string(space.rho[static_cast<std::size_t>(l)]) + "_m" +
                                std::to_string(space.modes[static_cast<std::size_t>(l)]);
        header.push_back("re_c" + tag);
        header.push_back("im_c" + tag);
    }
    for (int a = 0; a < space.k(); ++a)
        header.push_back("eta" + std::to_string(a));
    std::vector<std::vector<double>> rows;
    rows.reserve(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        std::vector<double> row;
        row.push_back(traj.s_grid[i]);
        for (int l = 0; l < space.N; ++l) {
            row.push_back(traj.states[i].c(l).real());
            row.push_back(traj.states[i].c(l).imag());
        }
        for (int a = 0; a < space.k(); ++a)
            row.push_back(traj.states[i].eta(a));
        rows.push_back(std::move(row));
    }
    write_file(ctx.out_dir + "/fields/modes.csv", csv_table(header, rows));
}

const char* status_name(FlowStatus s) {
    switch (s) {
    case FlowStatus::Converged:
        return "converged";
    case FlowStatus::MaxTimeReached:
        return "max_time_reached";
    default:
        return "blowup";
    }
}

int cmd_flow(const RunContext& ctx, bool energy_audit) {
    const TorusAction action = parse_action(ctx.config);
    const ApproxSpace space = build(action, parse_bands(ctx.config, action.n()));
    const double r = ctx.config.contains("r") ? ctx.config.at("r").get<double>() : 0.0;
    if (r < 0.0 || r > 1.0)
        throw InvalidOptions("metric parameter r must lie in [0, 1]");
    FlowOptions opts = parse_flow_options(ctx.config);
    if (opts.record_ds == 0.0)
        opts.record_ds = opts.s_max / 500.0;
    const FlowState start = parse_initial_state(ctx, space);
    const FlowTrajectory traj = integrate(space, start, r, opts);
    write_trajectory_csv(ctx, traj);
    write_field_csv(ctx, traj);

    const double a_start = traj.records.front().action;
    const double a_end = traj.records.back().action;
    const double e = energy(traj);

    JsonValue report = JsonValue::object();
    report["command"] = energy_audit ? "energy-audit" : "flow";
    report["action"] = action_echo(action);
    report["r"] = r;
    report["status"] = status_name(traj.status);
    report["s_end"] = traj.s_grid.back();
    report["steps_recorded"] = static_cast<std::int64_t>(traj.records.size());
    report["action_start"] = a_start;
    report["action_end"] = a_end;
    report["energy"] = e;
    report["final_grad_norm"] = traj.records.back().grad_norm;
    report["max_offband_residual"] = traj.max_offband_residual;

    if (energy_audit) {
        const double drop = a_start - a_end;
        const double denom = std::max({std::abs(drop), std::abs(e), 1e-30});
        const double rel = std::abs(e - drop) / denom;
        report["action_drop"] = drop;
        report["relative_error"] = rel;
        report["identity_holds"] = rel <= 1e-5;
        emit_report(ctx, report);
        std::cout << "energy-audit: E = " << fmt17(e) << ", drop = " << fmt17(drop)
                  << ", rel err = " << fmt17(rel) << "\n";
        return 0;
    }

    if (traj.status == FlowStatus::Converged) {
        const FlowState limit = detect_limit(traj);
        report["limit_eta"] = JsonValue::from_vector(limit.eta);
        report["limit_c"] = JsonValue::from_complex_vector(limit.c);
    }
    emit_report(ctx, report);
    std::cout << "flow: " << status_name(traj.status) << " at s = " << fmt17(traj.s_grid.back())
              << ", energy " << fmt17(e) << "\n";
    return 0;
}

int cmd_conley(const RunContext& ctx) {
    const TorusAction action = parse_action(ctx.config);
    const ApproxSpace space = build(action, parse_bands(ctx.config, action.n()));
    const json& c = ctx.config.contains("conley") ? ctx.config.at("conley") : json::object();
    const int samples = c.contains("samples") ? c.at("samples").get<int>() : 50;
    const std::string pipeline =
        c.contains("pipeline") ? c.at("pipeline").get<std::string>() : "both";

    JsonValue report = JsonValue::object();
    report["command"] = "conley";
    report["action"] = action_echo(action);
    auto fill = [&](const ConleyReport& rep) {
        JsonValue o = JsonValue::object();
        o["N"] = rep.N;
        o["k"] = rep.k;
        o["critical_dim"] = rep.critical_dim;
        o["normal_rank"] = rep.normal_rank;
        o["negative_rank"] = rep.negative_rank;
        o["morse_bott_verified"] = rep.morse_bott_verified;
        o["samples"] = rep.samples;
        o["min_nonzero_eig"] = rep.min_nonzero_eig;
        o["max_kernel_eig"] = rep.max_kernel_eig;
        return o;
    };
    std::optional<ConleyReport> hess, svd;
    if (pipeline == "hessian" || pipeline == "both")
        hess = conley_report(space, ConleyPipeline::HessianEigen, samples, ctx.seed, ctx.threads);
    if (pipeline == "svd" || pipeline == "both")
        svd = conley_report(space, ConleyPipeline::JacobianSVD, samples, ctx.seed, ctx.threads);
    if (!hess && !svd)
        throw InvalidOptions("conley.pipeline must be \"hessian\", \"svd\", or \"both\"");
    if (hess)
        report["hessian_pipeline"] = fill(*hess);
    if (svd)
        report["svd_pipeline"] = fill(*svd);
    if (hess && svd)
        report["pipelines_agree"] = hess->same_descriptor(*svd);
    const ConleyReport& main = hess ? *hess : *svd;
    emit_report(ctx, report);
    std::cout << "conley: critical_dim " << main.critical_dim << ", ranks " << main.normal_rank
              << "/" << main.negative_rank
              << (main.morse_bott_verified ? ", verified" : ", NOT verified") << "\n";
    return 0;
}

int cmd_constants(const RunContext& ctx) {
    const TorusAction action = parse_action(ctx.config);
    const ApproxSpace space = build(action, parse_bands(ctx.config, action.n()));
    const json& c = ctx.config.contains("constants") ? ctx.config.at("constants") : json::object();
    TameOptions topts;
    topts.seed = ctx.seed;
    topts.threads = ctx.threads;
    if (c.contains("epsilon_grid"))
        for (const auto& e : c.at("epsilon_grid"))
            topts.epsilon_grid.push_back(e.get<double>());
    if (c.contains("sample_count"))
        topts.sample_count = c.at("sample_count").get<int>();
    const TameConstants tc = tame_constants(space, topts);

    JsonValue report = JsonValue::object();
    report["command"] = "constants";
    report["action"] = action_echo(action);
    report["epsilon"] = tc.epsilon;
    report["delta"] = tc.delta;
    report["c"] = tc.c;
    report["lambda_bound"] = tc.lambda_bound;
    report["epsilon_directions"] = tc.epsilon_directions;
    report["sample_count"] = tc.sample_count;

    const bool margins = !c.contains("margins") || c.at("margins").get<bool>();
    if (margins) {
        std::vector<double> r_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
        if (ctx.config.contains("r_grid")) {
            r_grid.clear();
            for (const auto& r : ctx.config.at("r_grid"))
                r_grid.push_back(r.get<double>());
        }
        const int count = c.contains("margin_samples") ? c.at("margin_samples").get<int>() : 100;
        const PalaisSmaleReport ps =
            verify_palais_smale(space, tc, r_grid, count, ctx.seed, ctx.threads);
        JsonValue m = JsonValue::object();
        m["min_margin"] = ps.min_margin;
        m["min_margin_outside_shell"] = ps.min_margin_outside_shell;
        m["min_margin_large_lambda"] = ps.min_margin_large_lambda;
        m["samples_outside_shell"] = ps.samples_outside_shell;
        m["samples_large_lambda"] = ps.samples_large_lambda;
        m["all_positive"] = ps.all_positive;
        report["palais_smale"] = std::move(m);
    }
    emit_report(ctx, report);
    std::cout << "constants: epsilon " << fmt17(tc.epsilon) << ", lambda bound "
              << fmt17(tc.lambda_bound) << "\n";
    return 0;
}

int cmd_neumann_test(const RunContext& ctx) {
    const json& nm = ctx.config.contains("neumann") ? ctx.config.at("neumann") : json::object();
    NeumannOptions opts;
    if (nm.contains("backend")) {
        const std::string b = nm.at("backend").get<std::string>();
        if (b == "chebyshev")
            opts.backend = SBackend::Chebyshev;
        else if (b == "fd")
            opts.backend = SBackend::FiniteDifference;
        else
            throw InvalidOptions("neumann.backend must be \"chebyshev\" or \"fd\"");
    }
    if (nm.contains("resolution"))
        opts.resolution = nm.at("resolution").get<int>();
    const double L = nm.contains("half_length") ? nm.at("half_length").get<double>() : 1.0;
    const int nt = nm.contains("t_samples") ? nm.at("t_samples").get<int>() : 32;
    const std::string which = nm.contains("case") ? nm.at("case").get<std::string>() : "boundary";

    const int ns = resolve_resolution(opts);
    const SCollocation sc = make_collocation(L, opts.backend, ns);
    const double w = 2.0 * M_PI;

    CylinderField h;
    h.half_length = L;
    h.values = Eigen::MatrixXd::Zero(ns, nt);
    Eigen::VectorXd gp = Eigen::VectorXd::Zero(nt), gm = Eigen::VectorXd::Zero(nt);
    Eigen::MatrixXd exact(ns, nt);
    if (which == "boundary") {
        // f = cos(2 pi t) cosh(2 pi s), h = 0, Neumann data from the cosh
        for (int p = 0; p < nt; ++p) {
            const double ct = std::cos(w * p / nt);
            gp(p) = w * std::sinh(w * L) * ct;
            gm(p) = w * std::sinh(w * L) * ct;
            for (int i = 0; i < ns; ++i)
                exact(i, p) = ct * std::cosh(w * sc.nodes(i));
        }
    } else if (which == "interior") {
        // f = -cos(2 pi t) / (2 pi)^2, h = cos(2 pi t), zero Neumann data
        for (int p = 0; p < nt; ++p) {
            const double ct = std::cos(w * p / nt);
            for (int i = 0; i < ns; ++i) {
                h.values(i, p) = ct;
                exact(i, p) = -ct / (w * w);
            }
        }
    } else {
        throw InvalidOptions("neumann.case must be \"boundary\" or \"interior\"");
    }
    const CylinderField f = solve_neumann(h, gp, gm, opts);
    const double max_err = (f.values - exact).cwiseAbs().maxCoeff();
    const NeumannResidual res = neumann_residual(f, h, gp, gm, opts);
    const double ratio = estimate_ratio(f, h, gp, gm, opts);

    JsonValue report = JsonValue::object();
    report["command"] = "neumann-test";
    report["backend"] = (opts.backend == SBackend::Chebyshev) ? "chebyshev" : "fd";
    report["resolution"] = ns;
    report["t_samples"] = nt;
    report["half_length"] = L;
    report["case"] = which;
    report["max_error"] = max_err;
    report["interior_residual"] = res.interior;
    report["boundary_residual"] = res.boundary;
    report["estimate_ratio"] = ratio;
    emit_report(ctx, report);
    std::cout << "neumann-test: max error " << fmt17(max_err) << ", ratio " << fmt17(ratio)
              << "\n";
    return 0;
}

int dispatch(const std::string& command, const RunContext& ctx) {
    if (command == "regularity")
        return cmd_regularity(ctx);
    if (command == "band")
        return cmd_band(ctx);
    if (command == "flow")
        return cmd_flow(ctx, false);
    if (command == "energy-audit")
        return cmd_flow(ctx, true);
    if (command == "conley")
        return cmd_conley(ctx);
    if (command == "constants")
        return cmd_constants(ctx);
    if (command == "neumann-test")
        return cmd_neumann_test(ctx);
    throw InvalidOptions("unknown command: " + command);
}

void emit_error(const RunContext& ctx, const char* type, const std::string& message) {
    JsonValue diag = JsonValue::object();
    diag["error"] = JsonValue::object();
    diag["error"]["type"] = type;
    diag["error"]["message"] = message;
    std::cerr << diag.dump() << "\n";
    try {
        write_file(ctx.out_dir + "/report.json", diag.dump() + "\n");
    } catch (...) {
        // diagnostics on stderr are the contract of last resort
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional vortex-flow toolkit"};
    std::string command, config_path;
    RunContext ctx;
    app.add_option("command", command,
                   "one of: regularity, flow, conley, constants, neumann-test, band, energy-audit")
        ->required();
    app.add_option("--config", config_path, "path to the JSON run configuration")->required();
    app.add_option("--out", ctx.out_dir, "output directory (default .)");
    app.add_option("--seed", ctx.seed, "seed for all sampling (default 1)");
    app.add_option("--threads", ctx.threads, "worker threads for sampling loops (default 1)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        ctx.config = load_config(config_path);
        if (ctx.config.contains("threads") && ctx.threads == 1)
            ctx.threads = ctx.config.at("threads").get<int>();
        return dispatch(command, ctx);
    } catch (const ValidationError& e) {
        emit_error(ctx, "validation", e.what());
        return 2;
    } catch (const NumericalError& e) {
        emit_error(ctx, "numerical", e.what());
        return 3;
    } catch (const json::exception& e) {
        emit_error(ctx, "validation", e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error(ctx, "internal", e.what());
        return 3;
    }
}
