// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: binds configuration files to the analysis
// pipelines and emits reproducible CSV/record outputs.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kppfront/config.hpp"
#include "kppfront/csv.hpp"
#include "kppfront/dispersion.hpp"
#include "kppfront/eigen.hpp"
#include "kppfront/ivp.hpp"
#include "kppfront/traveling_front.hpp"

namespace {

using namespace kppfront;

int run_eigen(Config& cfg, const std::string& out_path) {
    CrossSectionModel model = model_from_config(cfg);
    const double lo = cfg.get_double("eigen", "lambda_min", -2.0);
    const double hi = cfg.get_double("eigen", "lambda_max", 2.0);
    const int n = cfg.get_int("eigen", "samples", 81);
    cfg.reject_unknown_keys();

    CsvWriter csv(out_path);
    csv.meta("command", "eigen");
    csv.meta_all(cfg.resolved());
    csv.header({"lambda", "mu", "mu_prime", "nu"});
    for (int i = 0; i < n; ++i) {
        const double lam = lo + (hi - lo) * double(i) / double(n - 1);
        csv.row({lam, mu(model, lam), mu_derivative(model, lam), nu(model, lam)});
    }
    std::cout << "eigen sweep written to " << out_path << "\n";
    return 0;
}

int run_dispersion(Config& cfg, const std::string& out_path) {
    CrossSectionModel model = model_from_config(cfg);
    const double lo = cfg.get_double("dispersion", "lambda_min", 0.01);
    const double hi = cfg.get_double("dispersion", "lambda_max", 3.0);
    const int n = cfg.get_int("dispersion", "samples", 120);
    cfg.reject_unknown_keys();

    const SpeedAnalysis a = analyze_speed(model, lo, hi, n);
    CsvWriter csv(out_path);
    csv.meta("command", "dispersion");
    csv.meta_all(cfg.resolved());
    csv.meta("mu0", g17(a.mu0));
    csv.meta("c_star", a.c_star ? g17(*a.c_star) : "absent");
    csv.meta("lambda_star", a.lambda_star ? g17(*a.lambda_star) : "absent");
    csv.meta("sup_condition", a.sup_condition_holds ? "1" : "0");
    csv.header({"lambda", "k", "k_over_lambda"});
    for (const auto& [lam, k] : a.k_samples) csv.row({lam, k, k / lam});

    std::cout << "mu0=" << g17(a.mu0)
              << " c_star=" << (a.c_star ? g17(*a.c_star) : "absent")
              << " lambda_star=" << (a.lambda_star ? g17(*a.lambda_star) : "absent")
              << " sup_condition=" << (a.sup_condition_holds ? "1" : "0") << "\n";
    return 0;
}

std::string verdict_record(const RegimeVerdict& v) {
    std::string line = regime_name(v.kind);
    switch (v.kind) {
    case RegimeVerdict::Kind::Extinction:
        line += " rate=" + g17(v.extinction_rate);
        break;
    case RegimeVerdict::Kind::BlowOff:
        break;
    case RegimeVerdict::Kind::Propagation:
        line += " speed=" + g17(v.speed);
        break;
    case RegimeVerdict::Kind::OpenConjectured:
        line += " c_star=" + g17(v.speed);
        break;
    }
    if (v.blowoff)
        line += " blowoff_eta=" + g17(v.blowoff->eta) +
                " blowoff_margin=" + g17(v.blowoff->margin) +
                " blowoff_gamma_max=" + g17(v.blowoff->gamma_max);
    line += " mu0=" + g17(v.mu0) + " lambda_decay=" + g17(v.lambda_decay);
    return line;
}

int run_classify(Config& cfg, const std::string& out_path) {
    CrossSectionModel model = model_from_config(cfg);
    const double decay = cfg.get_double("classify", "decay", 0.5);
    cfg.reject_unknown_keys();

    const RegimeVerdict v = classify_regime(model, decay);
    const std::string record = verdict_record(v);
    std::cout << record << "\n";
    if (!out_path.empty()) {
        CsvWriter csv(out_path);
        csv.meta("command", "classify");
        csv.meta_all(cfg.resolved());
        csv.meta("verdict", record);
    }
    return 0;
}

int run_simulate(Config& cfg, const std::string& prefix) {
    CrossSectionModel model = model_from_config(cfg);
    const double x_min = cfg.get_double("simulate", "x_min", -20.0);
    const double x_max = cfg.get_double("simulate", "x_max", 80.0);
    const int n_x = cfg.get_int("simulate", "n_x", 2001);
    InitialProfile ip;
    ip.lambda = cfg.get_double("simulate", "lambda", 0.5);
    ip.lambda_prime = cfg.get_double("simulate", "lambda_prime", 1.0);
    ip.C1 = cfg.get_double("simulate", "c1", 1.0);
    ip.C2 = cfg.get_double("simulate", "c2", 1.0);
    ip.C3 = cfg.get_double("simulate", "c3", 1.0);
    ip.plateau = cfg.get_double("simulate", "plateau", 1.0);
    RunOptions ro;
    ro.t_end = cfg.get_double("simulate", "t_end", 25.0);
    ro.dt = cfg.get_double("simulate", "dt", 0.0);
    ro.dt_cap = cfg.get_double("simulate", "dt_cap", 0.01);
    ro.cadence = cfg.get_int("simulate", "cadence", 50);
    ro.threshold_T = cfg.get_double("simulate", "threshold_t", 0.0);
    ro.threshold_Y = cfg.get_double("simulate", "threshold_y", 0.0);
    ro.y_inf_guess = cfg.get_double("simulate", "y_inf_guess", 0.0);
    ro.boundary_margin = cfg.get_double("simulate", "margin", 5.0);
    const int stride = cfg.get_int("simulate", "snapshot_stride", 10);
    cfg.reject_unknown_keys();

    const CylinderGrid grid = make_grid(x_min, x_max, n_x);
    FieldState state = make_initial_profile(grid, model, ip);
    const RunResult res = run(std::move(state), grid, model, ro);

    CsvWriter diag(prefix + "_diagnostics.csv");
    diag.meta("command", "simulate");
    diag.meta_all(cfg.resolved());
    diag.meta("dt_used", g17(res.dt_used));
    diag.meta("threshold_T_used", g17(res.threshold_T));
    diag.meta("threshold_Y_used", g17(res.threshold_Y));
    diag.meta("touched_boundary", res.touched_boundary ? "1" : "0");
    diag.header({"t", "front_pos_T", "front_pos_Y", "sup_T", "decay_rate_right",
                 "y_left_plateau"});
    for (const auto& r : res.series)
        diag.row({r.t, r.front_T, r.front_Y, r.sup_T, r.decay_right, r.y_left_plateau});

    CsvWriter snap(prefix + "_final.csv");
    snap.meta("command", "simulate");
    snap.meta_all(cfg.resolved());
    snap.meta("t", g17(res.state.t));
    snap.header({"t", "x", "y", "T", "Y"});
    for (int i = 0; i < grid.n_x; i += stride)
        for (int j = 0; j < model.n_y; ++j)
            snap.row({res.state.t, grid.x(i), model.y(j), res.state.temp(i, j),
                      res.state.reac(i, j)});

    std::cout << "simulate: t=" << g17(res.state.t)
              << " sup_T=" << g17(res.state.sup_T())
              << " touched_boundary=" << (res.touched_boundary ? "1" : "0") << "\n";
    return 0;
}

int run_front(Config& cfg, const std::string& out_path) {
    CrossSectionModel model = model_from_config(cfg);
    const double speed = cfg.get_double("front", "speed", 2.0);
    FrontOptions fo;
    fo.half_length = cfg.get_double("front", "half_length", 40.0);
    fo.n_x = cfg.get_int("front", "n_x", 0);
    fo.tol = cfg.get_double("front", "tol", 1e-8);
    fo.max_iter = cfg.get_int("front", "max_iter", 400);
    fo.theta = cfg.get_double("front", "theta", 0.7);
    fo.margin_strict = cfg.get_double("front", "margin_strict", 1.1);
    fo.margin_delta = cfg.get_double("front", "margin_delta", 1.5);
    const int stride = cfg.get_int("front", "stride", 1);
    cfg.reject_unknown_keys();

    const FrontSolution f = solve_front(model, speed, fo);

    CsvWriter csv(out_path);
    csv.meta("command", "front");
    csv.meta_all(cfg.resolved());
    csv.meta("c", g17(f.c));
    csv.meta("lambda_c", g17(f.lambda_c));
    csv.meta("y_inf", g17(f.y_inf));
    csv.meta("y_inf_strip", g17(f.y_inf_strip));
    csv.meta("residual", g17(f.residual));
    csv.meta("iterations", std::to_string(f.iterations));
    csv.meta("converged", f.converged ? "1" : "0");
    csv.meta("max_violation", g17(f.max_violation));
    csv.meta("boundary_layer_width", g17(f.boundary_layer_width));
    csv.meta("sandwich_beta", g17(f.sandwich.beta));
    csv.meta("sandwich_gamma", g17(f.sandwich.gamma));
    csv.meta("sandwich_eta", g17(f.sandwich.eta));
    csv.meta("sandwich_eps", g17(f.sandwich.eps));
    csv.meta("sandwich_delta", g17(f.sandwich.delta));
    csv.meta("sandwich_x0", g17(f.sandwich.x0));
    csv.meta("sandwich_M", g17(f.sandwich.M));
    csv.header({"x", "y", "T", "Y"});
    for (int i = 0; i < f.grid.n_x; i += stride)
        for (int j = 0; j < model.n_y; ++j) {
            const std::size_t idx = std::size_t(i) * std::size_t(model.n_y) + std::size_t(j);
            csv.row({f.grid.x(i), model.y(j), f.T[idx], f.Y[idx]});
        }

    std::cout << "front: c=" << g17(f.c) << " lambda_c=" << g17(f.lambda_c)
              << " y_inf=" << g17(f.y_inf) << " residual=" << g17(f.residual)
              << " iterations=" << f.iterations
              << " converged=" << (f.converged ? "1" : "0") << "\n";
    return f.converged ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral analysis, Cauchy simulation and traveling-front construction "
                 "for KPP reaction-diffusion systems with heat loss in a shear-flow cylinder"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<double> decay_flag, speed_flag, half_length_flag, tol_flag;
    std::optional<int> max_iter_flag;

    auto* eigen_cmd = app.add_subcommand("eigen", "lambda sweep of mu, mu', nu");
    eigen_cmd->add_option("--config", config_path, "configuration file")->required();
    eigen_cmd->add_option("--out", out_path, "output CSV path");

    auto* disp_cmd = app.add_subcommand("dispersion", "k(lambda) curve, c*, lambda*");
    disp_cmd->add_option("--config", config_path, "configuration file")->required();
    disp_cmd->add_option("--out", out_path, "output CSV path");

    auto* cls_cmd = app.add_subcommand("classify", "Cauchy-data regime classification");
    cls_cmd->add_option("--config", config_path, "configuration file")->required();
    cls_cmd->add_option("--decay", decay_flag, "initial right decay rate of T0");
    cls_cmd->add_option("--out", out_path, "optional record file");

    auto* sim_cmd = app.add_subcommand("simulate", "time integration of the Cauchy problem");
    sim_cmd->add_option("--config", config_path, "configuration file")->required();
    sim_cmd->add_option("--out-prefix", out_path, "output file prefix");

    auto* front_cmd = app.add_subcommand("front", "traveling-front construction");
    front_cmd->add_option("--config", config_path, "configuration file")->required();
    front_cmd->add_option("--speed", speed_flag, "front speed c");
    front_cmd->add_option("--half-length", half_length_flag, "cylinder half-length a");
    front_cmd->add_option("--tol", tol_flag, "Picard stopping tolerance");
    front_cmd->add_option("--max-iter", max_iter_flag, "Picard iteration budget");
    front_cmd->add_option("--out", out_path, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        kppfront::Config cfg = kppfront::Config::from_file(config_path);
        if (decay_flag) cfg.set("classify", "decay", kppfront::Config::format_double(*decay_flag));
        if (speed_flag) cfg.set("front", "speed", kppfront::Config::format_double(*speed_flag));
        if (half_length_flag)
            cfg.set("front", "half_length", kppfront::Config::format_double(*half_length_flag));
        if (tol_flag) cfg.set("front", "tol", kppfront::Config::format_double(*tol_flag));
        if (max_iter_flag) cfg.set("front", "max_iter", std::to_string(*max_iter_flag));

        if (eigen_cmd->parsed())
            return run_eigen(cfg, out_path.empty() ? "eigen.csv" : out_path);
        if (disp_cmd->parsed())
            return run_dispersion(cfg, out_path.empty() ? "dispersion.csv" : out_path);
        if (cls_cmd->parsed()) return run_classify(cfg, out_path);
        if (sim_cmd->parsed()) return run_simulate(cfg, out_path.empty() ? "sim" : out_path);
        if (front_cmd->parsed())
            return run_front(cfg, out_path.empty() ? "front.csv" : out_path);
    } catch (const kppfront::Error& e) {
        std::cerr << "ERROR " << kppfront::errc_name(e.code()) << ": " << e.what() << "\n";
        switch (e.code()) {
        case kppfront::errc::config_not_found:
        case kppfront::errc::config_parse:
        case kppfront::errc::unknown_key:
            return 2;
        default:
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "ERROR INTERNAL: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
