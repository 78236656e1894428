// Command-line front end: single solves over a fixed mesh, blow-up time
// estimation with adaptive steps, and the rho-sweep convergence study.
//
// Exit codes: 0 success, 1 solver failure, 2 configuration error.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gts/gts.hpp"
#include "gts/toml_lite.hpp"

namespace {

struct RunConfig {
    std::string problem = "example54";
    std::map<std::string, double> problem_params;
    std::string scheme = "cg";
    int degree = 0;
    // mesh (solve)
    int steps = 10;
    double horizon = 1.0;
    std::vector<double> nodes;  // explicit nodes override steps/horizon
    // solver
    gts::SolverConfig solver;
    // blow-up
    std::string mode = "empirical";
    double rho = 0.25;
    std::vector<double> rho_list;
    double tau = 0.0;
    double rho0 = 0.0;
    // sweep
    std::vector<std::string> schemes{"cg", "dg"};
    std::vector<int> degrees{0, 1};
    int jobs = 0;
    // output
    std::string out;
    std::string format = "csv";
};

gts::Scheme parse_scheme(const std::string& s) {
    if (s == "cg") return gts::Scheme::cg;
    if (s == "dg") return gts::Scheme::dg;
    throw std::invalid_argument("scheme must be cg or dg, got: " + s);
}

gts::StepMode parse_mode(const std::string& s) {
    if (s == "theoretical") return gts::StepMode::theoretical;
    if (s == "empirical") return gts::StepMode::empirical;
    throw std::invalid_argument("mode must be theoretical or empirical, got: " + s);
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    gts::toml::Table table = gts::toml::parse(in);
    auto has = [&](const std::string& key) { return table.count(key) > 0; };
    if (has("problem.name")) cfg.problem = table["problem.name"].as_string();
    for (const char* key : {"lambda", "alpha", "beta", "u0"})
        if (has(std::string("problem.") + key))
            cfg.problem_params[key] = table[std::string("problem.") + key].as_double();
    if (has("run.scheme")) cfg.scheme = table["run.scheme"].as_string();
    if (has("run.degree")) cfg.degree = static_cast<int>(table["run.degree"].as_int());
    if (has("mesh.steps")) cfg.steps = static_cast<int>(table["mesh.steps"].as_int());
    if (has("mesh.horizon")) cfg.horizon = table["mesh.horizon"].as_double();
    if (has("mesh.nodes")) cfg.nodes = table["mesh.nodes"].as_double_array();
    if (has("solver.fp_tolerance")) cfg.solver.fp_tolerance = table["solver.fp_tolerance"].as_double();
    if (has("solver.fp_max_iters"))
        cfg.solver.fp_max_iters = static_cast<int>(table["solver.fp_max_iters"].as_int());
    if (has("solver.quad_nodes"))
        cfg.solver.quad_nodes = static_cast<int>(table["solver.quad_nodes"].as_int());
    if (has("blowup.mode")) cfg.mode = table["blowup.mode"].as_string();
    if (has("blowup.rho")) cfg.rho = table["blowup.rho"].as_double();
    if (has("blowup.rho_list")) cfg.rho_list = table["blowup.rho_list"].as_double_array();
    if (has("blowup.tau")) cfg.tau = table["blowup.tau"].as_double();
    if (has("blowup.rho0")) cfg.rho0 = table["blowup.rho0"].as_double();
    if (has("output.path")) cfg.out = table["output.path"].as_string();
    if (has("output.format")) cfg.format = table["output.format"].as_string();
}

void write_output(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) return;
    std::ofstream os(cfg.out);
    if (!os) throw std::invalid_argument("cannot open output file: " + cfg.out);
    os << text;
}

double default_rho0(const gts::GrowthParams& gp) {
    // Just inside the admissible interval (0, min(1, psi root)).
    return 0.99 * std::min(1.0, gts::psi_root(gp));
}

int cmd_solve(const RunConfig& cfg) {
    gts::Problem problem = gts::make_problem(cfg.problem, cfg.problem_params);
    std::vector<double> nodes = cfg.nodes;
    if (nodes.empty()) {
        if (cfg.steps < 1 || !(cfg.horizon > 0.0))
            throw std::invalid_argument("solve: need steps >= 1 and horizon > 0");
        for (int m = 0; m <= cfg.steps; ++m) nodes.push_back(cfg.horizon * m / cfg.steps);
    }
    std::vector<int> degrees(nodes.size() - 1, cfg.degree);
    gts::Scheme scheme = parse_scheme(cfg.scheme);
    gts::Trajectory traj = gts::solve_mesh(problem, nodes, degrees, scheme, cfg.solver);

    double linf_err = 0.0;
    std::cout << "m,t,";
    for (int d = 0; d < problem.dim; ++d) std::cout << "u" << d << (d + 1 < problem.dim ? "," : "");
    if (problem.exact) std::cout << ",error";
    std::cout << "\n";
    for (size_t m = 0; m < nodes.size(); ++m) {
        gts::Vec v = m == 0 ? problem.u0 : traj.pieces[m - 1].right_value;
        std::cout << m << "," << gts::fmt17(nodes[m]);
        for (int d = 0; d < v.size(); ++d) std::cout << "," << gts::fmt17(v[d]);
        if (problem.exact) {
            double err = (v - problem.exact(nodes[m])).norm();
            std::cout << "," << gts::fmt17(err);
        }
        std::cout << "\n";
    }
    if (problem.exact) {
        for (const auto& piece : traj.pieces)
            for (double x : gts::chebyshev_samples(piece.traj.degree())) {
                double t = piece.traj.map().to_time(x);
                linf_err = std::max(linf_err, (piece.traj.eval_reference(x) - problem.exact(t)).norm());
            }
        std::cout << "# Linf_error_estimate = " << gts::fmt17(linf_err) << "\n";
    }

    if (!cfg.out.empty()) {
        if (cfg.format == "json") {
            write_output(cfg, gts::to_json(traj).dump(2) + "\n");
        } else {
            std::ostringstream ss;
            gts::write_trajectory_csv(ss, traj, problem);
            write_output(cfg, ss.str());
        }
    }
    return 0;
}

int cmd_blowup(const RunConfig& cfg) {
    gts::Problem problem = gts::make_problem(cfg.problem, cfg.problem_params);
    if (!problem.growth)
        throw std::invalid_argument("blowup: problem '" + cfg.problem + "' lacks growth metadata");
    const gts::GrowthParams& gp = *problem.growth;
    gts::Scheme scheme = parse_scheme(cfg.scheme);
    gts::StepMode mode = parse_mode(cfg.mode);
    double rho0 = cfg.rho0 > 0.0 ? cfg.rho0 : default_rho0(gp);
    gts::StepPlan plan = gts::make_plan(mode, cfg.rho, scheme, rho0);
    gts::BlowupResult res =
        gts::blowup_run(problem, gp, plan, scheme, cfg.degree, cfg.solver, cfg.tau);

    std::cout << "T_estimate = " << gts::fmt17(res.t_infinity_estimate) << "\n"
              << "steps = " << res.steps << "\n"
              << "stopped_by = "
              << (res.stopped_by == gts::StopReason::saturation ? "saturation" : "tolerance")
              << "\n";
    if (problem.t_blowup_exact)
        std::cout << "abs_error = "
                  << gts::fmt17(std::abs(res.t_infinity_estimate - *problem.t_blowup_exact))
                  << "\n";
    if (res.diagnostics)
        std::cout << "C0 = " << gts::fmt17(res.diagnostics->C0) << "\n"
                  << "C1 = " << gts::fmt17(res.diagnostics->C1) << "\n"
                  << "discrete_upper_bound = " << gts::fmt17(res.diagnostics->discrete_upper_bound)
                  << "\n";

    if (!cfg.out.empty()) {
        if (cfg.format == "json") {
            write_output(cfg, gts::to_json(res).dump(2) + "\n");
        } else {
            std::ostringstream ss;
            gts::write_blowup_csv(ss, res);
            write_output(cfg, ss.str());
        }
    }
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    gts::Problem problem = gts::make_problem(cfg.problem, cfg.problem_params);
    if (!problem.growth)
        throw std::invalid_argument("sweep: problem '" + cfg.problem + "' lacks growth metadata");
    std::vector<double> rhos = cfg.rho_list.empty() ? gts::rho_grid() : cfg.rho_list;
    std::vector<gts::Scheme> schemes;
    for (const std::string& s : cfg.schemes) schemes.push_back(parse_scheme(s));
    gts::StepMode mode = parse_mode(cfg.mode);
    double rho0 = cfg.rho0 > 0.0 ? cfg.rho0 : default_rho0(*problem.growth);
    gts::SweepResult sweep = gts::run_sweep(problem, rhos, schemes, cfg.degrees, mode, cfg.solver,
                                            cfg.tau, rho0, cfg.jobs);

    std::ostringstream ss;
    gts::write_sweep_csv(ss, sweep);
    std::cout << ss.str();
    for (const gts::SweepSlope& sl : sweep.slopes)
        std::cout << "# slope " << gts::scheme_name(sl.scheme) << " r=" << sl.degree << " : "
                  << (sl.slope ? gts::fmt17(*sl.slope) : std::string("undefined")) << "\n";
    write_output(cfg, ss.str());
    bool any_failed = false;
    for (const auto& c : sweep.cells) any_failed |= c.failed;
    return any_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galerkin time stepping solver and blow-up time estimator"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::string schemes_csv, degrees_csv;
    std::map<std::string, double> flag_params;

    auto add_shared = [&](CLI::App* sub) {
        sub->add_option("--problem", cfg.problem, "Problem name (example54|linear|powerlaw)");
        sub->add_option("--scheme", cfg.scheme, "Time stepping scheme (cg|dg)");
        sub->add_option("--degree", cfg.degree, "Local polynomial degree r");
        sub->add_option("--config", config_path, "TOML config file; flags override it");
        sub->add_option("--out", cfg.out, "Output artifact path");
        sub->add_option("--format", cfg.format, "Output format (csv|json)");
        sub->add_option("--lambda", flag_params["lambda"], "Problem parameter lambda");
        sub->add_option("--alpha", flag_params["alpha"], "Problem parameter alpha");
        sub->add_option("--beta", flag_params["beta"], "Problem parameter beta");
        sub->add_option("--u0", flag_params["u0"], "Scalar initial value");
        sub->add_option("--fp-tolerance", cfg.solver.fp_tolerance, "Picard stopping tolerance");
        sub->add_option("--fp-max-iters", cfg.solver.fp_max_iters, "Picard iteration cap");
        sub->add_option("--quad-nodes", cfg.solver.quad_nodes,
                        "Quadrature nodes for nonlinear integrands (-1 = auto, r+4)");
    };
    auto add_blowup_flags = [&](CLI::App* sub) {
        sub->add_option("--rho", cfg.rho, "Step-size parameter rho");
        sub->add_option("--mode", cfg.mode, "Step rule (theoretical|empirical)");
        sub->add_option("--tau", cfg.tau, "Stopping tolerance tau (default 0: float saturation)");
        sub->add_option("--rho0", cfg.rho0, "Reference rho_0 for the theoretical constants");
    };

    CLI::App* solve = app.add_subcommand("solve", "Solve on a fixed mesh");
    add_shared(solve);
    solve->add_option("--steps", cfg.steps, "Number of uniform time steps");
    solve->add_option("--horizon", cfg.horizon, "Final time of the uniform mesh");
    solve->add_option("--nodes", cfg.nodes, "Explicit time nodes")->expected(-1);

    CLI::App* blowup = app.add_subcommand("blowup", "Estimate the blow-up time");
    add_shared(blowup);
    add_blowup_flags(blowup);

    CLI::App* sweep = app.add_subcommand("sweep", "rho-sweep convergence study");
    add_shared(sweep);
    add_blowup_flags(sweep);
    sweep->add_option("--rho-list", cfg.rho_list, "List of rho values")->expected(-1);
    sweep->add_option("--schemes", schemes_csv, "Comma-separated schemes (default cg,dg)");
    sweep->add_option("--degrees", degrees_csv, "Comma-separated degrees (default 0,1)");
    sweep->add_option("--jobs", cfg.jobs, "Max parallel sweep cells (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        // Precedence: defaults < config file < flags. CLI11 already wrote flag
        // values into cfg, so re-apply: load the file into a fresh config, then
        // overlay every flag the user actually passed.
        if (!config_path.empty()) {
            RunConfig file_cfg;
            apply_config_file(file_cfg, config_path);
            CLI::App* sub = app.get_subcommands().front();
            auto passed = [&](const std::string& flag) { return sub->count(flag) > 0; };
            if (!passed("--problem")) cfg.problem = file_cfg.problem;
            if (!passed("--scheme")) cfg.scheme = file_cfg.scheme;
            if (!passed("--degree")) cfg.degree = file_cfg.degree;
            if (!passed("--out") && !file_cfg.out.empty()) cfg.out = file_cfg.out;
            if (!passed("--format")) cfg.format = file_cfg.format;
            if (!passed("--fp-tolerance")) cfg.solver.fp_tolerance = file_cfg.solver.fp_tolerance;
            if (!passed("--fp-max-iters")) cfg.solver.fp_max_iters = file_cfg.solver.fp_max_iters;
            if (!passed("--quad-nodes")) cfg.solver.quad_nodes = file_cfg.solver.quad_nodes;
            if (sub->get_name() == "solve") {
                if (!passed("--steps")) cfg.steps = file_cfg.steps;
                if (!passed("--horizon")) cfg.horizon = file_cfg.horizon;
                if (!passed("--nodes")) cfg.nodes = file_cfg.nodes;
            } else {
                if (!passed("--rho")) cfg.rho = file_cfg.rho;
                if (!passed("--mode")) cfg.mode = file_cfg.mode;
                if (!passed("--tau")) cfg.tau = file_cfg.tau;
                if (!passed("--rho0")) cfg.rho0 = file_cfg.rho0;
                if (sub->get_name() == "sweep" && !passed("--rho-list"))
                    cfg.rho_list = file_cfg.rho_list;
            }
            for (const auto& [key, value] : file_cfg.problem_params)
                if (!flag_params.count(key) ||
                    !passed("--" + key))
                    cfg.problem_params[key] = value;
        }
        CLI::App* sub = app.get_subcommands().front();
        for (const auto& [key, value] : flag_params)
            if (sub->count("--" + key) > 0) cfg.problem_params[key] = value;
        if (!schemes_csv.empty()) {
            cfg.schemes.clear();
            std::stringstream ss(schemes_csv);
            std::string item;
            while (std::getline(ss, item, ',')) cfg.schemes.push_back(item);
        }
        if (!degrees_csv.empty()) {
            cfg.degrees.clear();
            std::stringstream ss(degrees_csv);
            std::string item;
            while (std::getline(ss, item, ',')) cfg.degrees.push_back(std::stoi(item));
        }
        if (cfg.format != "csv" && cfg.format != "json")
            throw std::invalid_argument("format must be csv or json");

        if (sub->get_name() == "solve") return cmd_solve(cfg);
        if (sub->get_name() == "blowup") return cmd_blowup(cfg);
        return cmd_sweep(cfg);
    } catch (const gts::NonConvergence& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
