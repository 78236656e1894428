#pragma once

// The rho-sweep convergence study: run the blow-up marching loop for a grid of
// (rho, scheme, degree) cells and fit least-squares slopes of log(abs_error)
// versus log(rho) per (scheme, degree).

#include <atomic>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "gts/blowup.hpp"
#include "gts/serialize.hpp"

namespace gts {

struct SweepCell {
    double rho = 0.0;
    Scheme scheme = Scheme::cg;
    int degree = 0;
    int steps = 0;
    double t_estimate = 0.0;
    std::optional<double> abs_error;  // set when the exact blow-up time is known
    bool failed = false;
    std::string failure;
};

struct SweepSlope {
    Scheme scheme = Scheme::cg;
    int degree = 0;
    std::optional<double> slope;  // undefined with fewer than two valid cells
};

struct SweepResult {
    std::vector<SweepCell> cells;   // ordered by (rho, scheme, degree)
    std::vector<SweepSlope> slopes;
};

/// Default study grid: rho = 2^{-p/2}, p = p_min..p_max.
inline std::vector<double> rho_grid(int p_min = 4, int p_max = 10) {
    std::vector<double> rhos;
    for (int p = p_min; p <= p_max; ++p) rhos.push_back(std::pow(2.0, -0.5 * p));
    return rhos;
}

inline SweepResult run_sweep(const Problem& problem, const std::vector<double>& rhos,
                             const std::vector<Scheme>& schemes, const std::vector<int>& degrees,
                             StepMode mode, const SolverConfig& cfg, double tau = 0.0,
                             double rho_0 = 0.0, int max_jobs = 0) {
    if (rhos.empty() || degrees.empty() || schemes.empty())
        throw std::invalid_argument("run_sweep: rho, scheme and degree lists must be nonempty");
    if (!problem.growth) throw std::invalid_argument("run_sweep: problem lacks growth metadata");
    const GrowthParams& gp = *problem.growth;

    struct Task {
        double rho;
        Scheme scheme;
        int degree;
    };
    std::vector<Task> tasks;
    for (double rho : rhos)
        for (Scheme s : schemes)
            for (int r : degrees) tasks.push_back({rho, s, r});

    auto run_cell = [&](const Task& task) {
        SweepCell cell;
        cell.rho = task.rho;
        cell.scheme = task.scheme;
        cell.degree = task.degree;
        try {
            StepPlan plan = make_plan(mode, task.rho, task.scheme, rho_0);
            BlowupResult res = blowup_run(problem, gp, plan, task.scheme, task.degree, cfg, tau);
            cell.steps = res.steps;
            cell.t_estimate = res.t_infinity_estimate;
            if (problem.t_blowup_exact)
                cell.abs_error = std::abs(res.t_infinity_estimate - *problem.t_blowup_exact);
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.failure = e.what();
        }
        return cell;
    };

    unsigned jobs = std::thread::hardware_concurrency();
    if (jobs == 0) jobs = 1;
    if (max_jobs > 0) jobs = std::min<unsigned>(jobs, max_jobs);

    SweepResult result;
    result.cells.resize(tasks.size());
    if (jobs <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i) result.cells[i] = run_cell(tasks[i]);
    } else {
        // Cells are independent; each worker claims distinct indices, so the
        // result order matches the task order regardless of completion order.
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                result.cells[i] = run_cell(tasks[i]);
        };
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (Scheme s : schemes) {
        for (int r : degrees) {
            std::vector<double> xs, ys;
            for (const SweepCell& cell : result.cells)
                if (!cell.failed && cell.scheme == s && cell.degree == r && cell.abs_error &&
                    *cell.abs_error > 0.0) {
                    xs.push_back(std::log(cell.rho));
                    ys.push_back(std::log(*cell.abs_error));
                }
            SweepSlope sl{s, r, std::nullopt};
            if (xs.size() >= 2) {
                double n = static_cast<double>(xs.size());
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                for (size_t i = 0; i < xs.size(); ++i) {
                    sx += xs[i];
                    sy += ys[i];
                    sxx += xs[i] * xs[i];
                    sxy += xs[i] * ys[i];
                }
                sl.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            }
            result.slopes.push_back(sl);
        }
    }
    return result;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
    os << "rho,scheme,r,steps,T_estimate,abs_error\n";
    for (const SweepCell& c : sweep.cells) {
        os << fmt17(c.rho) << "," << scheme_name(c.scheme) << "," << c.degree << ",";
        if (c.failed)
            os << "failed,failed,failed";
        else {
            os << c.steps << "," << fmt17(c.t_estimate) << ","
               << (c.abs_error ? fmt17(*c.abs_error) : std::string("nan"));
        }
        os << "\n";
    }
}

}  // namespace gts
