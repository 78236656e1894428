#pragma once

// JSON and CSV serialization for trajectories and blow-up results. CSV output
// is deterministic: fixed column order, 17-significant-digit floats.

#include <cstdio>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "gts/blowup.hpp"
#include "gts/stepping.hpp"

namespace gts {

using json = nlohmann::json;

inline std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline json to_json(const PolyTraj& p) {
    json coeffs = json::array();
    for (int i = 0; i < p.coeffs().rows(); ++i)
        for (int j = 0; j < p.coeffs().cols(); ++j) coeffs.push_back(p.coeffs()(i, j));
    return json{{"t_start", p.map().t_start},
                {"k", p.map().k},
                {"degree", p.degree()},
                {"coeffs", coeffs}};
}

inline json to_json(const Trajectory& traj) {
    json pieces = json::array();
    for (const auto& s : traj.pieces) pieces.push_back(to_json(s.traj));
    return json{{"scheme", scheme_name(traj.scheme)},
                {"nodes", traj.nodes},
                {"degrees", traj.degrees},
                {"pieces", pieces}};
}

inline json to_json(const BlowupResult& r) {
    json j{{"t_infinity_estimate", r.t_infinity_estimate},
           {"steps", r.steps},
           {"norms", r.norms},
           {"step_sizes", r.step_sizes},
           {"stopped_by", r.stopped_by == StopReason::saturation ? "saturation" : "tolerance"},
           {"continuous_upper_bound", r.continuous_bound},
           {"geo_violations", r.geo_violations},
           {"ball_violations", r.ball_violations}};
    if (r.diagnostics)
        j["diagnostics"] = json{{"C0", r.diagnostics->C0},
                                {"C1", r.diagnostics->C1},
                                {"discrete_upper_bound", r.diagnostics->discrete_upper_bound}};
    return j;
}

/// Trajectory sampled at a fixed number of points per interval.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Problem& problem,
                                 int samples_per_interval = 8) {
    os << "t";
    for (int d = 0; d < problem.dim; ++d) os << ",u" << d;
    if (problem.exact) os << ",error";
    os << "\n";
    for (size_t m = 0; m < traj.pieces.size(); ++m) {
        const PolyTraj& p = traj.pieces[m].traj;
        int s = samples_per_interval;
        for (int j = (m == 0 ? 0 : 1); j <= s; ++j) {
            double xhat = -1.0 + 2.0 * j / s;
            double t = p.map().to_time(xhat);
            Vec v = p.eval_reference(xhat);
            os << fmt17(t);
            for (int d = 0; d < v.size(); ++d) os << "," << fmt17(v[d]);
            if (problem.exact) os << "," << fmt17((v - problem.exact(t)).norm());
            os << "\n";
        }
    }
}

inline void write_blowup_csv(std::ostream& os, const BlowupResult& r) {
    os << "m,t_m,k_m,norm\n";
    double t = 0.0;
    for (int m = 0; m < r.steps; ++m) {
        t += r.step_sizes[m];
        os << (m + 1) << "," << fmt17(t) << "," << fmt17(r.step_sizes[m]) << ","
           << fmt17(r.norms[m]) << "\n";
    }
}

}  // namespace gts
