#pragma once

#include <vector>

#include "sadg/seadg.hpp"

namespace sadg {

/// Margin realizing the strict inequalities of the timing constraints;
/// far below any physical timescale in this system.
inline constexpr double kScheduleEpsilon = 1e-3;

/// Completion-time estimates: delta(v) is T_est if staged, mu * T_est if
/// in-progress, 0 if completed.
struct DurationModel {
    std::vector<std::vector<double>> t_est;  // per agent, per index, seconds
    std::vector<std::vector<double>> mu;     // fraction remaining, in [0,1]

    double delta(const SeAdgVertex& v) const {
        switch (v.status) {
            case Status::Completed: return 0.0;
            case Status::InProgress: return mu[v.agent][v.index] * t_est[v.agent][v.index];
            case Status::Staged: break;
        }
        return t_est[v.agent][v.index];
    }

    /// Planned tuple span times step duration; mu all 1.
    static DurationModel nominal(const SeAdg& g, double step_duration);
};

/// Earliest start/goal estimates per vertex; completed vertices and agents
/// out of scope sit at `now`.
struct Schedule {
    bool cyclic = false;
    double cost = 0.0;                     // sum of terminal goal times in scope
    std::vector<std::vector<double>> t_s;  // per agent, per index
    std::vector<std::vector<double>> t_g;
    std::vector<double> terminal;          // per agent

    double goal_time(VertexRef v) const { return t_g[v.agent][v.index]; }
};

}  // namespace sadg
