#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sadg/controller.hpp"

namespace sadg {

struct ScriptedStall {
    int agent = -1;
    double from = 0.0;
    double until = 0.0;
};

struct RunOptions {
    double tick = 0.1;              // seconds
    double makespan_factor = 10.0;  // deadlock bound: factor x nominal makespan
    std::optional<double> horizon_override;
    std::optional<double> period_override;
    std::optional<std::uint64_t> delay_seed;  // defaults to scenario seed
    long node_budget = 100000;
    std::vector<ScriptedStall> scripted_stalls;  // fixture replay hook
    bool keep_log = true;
};

struct CollisionIncident {
    int agent_a = -1;
    int agent_b = -1;
    Vec2 pos_a, pos_b;
    double t = 0.0;
    std::string describe() const;
};

struct EpisodeResult {
    bool completed = false;
    bool deadlock_suspected = false;  // tick bound tripped
    std::optional<CollisionIncident> collision;
    std::vector<double> completion_times;  // per agent, seconds
    double sum_completion = 0.0;
    double makespan = 0.0;
    double nominal_makespan = 0.0;  // delay-free fleet makespan
    long ticks = 0;
    int solve_count = 0;
    std::vector<double> solve_wall_times;  // seconds, non-deterministic
    std::vector<BinaryVector> b_history;   // active selection after each solve
    EventLog log;
    std::string failure_detail;

    bool ok() const { return completed && !collision; }
};

/// Geometric overlap check on disc footprints; consults only the poses, not
/// the dependency graph.
std::optional<CollisionIncident> collision_monitor(const std::vector<Vec2>& poses,
                                                   double footprint_radius, double t);

/// Ticks the fleet at fixed steps: granted vertices execute as
/// rotate-translate motion programs at (possibly delay-modified) speed,
/// status events feed the controller, which re-publishes grants. Ends when
/// every agent finished or the tick bound trips.
EpisodeResult run_episode(const Scenario& sc, const MapfPlan& plan, Mode mode,
                          const RunOptions& opt = {});

}  // namespace sadg
