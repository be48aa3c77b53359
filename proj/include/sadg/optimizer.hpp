#pragma once

#include <string>
#include <vector>

#include "sadg/horizon.hpp"
#include "sadg/sadg.hpp"
#include "sadg/schedule.hpp"

namespace sadg {

struct SolveOptions {
    double now = 0.0;
    double epsilon = kScheduleEpsilon;
    long node_budget = 100000;
};

struct SolveResult {
    BinaryVector b_star;
    double cost = 0.0;            // sum of terminal goal times under b_star
    double incumbent_cost = 0.0;  // same instance evaluated at b_current
    Schedule schedule;
    long nodes_explored = 0;
    double wall_time = 0.0;  // seconds
    bool budget_exhausted = false;
    int flips = 0;
};

/// Topological forward pass assigning minimal start/goal times on the
/// realized graph: t_s >= now, chain and inter-edge precedences with the
/// strictness margin, t_g = t_s + delta + eps. Completed vertices impose no
/// constraints and sit at `now`. Returns cyclic=true when no topological
/// order exists. With `subset`, only subset vertices are scheduled and each
/// agent's terminal is its last subset vertex.
Schedule earliest_schedule(const SeAdg& g, const DurationModel& d, double now,
                           double epsilon = kScheduleEpsilon);
Schedule earliest_schedule_subset(const SeAdg& g, const DurationModel& d, double now,
                                  const HorizonSubset* subset,
                                  double epsilon = kScheduleEpsilon);

/// Depth-first branch-and-bound over the free groups (the rest keep
/// b_current). Bounds come from the partially-realized graph where
/// undecided groups contribute no inter edges; cyclic partial realizations
/// are pruned. The incumbent starts at b_current, so the returned cost never
/// exceeds the incumbent cost. Ties resolve toward fewest flips from
/// b_current, then the lexicographically smallest assignment. Throws
/// std::invalid_argument when realize(s, b_current) is cyclic.
SolveResult solve(const Sadg& s, const DurationModel& d, const BinaryVector& b_current,
                  const std::vector<int>& free_groups, const HorizonSubset* subset = nullptr,
                  const SolveOptions& opt = {});

/// Exhaustive enumeration with the same admissibility, evaluation and
/// tie-break rules as solve. Refuses more than 20 free groups.
SolveResult oracle_solve(const Sadg& s, const DurationModel& d, const BinaryVector& b_current,
                         const std::vector<int>& free_groups,
                         const HorizonSubset* subset = nullptr, const SolveOptions& opt = {});

/// LP-format-style dump of the instance (objective, precedence rows, big-M
/// rows with M = 1e6) for external cross-checks.
std::string write_milp(const Sadg& s, const DurationModel& d, const BinaryVector& b_current,
                       const std::vector<int>& free_groups, const HorizonSubset* subset = nullptr,
                       const SolveOptions& opt = {});

}  // namespace sadg
