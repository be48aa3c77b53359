#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sadg/roadmap.hpp"

namespace sadg {

struct PlanTuple {
    int vertex = -1;
    int time = 0;  // plan step
    friend bool operator==(const PlanTuple&, const PlanTuple&) = default;
};

/// One route per agent, aligned with Scenario::agents. Steps advance by
/// exactly one per tuple; waits are explicit tuples.
struct MapfPlan {
    std::vector<std::vector<PlanTuple>> paths;

    int agent_count() const { return static_cast<int>(paths.size()); }
    int makespan() const;
};

enum class ViolationKind {
    BadSequence,      // empty path, nonzero start step, non-contiguous times
    NonAdjacentMove,
    EndpointMismatch,
    VertexConflict,
    SwapConflict,
};

struct Violation {
    ViolationKind kind;
    int agent_a = -1;
    int agent_b = -1;
    int time = -1;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

/// Checks the plan against the validity conditions: contiguous unit steps,
/// moves along roadmap edges, start/goal endpoints, no two agents at one
/// vertex at the same step, no edge traversed in opposite directions in the
/// same step. Agents rest at their goals after their last tuple, so later
/// visits to an occupied goal are vertex conflicts too.
ValidationReport validate_plan(const MapfPlan& plan, const Scenario& sc);

struct PlannerLimits {
    long node_budget_per_agent = 200000;
    int max_restarts = 10;
};

struct PlanFailure {
    int blocking_agent = -1;
    std::string reason;
};

/// Prioritized space-time A*: agents planned in `order`; earlier agents'
/// trajectories and goal-rest positions are dynamic obstacles.
std::optional<MapfPlan> plan_prioritized(const Scenario& sc, const std::vector<int>& order,
                                         const PlannerLimits& limits = {},
                                         PlanFailure* failure = nullptr);

/// Identity priority order first, then seeded shuffles, until a valid plan
/// with an acyclic dependency graph is found or restarts run out.
std::optional<MapfPlan> plan_with_restarts(const Scenario& sc, std::uint64_t seed,
                                           const PlannerLimits& limits = {},
                                           PlanFailure* failure = nullptr);

/// True iff the dependency graph compiled from this plan is acyclic.
bool check_initial_acyclicity(const MapfPlan& plan, const Scenario& sc);

MapfPlan parse_plan(const std::string& text, const Scenario& sc,
                    const std::string& origin = "<string>");
std::string plan_to_json(const MapfPlan& plan, const Scenario& sc);
MapfPlan load_plan(const std::string& path, const Scenario& sc);
void save_plan(const MapfPlan& plan, const Scenario& sc, const std::string& path);

}  // namespace sadg
