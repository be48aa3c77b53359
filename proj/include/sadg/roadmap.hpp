#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sadg {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Undirected spatial graph the AGVs navigate. Vertices are dense indices;
/// the labels from the scenario file are kept for I/O round-trips.
struct Roadmap {
    std::vector<std::string> labels;
    std::vector<Vec2> coords;
    std::vector<std::pair<int, int>> edges;
    double footprint_radius = 0.3;

    std::vector<std::vector<int>> adjacency;

    int vertex_count() const { return static_cast<int>(coords.size()); }
    bool adjacent(int a, int b) const;
    int index_of(const std::string& label) const;  // -1 if unknown

    /// Builds the adjacency lists and checks the structural invariants
    /// (unique labels, edges reference existing vertices, no self-loops,
    /// positive footprint radius). Throws std::invalid_argument.
    void finalize();
};

struct AgentTask {
    std::string label;
    int start = -1;
    int goal = -1;
};

enum class DelayVariant { None, StallSubset, VelocitySampling };

struct VelocityComponent {
    double weight = 1.0;
    double mean = 1.0;
    double stddev = 0.05;
};

struct DelayModel {
    DelayVariant variant = DelayVariant::None;
    // stall-subset: every `period` seconds a random ceil(fraction*N) agents
    // are stopped for the next `period` seconds
    double period = 10.0;
    double fraction = 0.2;
    // velocity-sampling: per-vertex normalized velocity factor drawn from a
    // gaussian mixture, clamped below at min_velocity
    std::vector<VelocityComponent> components;
    double min_velocity = 0.05;

    static DelayModel none();
    static DelayModel stall(double period, double fraction);
    static DelayModel velocity_default();
};

struct Scenario {
    Roadmap roadmap;
    std::vector<AgentTask> agents;
    double nominal_speed = 1.0;    // m/s
    double rotation_speed = 3.0;   // rad/s
    double control_period = 2.0;   // h, seconds
    double horizon = 5.0;          // H, seconds
    DelayModel delay_model;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;

    int agent_count() const { return static_cast<int>(agents.size()); }
    /// Seconds per plan step (unit-length edges at nominal speed).
    double step_duration() const { return 1.0 / nominal_speed; }

    /// Checks agent invariants (distinct starts, distinct goals, vertices
    /// exist). Records the |V| <= N condition as a warning, not an error.
    void validate();
};

/// True iff disc footprints of radius r.footprint_radius centered at the two
/// vertices do not intersect. Symmetric; false for a == b.
bool spatially_exclusive(int a, int b, const Roadmap& r);

Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
std::string scenario_to_json(const Scenario& sc);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& sc, const std::string& path);

}  // namespace sadg
