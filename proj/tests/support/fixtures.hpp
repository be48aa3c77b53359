#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles here
// deliberately use the naive formulations (literal quadruple loop,
// Bellman-Ford over big-M rows) so they stay independent of the library's
// implementation path.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "sadg/maps.hpp"
#include "sadg/optimizer.hpp"
#include "sadg/sadg.hpp"

namespace fixtures {

using namespace sadg;

inline Roadmap make_roadmap(const std::vector<Vec2>& coords,
                            const std::vector<std::pair<int, int>>& edges, double radius = 0.3) {
    Roadmap rm;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        rm.labels.push_back(std::to_string(i));
        rm.coords.push_back(coords[i]);
    }
    rm.edges = edges;
    rm.footprint_radius = radius;
    rm.finalize();
    return rm;
}

inline Roadmap grid_roadmap(int w, int h, double radius = 0.3) {
    Roadmap rm;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            rm.labels.push_back(std::to_string(y * w + x));
            rm.coords.push_back({static_cast<double>(x), static_cast<double>(y)});
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (x + 1 < w) rm.edges.emplace_back(y * w + x, y * w + x + 1);
            if (y + 1 < h) rm.edges.emplace_back(y * w + x, (y + 1) * w + x);
        }
    rm.footprint_radius = radius;
    rm.finalize();
    return rm;
}

/// Paths as vertex sequences, one step per entry; waits are repeats.
inline MapfPlan plan_from_paths(const std::vector<std::vector<int>>& paths) {
    MapfPlan plan;
    for (const auto& p : paths) {
        std::vector<PlanTuple> tuples;
        for (std::size_t t = 0; t < p.size(); ++t)
            tuples.push_back({p[t], static_cast<int>(t)});
        plan.paths.push_back(std::move(tuples));
    }
    return plan;
}

/// Scenario wrapping a roadmap and a plan (agents derived from endpoints).
inline Scenario scenario_around(const Roadmap& rm, const MapfPlan& plan) {
    Scenario sc;
    sc.roadmap = rm;
    for (int a = 0; a < plan.agent_count(); ++a)
        sc.agents.push_back({"agv" + std::to_string(a), plan.paths[a].front().vertex,
                             plan.paths[a].back().vertex});
    sc.validate();
    return sc;
}

// --- canonical fixtures -----------------------------------------------------

/// 5x5 grid, four routes crossing a shared middle region with staggered
/// times; valid and initially acyclic.
struct Crossing4 {
    Roadmap roadmap = grid_roadmap(5, 5);
    MapfPlan plan;
    Crossing4() {
        auto id = [](int x, int y) { return y * 5 + x; };
        plan = plan_from_paths({
            {id(0, 2), id(1, 2), id(2, 2), id(3, 2), id(4, 2)},
            {id(2, 0), id(2, 0), id(2, 1), id(2, 2), id(2, 3), id(2, 4)},
            {id(1, 4), id(1, 3), id(1, 2), id(1, 1), id(1, 0)},
            {id(4, 3), id(3, 3), id(2, 3), id(1, 3), id(0, 3)},
        });
    }
};

/// Two agents through one contested vertex: A left-to-right on row 1, B
/// bottom-to-top on column 2, B planned through first. Exactly one
/// switchable pair.
struct PlusCrossing {
    Roadmap roadmap;
    MapfPlan plan;
    PlusCrossing() {
        roadmap = make_roadmap({{0, 1}, {1, 1}, {2, 1}, {3, 1}, {2, 0}, {2, 2}},
                               {{0, 1}, {1, 2}, {2, 3}, {4, 2}, {2, 5}});
        plan = plan_from_paths({{0, 1, 2, 3}, {4, 2, 5}});
    }
};

/// Four agents rotating around a 4-cycle in lockstep; valid but compiles to
/// a cyclic dependency graph.
struct Rotation4 {
    Roadmap roadmap = make_roadmap({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                                   {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    MapfPlan plan = plan_from_paths({{0, 1}, {1, 2}, {2, 3}, {3, 0}});
};

/// Line 0..5 at y=0; B leads A through the corridor in the same direction.
/// Three switchable pairs forming one same-direction group.
struct SameDirCorridor {
    Roadmap roadmap;
    MapfPlan plan;
    SameDirCorridor() {
        std::vector<Vec2> coords;
        std::vector<std::pair<int, int>> edges;
        for (int x = 0; x <= 6; ++x) {
            coords.push_back({static_cast<double>(x), 0.0});
            if (x) edges.emplace_back(x - 1, x);
        }
        roadmap = make_roadmap(coords, edges);
        plan = plan_from_paths({{0, 1, 2, 3, 4, 5}, {1, 2, 3, 4, 5, 6}});
    }
};

/// Corridor traversed in opposite directions, time-separated via spur
/// vertices; three pairs forming one opposing group.
struct HeadOnCorridor {
    Roadmap roadmap;
    MapfPlan plan;
    HeadOnCorridor() {
        // 0..4: line y=0; 5=(0,1), 6=(4,1), 7=(1,1)
        roadmap = make_roadmap(
            {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {0, 1}, {4, 1}, {1, 1}},
            {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 5}, {4, 6}, {1, 7}});
        // B right-to-left first, A enters from the spur afterwards.
        plan = plan_from_paths({
            {7, 7, 7, 7, 1, 2, 3, 4, 6},  // A
            {4, 3, 2, 1, 0, 5},           // B
        });
    }
};

/// Crossings where the planned-first agent (odd ids) still has a long
/// approach to the contested vertex while the crossing agent (even ids)
/// waits right next to it. Stalling the leader makes switching strictly
/// profitable for the sum objective. One switchable group per crossing.
struct DelayedLeaderCrossings {
    Roadmap roadmap;
    MapfPlan plan;
    explicit DelayedLeaderCrossings(int crossings = 1) {
        std::vector<Vec2> coords;
        std::vector<std::pair<int, int>> edges;
        std::vector<std::vector<int>> paths;
        for (int c = 0; c < crossings; ++c) {
            double off = 12.0 * c;
            int base = static_cast<int>(coords.size());
            for (int x = 0; x <= 5; ++x) {  // row corridor, ids base+0..5
                coords.push_back({off + x, 1.0});
                if (x) edges.emplace_back(base + x - 1, base + x);
            }
            // column approach: ids base+6..9 = (2,-2),(2,-1),(2,0),(2,2)
            coords.push_back({off + 2, -2.0});
            coords.push_back({off + 2, -1.0});
            coords.push_back({off + 2, 0.0});
            coords.push_back({off + 2, 2.0});
            edges.emplace_back(base + 6, base + 7);
            edges.emplace_back(base + 7, base + 8);
            edges.emplace_back(base + 8, base + 2);  // (2,0)-(2,1)
            edges.emplace_back(base + 2, base + 9);  // (2,1)-(2,2)
            // waiter: reaches the crossing early, waits for the leader
            paths.push_back({base + 0, base + 1, base + 1, base + 1, base + 2, base + 3,
                             base + 4, base + 5});
            // leader: planned through first, but has a long approach
            paths.push_back({base + 6, base + 7, base + 8, base + 2, base + 9});
        }
        roadmap = make_roadmap(coords, edges);
        plan = plan_from_paths(paths);
    }
};

/// Corridor with one siding: head-on agents can resolve by pulling in.
struct SidingCorridor {
    Roadmap roadmap;
    Scenario scenario;
    SidingCorridor() {
        // 0..4: line, 5: siding above vertex 2
        roadmap = make_roadmap({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {2, 1}},
                               {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}});
        scenario.roadmap = roadmap;
        scenario.agents = {{"a", 0, 4}, {"b", 4, 0}};
        scenario.validate();
    }
};

// --- independent oracles ----------------------------------------------------

/// Literal stage-2 quadruple loop over all vertex pairs of different agents.
inline std::vector<AdgEdge> literal_stage2(const SeAdg& g) {
    std::vector<AdgEdge> out;
    for (int i = 0; i < g.agent_count(); ++i)
        for (int j = 0; j < g.agent_count(); ++j) {
            if (i == j) continue;
            for (const auto& vi : g.chains[i])
                for (const auto& vj : g.chains[j])
                    if (vi.start_vertex == vj.goal_vertex &&
                        vi.planned_goal_time <= vj.planned_goal_time)
                        out.push_back({vi.ref(), vj.ref(), true});
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// Bellman-Ford evaluation of the big-M row system for a fixed assignment:
/// every pair contributes both its forward and reverse row, one of them
/// deactivated by M. Returns +inf on positive cycles (infeasible).
inline double bigm_cost(const Sadg& s, const DurationModel& d, const BinaryVector& b, double now,
                        double eps, double big_m) {
    const SeAdg& sk = s.skeleton;
    const auto off = sk.chain_offsets();
    const int n = off.back();
    auto fid = [&](VertexRef v) { return off[v.agent] + v.index; };

    // variables: t_s = [0, n), t_g = [n, 2n)
    struct Row {
        int lhs, rhs;
        double c;
    };
    std::vector<Row> rows;
    for (int a = 0; a < sk.agent_count(); ++a)
        for (const auto& v : sk.chains[a]) {
            int id = fid(v.ref());
            rows.push_back({n + id, id, d.delta(v) + eps});  // t_g >= t_s + delta + eps
        }
    for (const auto& e : sk.edges) rows.push_back({fid(e.head), n + fid(e.tail), eps});
    for (const auto& p : s.pairs) {
        double bit = b.bits[p.group];
        rows.push_back({fid(p.forward.head), n + fid(p.forward.tail), eps - bit * big_m});
        rows.push_back({fid(p.reverse.head), n + fid(p.reverse.tail), eps - (1.0 - bit) * big_m});
    }

    std::vector<double> x(2 * n, now);
    bool changed = true;
    long rounds = 0;
    const long round_cap = 4 * n + 8;
    while (changed && rounds++ < round_cap) {
        changed = false;
        for (const auto& r : rows)
            if (x[r.rhs] + r.c > x[r.lhs]) {
                x[r.lhs] = x[r.rhs] + r.c;
                changed = true;
            }
    }
    if (changed) return std::numeric_limits<double>::infinity();
    double cost = 0.0;
    for (int a = 0; a < sk.agent_count(); ++a)
        if (!sk.chains[a].empty()) cost += x[n + fid({a, static_cast<int>(sk.chains[a].size()) - 1})];
    return cost;
}

/// Synthetic dependency graph: each vertex its own agent, arbitrary edges.
inline SeAdg synthetic_graph(int vertices, const std::vector<std::pair<int, int>>& edges) {
    SeAdg g;
    g.chains.resize(vertices);
    for (int i = 0; i < vertices; ++i) {
        SeAdgVertex v;
        v.agent = i;
        v.index = 0;
        v.start_vertex = i;
        v.goal_vertex = i;
        g.chains[i].push_back(v);
    }
    for (auto [a, b] : edges) g.edges.push_back({{a, 0}, {b, 0}, true});
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

/// Random mid-execution state: per agent a completed prefix, optionally an
/// in-progress front with a random remaining fraction. Statuses land on the
/// skeleton; durations get per-agent slowdowns.
inline DurationModel randomize_execution_state(Sadg& s, double step_duration,
                                               std::mt19937_64& rng) {
    DurationModel d = DurationModel::nominal(s.skeleton, step_duration);
    for (int a = 0; a < s.skeleton.agent_count(); ++a) {
        auto& chain = s.skeleton.chains[a];
        if (chain.empty()) continue;
        int done = static_cast<int>(rng() % (chain.size() + 1));
        for (int i = 0; i < done; ++i) chain[i].status = Status::Completed;
        if (done < static_cast<int>(chain.size()) && rng() % 2) {
            chain[done].status = Status::InProgress;
            d.mu[a][done] = static_cast<double>(rng() % 100) / 100.0;
        }
        double slow = 1.0 + static_cast<double>(rng() % 300) / 100.0;
        for (double& t : d.t_est[a]) t *= slow;
    }
    return d;
}

}  // namespace fixtures
