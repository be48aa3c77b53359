#include "sadg/mapf.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "json_util.hpp"
#include "sadg/seadg.hpp"

namespace sadg {

using nlohmann::json;
using detail::label_of;
using detail::need;

int MapfPlan::makespan() const {
    int m = 0;
    for (const auto& p : paths)
        if (!p.empty()) m = std::max(m, p.back().time);
    return m;
}

std::string ValidationReport::summary() const {
    if (ok()) return "valid";
    std::ostringstream os;
    os << violations.size() << " violation(s):";
    for (const auto& v : violations) os << "\n  " << v.detail;
    return os.str();
}

namespace {

void add(ValidationReport& rep, ViolationKind kind, int a, int b, int t, std::string detail) {
    rep.violations.push_back({kind, a, b, t, std::move(detail)});
}

// Position with goal-rest extension: agents stay at their goal after the
// last tuple.
int position_at(const std::vector<PlanTuple>& path, int t) {
    if (path.empty()) return -1;
    if (t >= static_cast<int>(path.size())) return path.back().vertex;
    return path[t].vertex;
}

}  // namespace

ValidationReport validate_plan(const MapfPlan& plan, const Scenario& sc) {
    ValidationReport rep;
    const Roadmap& rm = sc.roadmap;
    if (plan.agent_count() != sc.agent_count()) {
        add(rep, ViolationKind::BadSequence, -1, -1, -1,
            "plan has " + std::to_string(plan.agent_count()) + " agents, scenario has " +
                std::to_string(sc.agent_count()));
        return rep;
    }

    bool sequences_ok = true;
    for (int a = 0; a < plan.agent_count(); ++a) {
        const auto& path = plan.paths[a];
        const std::string who = "agent " + sc.agents[a].label;
        if (path.empty()) {
            add(rep, ViolationKind::BadSequence, a, -1, -1, who + ": empty path");
            sequences_ok = false;
            continue;
        }
        if (path.front().time != 0) {
            add(rep, ViolationKind::BadSequence, a, -1, path.front().time,
                who + ": first tuple must be at step 0");
            sequences_ok = false;
        }
        for (std::size_t k = 1; k < path.size(); ++k) {
            if (path[k].time != path[k - 1].time + 1) {
                add(rep, ViolationKind::BadSequence, a, -1, path[k].time,
                    who + ": step times must increase by exactly one");
                sequences_ok = false;
            }
            int u = path[k - 1].vertex, v = path[k].vertex;
            if (u != v && !rm.adjacent(u, v))
                add(rep, ViolationKind::NonAdjacentMove, a, -1, path[k].time,
                    who + ": move " + rm.labels[u] + " -> " + rm.labels[v] +
                        " is not a roadmap edge");
        }
        if (path.front().vertex != sc.agents[a].start)
            add(rep, ViolationKind::EndpointMismatch, a, -1, 0,
                who + ": path starts at " + rm.labels[path.front().vertex] + ", expected " +
                    rm.labels[sc.agents[a].start]);
        if (path.back().vertex != sc.agents[a].goal)
            add(rep, ViolationKind::EndpointMismatch, a, -1, path.back().time,
                who + ": path ends at " + rm.labels[path.back().vertex] + ", expected " +
                    rm.labels[sc.agents[a].goal]);
    }
    if (!sequences_ok) return rep;  // conflict checks assume aligned steps

    const int horizon = plan.makespan();
    for (int t = 0; t <= horizon; ++t) {
        std::unordered_map<int, int> occupied;  // vertex -> agent
        for (int a = 0; a < plan.agent_count(); ++a) {
            int v = position_at(plan.paths[a], t);
            auto [it, fresh] = occupied.emplace(v, a);
            if (!fresh)
                add(rep, ViolationKind::VertexConflict, it->second, a, t,
                    "agents " + sc.agents[it->second].label + " and " + sc.agents[a].label +
                        " both at " + rm.labels[v] + " at step " + std::to_string(t));
        }
        if (t == horizon) break;
        std::unordered_map<long long, int> moves;  // directed edge -> agent
        const long long V = rm.vertex_count();
        for (int a = 0; a < plan.agent_count(); ++a) {
            int u = position_at(plan.paths[a], t), v = position_at(plan.paths[a], t + 1);
            if (u == v) continue;
            moves[u * V + v] = a;
            auto it = moves.find(v * V + u);
            if (it != moves.end() && it->second != a)
                add(rep, ViolationKind::SwapConflict, it->second, a, t,
                    "agents " + sc.agents[it->second].label + " and " + sc.agents[a].label +
                        " swap across " + rm.labels[v] + " -- " + rm.labels[u] + " at step " +
                        std::to_string(t));
        }
    }
    return rep;
}

namespace {

// Space-time A* for one agent against fixed higher-priority trajectories.
struct SearchContext {
    const Roadmap& rm;
    std::unordered_set<long long> vertex_blocked;  // t*V + v
    std::unordered_set<long long> edge_blocked;    // (t*V + u)*V + v, departing t
    std::vector<int> rest_from;                    // per vertex: blocked for all t >= rest_from
    std::vector<int> last_visit;                   // per vertex: last time any prior agent is there
    int max_time = 0;

    explicit SearchContext(const Roadmap& r)
        : rm(r),
          rest_from(r.vertex_count(), std::numeric_limits<int>::max()),
          last_visit(r.vertex_count(), -1) {}

    long long vkey(int t, int v) const { return static_cast<long long>(t) * rm.vertex_count() + v; }

    bool blocked(int v, int t) const {
        if (t >= rest_from[v]) return true;
        return vertex_blocked.count(vkey(t, v)) > 0;
    }
    bool move_blocked(int u, int v, int t) const {
        return edge_blocked.count(vkey(t, u) * rm.vertex_count() + v) > 0;
    }

    void commit(const std::vector<PlanTuple>& path) {
        for (const auto& p : path) {
            vertex_blocked.insert(vkey(p.time, p.vertex));
            last_visit[p.vertex] = std::max(last_visit[p.vertex], p.time);
        }
        for (std::size_t k = 1; k < path.size(); ++k) {
            int u = path[k - 1].vertex, v = path[k].vertex;
            if (u != v)  // opposite direction at the same step is a swap
                edge_blocked.insert(vkey(path[k - 1].time, v) * rm.vertex_count() + u);
        }
        rest_from[path.back().vertex] = path.back().time;
        max_time = std::max(max_time, path.back().time);
    }
};

std::vector<int> bfs_distances(const Roadmap& rm, int goal) {
    std::vector<int> dist(rm.vertex_count(), std::numeric_limits<int>::max());
    std::queue<int> q;
    dist[goal] = 0;
    q.push(goal);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int nb : rm.adjacency[v])
            if (dist[nb] == std::numeric_limits<int>::max()) {
                dist[nb] = dist[v] + 1;
                q.push(nb);
            }
    }
    return dist;
}

std::optional<std::vector<PlanTuple>> astar_single(const SearchContext& ctx, int start, int goal,
                                                   long node_budget) {
    const int V = ctx.rm.vertex_count();
    const std::vector<int> h = bfs_distances(ctx.rm, goal);
    if (h[start] == std::numeric_limits<int>::max()) return std::nullopt;

    // The world is static after every prior agent has parked; |V| extra steps
    // then suffice to reach any reachable goal.
    const int time_cap = ctx.max_time + V + 8;
    const int finish_after = ctx.last_visit[goal];  // must finish strictly later

    struct Node {
        int f, h, t, v;
        bool operator>(const Node& o) const {
            return std::tie(f, h, v, t) > std::tie(o.f, o.h, o.v, o.t);
        }
    };
    std::priority_queue<Node, std::vector<Node>, std::greater<>> open;
    std::unordered_map<long long, long long> parent;
    std::unordered_set<long long> closed;

    auto key = [&](int t, int v) { return static_cast<long long>(t) * V + v; };
    open.push({h[start], h[start], 0, start});
    parent[key(0, start)] = -1;
    long expanded = 0;

    while (!open.empty()) {
        auto [f, hh, t, v] = open.top();
        open.pop();
        if (!closed.insert(key(t, v)).second) continue;
        if (v == goal && t > finish_after) {
            std::vector<PlanTuple> path;
            long long k = key(t, v);
            while (k != -1) {
                path.push_back({static_cast<int>(k % V), static_cast<int>(k / V)});
                k = parent.at(k);
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        if (++expanded > node_budget) return std::nullopt;
        if (t >= time_cap) continue;

        auto try_push = [&](int nv) {
            if (ctx.blocked(nv, t + 1)) return;
            if (nv != v && ctx.move_blocked(v, nv, t)) return;
            long long nk = key(t + 1, nv);
            if (closed.count(nk) || parent.count(nk)) return;
            parent[nk] = key(t, v);
            open.push({t + 1 + h[nv], h[nv], t + 1, nv});
        };
        try_push(v);  // wait
        for (int nb : ctx.rm.adjacency[v]) try_push(nb);
    }
    return std::nullopt;
}

}  // namespace

std::optional<MapfPlan> plan_prioritized(const Scenario& sc, const std::vector<int>& order,
                                         const PlannerLimits& limits, PlanFailure* failure) {
    if (static_cast<int>(order.size()) != sc.agent_count())
        throw std::invalid_argument("plan_prioritized: order must permute all agents");
    SearchContext ctx(sc.roadmap);
    MapfPlan plan;
    plan.paths.resize(sc.agent_count());
    for (int a : order) {
        auto path = astar_single(ctx, sc.agents[a].start, sc.agents[a].goal,
                                 limits.node_budget_per_agent);
        if (!path) {
            if (failure)
                *failure = {a, "no conflict-free path for agent " + sc.agents[a].label +
                                   " within budget"};
            return std::nullopt;
        }
        ctx.commit(*path);
        plan.paths[a] = std::move(*path);
    }
    return plan;
}

std::optional<MapfPlan> plan_with_restarts(const Scenario& sc, std::uint64_t seed,
                                           const PlannerLimits& limits, PlanFailure* failure) {
    std::vector<int> order(sc.agent_count());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    PlanFailure local;
    for (int attempt = 0; attempt <= limits.max_restarts; ++attempt) {
        if (attempt > 0)
            for (int i = sc.agent_count() - 1; i > 0; --i)
                std::swap(order[i], order[rng() % (i + 1)]);
        auto plan = plan_prioritized(sc, order, limits, &local);
        if (plan && check_initial_acyclicity(*plan, sc)) return plan;
        if (plan) local = {-1, "plan compiles to a cyclic dependency graph"};
    }
    if (failure) *failure = local;
    return std::nullopt;
}

bool check_initial_acyclicity(const MapfPlan& plan, const Scenario& sc) {
    return is_acyclic(compile_seadg(plan, sc.roadmap));
}

MapfPlan parse_plan(const std::string& text, const Scenario& sc, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
    MapfPlan plan;
    plan.paths.resize(sc.agent_count());
    std::vector<bool> seen(sc.agent_count(), false);
    for (auto it = j.begin(); it != j.end(); ++it) {
        int agent = -1;
        for (int a = 0; a < sc.agent_count(); ++a)
            if (sc.agents[a].label == it.key()) agent = a;
        if (agent < 0) throw std::runtime_error(origin + ": unknown agent id '" + it.key() + "'");
        seen[agent] = true;
        for (const json& tup : it.value()) {
            if (!tup.is_array() || tup.size() != 2)
                throw std::runtime_error(origin + ": tuple must be [vertex, time]");
            int v = sc.roadmap.index_of(label_of(tup[0]));
            if (v < 0)
                throw std::runtime_error(origin + ": unknown vertex '" + label_of(tup[0]) + "'");
            int t = tup[1].get<int>();
            if (t < 0) throw std::runtime_error(origin + ": negative tuple time");
            plan.paths[agent].push_back({v, t});
        }
    }
    for (int a = 0; a < sc.agent_count(); ++a)
        if (!seen[a])
            throw std::runtime_error(origin + ": missing path for agent '" + sc.agents[a].label +
                                     "'");
    return plan;
}

std::string plan_to_json(const MapfPlan& plan, const Scenario& sc) {
    json j = json::object();
    for (int a = 0; a < plan.agent_count(); ++a) {
        json path = json::array();
        for (const auto& p : plan.paths[a])
            path.push_back({sc.roadmap.labels[p.vertex], p.time});
        j[sc.agents[a].label] = path;
    }
    return j.dump(2) + "\n";
}

MapfPlan load_plan(const std::string& path, const Scenario& sc) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open plan file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_plan(buf.str(), sc, path);
}

void save_plan(const MapfPlan& plan, const Scenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << plan_to_json(plan, sc);
}

}  // namespace sadg
