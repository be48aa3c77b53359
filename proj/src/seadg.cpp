#include "sadg/seadg.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sadg {

const char* to_string(Status s) {
    switch (s) {
        case Status::Staged: return "staged";
        case Status::InProgress: return "in-progress";
        case Status::Completed: return "completed";
    }
    return "?";
}

std::size_t SeAdg::vertex_count() const {
    std::size_t n = 0;
    for (const auto& c : chains) n += c.size();
    return n;
}

bool SeAdg::contains(VertexRef v) const {
    return v.agent >= 0 && v.agent < agent_count() && v.index >= 0 &&
           v.index < static_cast<int>(chains[v.agent].size());
}

const SeAdgVertex& SeAdg::at(VertexRef v) const {
    if (!contains(v)) throw std::out_of_range("SeAdg::at: no such vertex");
    return chains[v.agent][v.index];
}

SeAdgVertex& SeAdg::at(VertexRef v) {
    if (!contains(v)) throw std::out_of_range("SeAdg::at: no such vertex");
    return chains[v.agent][v.index];
}

std::vector<int> SeAdg::chain_offsets() const {
    std::vector<int> off(chains.size() + 1, 0);
    for (std::size_t a = 0; a < chains.size(); ++a)
        off[a + 1] = off[a] + static_cast<int>(chains[a].size());
    return off;
}

SeAdg compile_seadg(const MapfPlan& plan, const Roadmap& r) {
    // Reject invalid plans. Endpoints are not checkable here (no scenario),
    // everything else is.
    for (int a = 0; a < plan.agent_count(); ++a) {
        const auto& path = plan.paths[a];
        if (path.empty()) throw std::invalid_argument("compile_seadg: empty path");
        for (std::size_t k = 1; k < path.size(); ++k) {
            if (path[k].time != path[k - 1].time + 1)
                throw std::invalid_argument("compile_seadg: non-contiguous step times");
            if (path[k].vertex != path[k - 1].vertex &&
                !r.adjacent(path[k - 1].vertex, path[k].vertex))
                throw std::invalid_argument("compile_seadg: move is not a roadmap edge");
        }
    }
    {
        // Vertex and swap conflicts; goal-rest included.
        std::map<std::pair<int, int>, int> occupied;  // (t, vertex) -> agent
        int horizon = plan.makespan();
        for (int a = 0; a < plan.agent_count(); ++a)
            for (int t = 0; t <= horizon; ++t) {
                const auto& path = plan.paths[a];
                int v = t < static_cast<int>(path.size()) ? path[t].vertex : path.back().vertex;
                if (!occupied.emplace(std::make_pair(t, v), a).second)
                    throw std::invalid_argument("compile_seadg: vertex conflict in plan");
            }
        std::map<std::tuple<int, int, int>, int> moves;  // (t, u, v)
        for (int a = 0; a < plan.agent_count(); ++a) {
            const auto& path = plan.paths[a];
            for (std::size_t k = 1; k < path.size(); ++k) {
                int u = path[k - 1].vertex, v = path[k].vertex;
                if (u == v) continue;
                moves[{path[k - 1].time, u, v}] = a;
                if (moves.count({path[k - 1].time, v, u}))
                    throw std::invalid_argument("compile_seadg: swap conflict in plan");
            }
        }
    }

    SeAdg g;
    g.chains.resize(plan.agent_count());

    // Stage 1: merge tuples into movement vertices until the segment's first
    // tuple and the new tuple are spatially exclusive.
    for (int a = 0; a < plan.agent_count(); ++a) {
        const auto& path = plan.paths[a];
        SeAdgVertex v;
        v.agent = a;
        v.tuples = {path[0]};
        PlanTuple anchor = path[0];
        for (std::size_t k = 1; k < path.size(); ++k) {
            v.tuples.push_back(path[k]);
            if (spatially_exclusive(anchor.vertex, path[k].vertex, r)) {
                v.index = static_cast<int>(g.chains[a].size());
                v.start_vertex = v.tuples.front().vertex;
                v.goal_vertex = v.tuples.back().vertex;
                v.planned_start_time = v.tuples.front().time;
                v.planned_goal_time = v.tuples.back().time;
                if (v.index > 0)
                    g.edges.push_back({{a, v.index - 1}, {a, v.index}, false});
                g.chains[a].push_back(std::move(v));
                anchor = path[k];
                v = SeAdgVertex{};
                v.agent = a;
                v.tuples = {anchor};
            }
        }
        // Leftover tuples never became spatially exclusive (e.g. trailing
        // waits at the goal) and define no movement.
    }

    // Stage 2: inter-agent ordering. Hash join on the contested roadmap
    // vertex; output-equivalent to the literal quadruple loop.
    std::map<int, std::vector<VertexRef>> by_start, by_goal;
    for (const auto& chain : g.chains)
        for (const auto& v : chain) {
            by_start[v.start_vertex].push_back(v.ref());
            by_goal[v.goal_vertex].push_back(v.ref());
        }
    for (const auto& [vertex, tails] : by_start) {
        auto it = by_goal.find(vertex);
        if (it == by_goal.end()) continue;
        for (VertexRef ti : tails)
            for (VertexRef hj : it->second) {
                if (ti.agent == hj.agent) continue;
                if (g.at(ti).planned_goal_time <= g.at(hj).planned_goal_time)
                    g.edges.push_back({ti, hj, true});
            }
    }

    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

bool is_acyclic(const SeAdg& g) {
    const auto off = g.chain_offsets();
    const int n = off.back();
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> adj(n);
    auto fid = [&](VertexRef v) { return off[v.agent] + v.index; };
    for (const auto& e : g.edges) {
        adj[fid(e.tail)].push_back(fid(e.head));
        ++indeg[fid(e.head)];
    }
    std::vector<int> stack;
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0) stack.push_back(i);
    int seen = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++seen;
        for (int w : adj[v])
            if (--indeg[w] == 0) stack.push_back(w);
    }
    return seen == n;
}

std::vector<VertexRef> executable_vertices(const SeAdg& g) {
    std::vector<VertexRef> out;
    std::vector<VertexRef> front(g.agent_count(), VertexRef{});
    for (int a = 0; a < g.agent_count(); ++a) {
        for (const auto& v : g.chains[a]) {
            if (v.status == Status::Completed) continue;
            if (v.status == Status::Staged) front[a] = v.ref();
            break;  // in-progress front: nothing executable for this agent
        }
    }
    for (const auto& e : g.edges) {
        if (!e.head.valid()) continue;
        if (front[e.head.agent] == e.head && g.at(e.tail).status != Status::Completed)
            front[e.head.agent] = VertexRef{};
    }
    for (int a = 0; a < g.agent_count(); ++a)
        if (front[a].valid()) out.push_back(front[a]);
    return out;
}

void mark_status(SeAdg& g, VertexRef v, Status next) {
    SeAdgVertex& vx = g.at(v);
    if (vx.status == Status::Staged && next == Status::InProgress) {
        auto exec = executable_vertices(g);
        if (std::find(exec.begin(), exec.end(), v) == exec.end())
            throw std::logic_error("mark_status: vertex is blocked, cannot start");
        vx.status = Status::InProgress;
        return;
    }
    if (vx.status == Status::InProgress && next == Status::Completed) {
        vx.status = Status::Completed;
        return;
    }
    throw std::logic_error(std::string("mark_status: illegal transition ") +
                           to_string(vx.status) + " -> " + to_string(next));
}

std::string to_dot(const SeAdg& g) {
    std::ostringstream os;
    os << "digraph seadg {\n  rankdir=LR;\n  node [shape=ellipse, style=filled];\n";
    for (int a = 0; a < g.agent_count(); ++a) {
        os << "  subgraph cluster_agent" << a << " {\n    label=\"AGV " << a << "\";\n";
        for (const auto& v : g.chains[a]) {
            const char* color = v.status == Status::Completed   ? "gray80"
                                : v.status == Status::InProgress ? "gold"
                                                                 : "white";
            os << "    v" << a << "_" << v.index << " [label=\"v" << a << "^" << v.index
               << "\\n" << v.start_vertex << "->" << v.goal_vertex << "\", fillcolor=" << color
               << "];\n";
        }
        os << "  }\n";
    }
    for (const auto& e : g.edges) {
        os << "  v" << e.tail.agent << "_" << e.tail.index << " -> v" << e.head.agent << "_"
           << e.head.index;
        if (!e.inter) os << " [weight=10]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace sadg
