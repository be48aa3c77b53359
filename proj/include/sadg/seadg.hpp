#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "sadg/mapf.hpp"

namespace sadg {

enum class Status { Staged, InProgress, Completed };

const char* to_string(Status s);

struct VertexRef {
    int agent = -1;
    int index = -1;
    bool valid() const { return agent >= 0 && index >= 0; }
    auto operator<=>(const VertexRef&) const = default;
};

/// One movement of an AGV: from s(v), via intermediate locations, to g(v),
/// where s(v) and g(v) are spatially exclusive.
struct SeAdgVertex {
    int agent = -1;
    int index = -1;
    std::vector<PlanTuple> tuples;
    Status status = Status::Staged;
    int start_vertex = -1;        // s(v)
    int goal_vertex = -1;         // g(v)
    int planned_start_time = 0;   // step of first tuple
    int planned_goal_time = 0;    // step of last tuple

    VertexRef ref() const { return {agent, index}; }
};

struct AdgEdge {
    VertexRef tail;
    VertexRef head;
    bool inter = false;  // between different agents
    auto operator<=>(const AdgEdge&) const = default;
};

/// Dependency graph over movement vertices. Value-semantic: snapshots can be
/// copied and diffed; mutation happens through mark_status only.
struct SeAdg {
    std::vector<std::vector<SeAdgVertex>> chains;  // per agent, index order
    std::vector<AdgEdge> edges;                    // sorted, unique

    int agent_count() const { return static_cast<int>(chains.size()); }
    std::size_t vertex_count() const;
    bool contains(VertexRef v) const;
    const SeAdgVertex& at(VertexRef v) const;
    SeAdgVertex& at(VertexRef v);

    /// Flat ids: chain offsets so vertex (a,i) maps to offset[a]+i.
    std::vector<int> chain_offsets() const;
};

/// Two-stage compilation. Stage 1 merges each agent's tuples into movement
/// vertices broken at spatial exclusivity and chains them; stage 2 adds an
/// inter-agent edge (v_i^k, v_j^l) whenever s(v_i^k) = g(v_j^l) and the
/// planned goal time of v_i^k is <= that of v_j^l. Throws on invalid plans.
SeAdg compile_seadg(const MapfPlan& plan, const Roadmap& r);

/// Kahn's algorithm.
bool is_acyclic(const SeAdg& g);

/// Staged vertices that are their agent's next vertex in chain order and
/// whose every in-edge tail is completed.
std::vector<VertexRef> executable_vertices(const SeAdg& g);

/// Applies a status transition. Throws std::logic_error on anything other
/// than staged -> in-progress -> completed, or when marking a blocked vertex
/// in-progress (the runtime collision guard).
void mark_status(SeAdg& g, VertexRef v, Status next);

std::string to_dot(const SeAdg& g);

}  // namespace sadg
