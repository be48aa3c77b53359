#pragma once

#include <vector>

#include "sadg/sadg.hpp"
#include "sadg/schedule.hpp"

namespace sadg {

/// Finite-horizon slice of a switchable graph. Membership is a per-agent
/// prefix of the vertex chains (intra edges close any gap during
/// extraction), so it is stored as one length per agent.
struct HorizonSubset {
    std::vector<int> prefix_len;          // vertices 0..len-1 are inside
    std::vector<int> free_groups;         // sorted ids whose bit is decided inside
    std::vector<AdgEdge> boundary_edges;  // all point out of the subset

    bool contains(VertexRef v) const {
        return v.agent >= 0 && v.agent < static_cast<int>(prefix_len.size()) && v.index >= 0 &&
               v.index < prefix_len[v.agent];
    }
    std::vector<VertexRef> vertices() const;
    bool whole_graph(const Sadg& s) const;
};

/// Seeds the subset with completed and in-progress vertices plus staged
/// vertices estimated to finish within `horizon` of `now`, then grows it
/// until no dependency can point into it: tails of inward edges are
/// absorbed, and any group in `free_groups` touching the subset joins the
/// decision set with all of its pair endpoints (groups are atomic). Groups
/// outside the decision set keep their current orientation.
HorizonSubset extract_subset(const Sadg& s, const BinaryVector& b_current,
                             const std::vector<int>& free_groups, const Schedule& estimates,
                             double horizon, double now);

/// True iff the induced subgraphs on `subset` and on its complement are both
/// acyclic and every crossing edge points from the subset to the complement;
/// this certifies acyclicity of the whole graph.
bool check_split(const SeAdg& full, const std::vector<VertexRef>& subset);

}  // namespace sadg
