#include "sadg/horizon.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace sadg {

std::vector<VertexRef> HorizonSubset::vertices() const {
    std::vector<VertexRef> out;
    for (int a = 0; a < static_cast<int>(prefix_len.size()); ++a)
        for (int i = 0; i < prefix_len[a]; ++i) out.push_back({a, i});
    return out;
}

bool HorizonSubset::whole_graph(const Sadg& s) const {
    for (int a = 0; a < s.skeleton.agent_count(); ++a)
        if (prefix_len[a] < static_cast<int>(s.skeleton.chains[a].size())) return false;
    return true;
}

HorizonSubset extract_subset(const Sadg& s, const BinaryVector& b_current,
                             const std::vector<int>& free_groups, const Schedule& estimates,
                             double horizon, double now) {
    const SeAdg& sk = s.skeleton;
    HorizonSubset sub;
    sub.prefix_len.assign(sk.agent_count(), 0);

    // Seed: completed and in-progress vertices, and staged vertices whose
    // estimated completion falls within the horizon. Goal estimates grow
    // along each chain, so the seed is a per-agent prefix.
    for (int a = 0; a < sk.agent_count(); ++a) {
        int len = 0;
        for (const auto& v : sk.chains[a]) {
            bool inside = v.status != Status::Staged ||
                          estimates.t_g[a][v.index] <= now + horizon;
            if (!inside) break;
            ++len;
        }
        sub.prefix_len[a] = len;
    }

    auto absorb = [&](VertexRef v, bool& changed) {
        if (v.index + 1 > sub.prefix_len[v.agent]) {
            sub.prefix_len[v.agent] = v.index + 1;
            changed = true;
        }
    };

    std::vector<bool> is_free(s.group_count(), false);
    for (int gid : free_groups) is_free[gid] = true;
    std::vector<bool> in_fh(s.group_count(), false);

    bool changed = true;
    while (changed) {
        changed = false;
        // A free group touching the subset joins the decision set; all of
        // its pair endpoints are pulled inside so every candidate edge of
        // the decision set lives within the subset.
        for (const auto& p : s.pairs) {
            if (!is_free[p.group] || in_fh[p.group]) continue;
            for (const AdgEdge* e : {&p.forward, &p.reverse})
                if (sub.contains(e->tail) || sub.contains(e->head)) {
                    in_fh[p.group] = true;
                    changed = true;
                    break;
                }
        }
        for (const auto& p : s.pairs) {
            if (!in_fh[p.group]) continue;
            for (const AdgEdge* e : {&p.forward, &p.reverse}) {
                absorb(e->tail, changed);
                absorb(e->head, changed);
            }
        }
        // Absorb tails of edges pointing into the subset: fixed inter edges
        // and the active orientation of undecided groups. Intra edges can
        // never point inward under prefix membership.
        for (const auto& e : sk.edges)
            if (e.inter && sub.contains(e.head) && !sub.contains(e.tail))
                absorb(e.tail, changed);
        for (const auto& p : s.pairs) {
            if (in_fh[p.group]) continue;
            const AdgEdge& e = b_current.bits[p.group] ? p.reverse : p.forward;
            if (sub.contains(e.head) && !sub.contains(e.tail)) absorb(e.tail, changed);
        }
    }

    for (int gid = 0; gid < s.group_count(); ++gid)
        if (in_fh[gid]) sub.free_groups.push_back(gid);

    // Boundary edges of the realized graph; by construction all outward.
    for (const auto& e : sk.edges)
        if (sub.contains(e.tail) != sub.contains(e.head)) {
            if (sub.contains(e.head))
                throw std::logic_error("extract_subset: inward edge survived extraction");
            sub.boundary_edges.push_back(e);
        }
    for (const auto& p : s.pairs) {
        const AdgEdge& e = b_current.bits[p.group] ? p.reverse : p.forward;
        if (sub.contains(e.tail) != sub.contains(e.head)) {
            if (sub.contains(e.head))
                throw std::logic_error("extract_subset: inward edge survived extraction");
            sub.boundary_edges.push_back(e);
        }
    }
    std::sort(sub.boundary_edges.begin(), sub.boundary_edges.end());
    return sub;
}

bool check_split(const SeAdg& full, const std::vector<VertexRef>& subset) {
    std::set<VertexRef> inside(subset.begin(), subset.end());

    const auto off = full.chain_offsets();
    const int n = off.back();
    auto fid = [&](VertexRef v) { return off[v.agent] + v.index; };

    auto acyclic_over = [&](auto member) {
        std::vector<int> indeg(n, 0);
        std::vector<std::vector<int>> adj(n);
        int total = 0;
        for (int a = 0; a < full.agent_count(); ++a)
            for (const auto& v : full.chains[a])
                if (member(v.ref())) ++total;
        for (const auto& e : full.edges) {
            if (!member(e.tail) || !member(e.head)) continue;
            adj[fid(e.tail)].push_back(fid(e.head));
            ++indeg[fid(e.head)];
        }
        std::vector<int> stack;
        for (int a = 0; a < full.agent_count(); ++a)
            for (const auto& v : full.chains[a])
                if (member(v.ref()) && indeg[fid(v.ref())] == 0) stack.push_back(fid(v.ref()));
        int seen = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            ++seen;
            for (int w : adj[v])
                if (--indeg[w] == 0) stack.push_back(w);
        }
        return seen == total;
    };

    auto is_in = [&](VertexRef v) { return inside.count(v) > 0; };
    if (!acyclic_over(is_in)) return false;
    if (!acyclic_over([&](VertexRef v) { return !is_in(v); })) return false;
    for (const auto& e : full.edges)
        if (!is_in(e.tail) && is_in(e.head)) return false;
    return true;
}

}  // namespace sadg
