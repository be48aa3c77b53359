#include "sadg/sadg.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sadg {

Sadg compile_sadg(const MapfPlan& plan, const Roadmap& r) {
    SeAdg full = compile_seadg(plan, r);
    if (!is_acyclic(full))
        throw std::invalid_argument("compile_sadg: plan yields a cyclic dependency graph");

    Sadg s;
    s.skeleton.chains = full.chains;
    for (const auto& e : full.edges) {
        if (!e.inter) {
            s.skeleton.edges.push_back(e);
            continue;
        }
        // Lemma-1 reverse of (v_i^k -> v_j^l) is (v_j^{l+1} -> v_i^{k-1}).
        VertexRef rev_tail{e.head.agent, e.head.index + 1};
        VertexRef rev_head{e.tail.agent, e.tail.index - 1};
        if (full.contains(rev_tail) && full.contains(rev_head))
            s.pairs.push_back({e, {rev_tail, rev_head, true}, -1});
        else
            s.skeleton.edges.push_back(e);
    }
    std::sort(s.skeleton.edges.begin(), s.skeleton.edges.end());
    group_dependencies(s);
    return s;
}

void group_dependencies(Sadg& s) {
    s.groups.clear();
    // Bucket pairs by (tail agent, head agent) of the forward edge, ordered
    // by tail index then head index.
    std::map<std::pair<int, int>, std::vector<int>> buckets;
    for (int p = 0; p < static_cast<int>(s.pairs.size()); ++p) {
        const AdgEdge& f = s.pairs[p].forward;
        buckets[{f.tail.agent, f.head.agent}].push_back(p);
    }
    for (auto& [agents, bucket] : buckets) {
        std::sort(bucket.begin(), bucket.end(), [&](int a, int b) {
            const AdgEdge& ea = s.pairs[a].forward;
            const AdgEdge& eb = s.pairs[b].forward;
            return std::tie(ea.tail.index, ea.head.index) <
                   std::tie(eb.tail.index, eb.head.index);
        });
        std::size_t i = 0;
        while (i < bucket.size()) {
            DependencyGroup grp;
            grp.id = static_cast<int>(s.groups.size());
            grp.pair_indices = {bucket[i]};
            int dir = 0;  // +1 same direction, -1 opposing, 0 undecided
            std::size_t j = i + 1;
            for (; j < bucket.size(); ++j) {
                const AdgEdge& prev = s.pairs[bucket[j - 1]].forward;
                const AdgEdge& next = s.pairs[bucket[j]].forward;
                if (next.tail.index != prev.tail.index + 1) break;
                int step = next.head.index - prev.head.index;
                if (step != 1 && step != -1) break;
                if (dir == 0) dir = step;
                else if (step != dir) break;
                grp.pair_indices.push_back(bucket[j]);
            }
            for (int p : grp.pair_indices) s.pairs[p].group = grp.id;
            s.groups.push_back(std::move(grp));
            i = j;
        }
    }
}

namespace {

void check_assignment(const Sadg& s, const BinaryVector& b) {
    if (b.size() != s.group_count())
        throw std::invalid_argument("binary vector has " + std::to_string(b.size()) +
                                    " bits, graph has " + std::to_string(s.group_count()) +
                                    " groups");
}

}  // namespace

SeAdg realize(const Sadg& s, const BinaryVector& b) {
    check_assignment(s, b);
    SeAdg g;
    g.chains = s.skeleton.chains;
    g.edges = s.skeleton.edges;
    for (const auto& p : s.pairs)
        g.edges.push_back(b.bits[p.group] ? p.reverse : p.forward);
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

SeAdg realize_per_pair(const Sadg& s, const std::vector<std::uint8_t>& pair_bits) {
    if (pair_bits.size() != s.pairs.size())
        throw std::invalid_argument("realize_per_pair: one bit per pair required");
    SeAdg g;
    g.chains = s.skeleton.chains;
    g.edges = s.skeleton.edges;
    for (std::size_t p = 0; p < s.pairs.size(); ++p)
        g.edges.push_back(pair_bits[p] ? s.pairs[p].reverse : s.pairs[p].forward);
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

bool switch_admissible(const Sadg& s, const BinaryVector& b_old, const BinaryVector& b_new) {
    check_assignment(s, b_old);
    check_assignment(s, b_new);
    for (const auto& p : s.pairs) {
        if (b_old.bits[p.group] == b_new.bits[p.group]) continue;
        const AdgEdge& incoming = b_new.bits[p.group] ? p.reverse : p.forward;
        if (s.skeleton.at(incoming.head).status != Status::Staged) return false;
    }
    return true;
}

std::vector<int> inadmissible_groups(const Sadg& s, const BinaryVector& b) {
    check_assignment(s, b);
    std::vector<bool> frozen(s.group_count(), false);
    for (const auto& p : s.pairs) {
        const AdgEdge& opposite = b.bits[p.group] ? p.forward : p.reverse;
        if (s.skeleton.at(opposite.head).status != Status::Staged) frozen[p.group] = true;
    }
    std::vector<int> out;
    for (int gid = 0; gid < s.group_count(); ++gid)
        if (frozen[gid]) out.push_back(gid);
    return out;
}

std::string to_dot(const Sadg& s, const BinaryVector* active) {
    std::ostringstream os;
    os << "digraph sadg {\n  rankdir=LR;\n  node [shape=ellipse, style=filled];\n";
    const SeAdg& sk = s.skeleton;
    for (int a = 0; a < sk.agent_count(); ++a) {
        os << "  subgraph cluster_agent" << a << " {\n    label=\"AGV " << a << "\";\n";
        for (const auto& v : sk.chains[a]) {
            const char* color = v.status == Status::Completed   ? "gray80"
                                : v.status == Status::InProgress ? "gold"
                                                                 : "white";
            os << "    v" << a << "_" << v.index << " [label=\"v" << a << "^" << v.index
               << "\\n" << v.start_vertex << "->" << v.goal_vertex << "\", fillcolor=" << color
               << "];\n";
        }
        os << "  }\n";
    }
    auto emit = [&](const AdgEdge& e, const char* style) {
        os << "  v" << e.tail.agent << "_" << e.tail.index << " -> v" << e.head.agent << "_"
           << e.head.index << " [" << style << "];\n";
    };
    for (const auto& e : sk.edges) emit(e, e.inter ? "style=solid" : "weight=10");
    for (const auto& p : s.pairs) {
        bool rev = active && active->bits[p.group];
        emit(p.forward, rev ? "style=dotted, color=gray50" : "style=solid, color=black");
        emit(p.reverse, rev ? "style=solid, color=purple" : "style=dotted, color=purple");
    }
    os << "}\n";
    return os.str();
}

}  // namespace sadg
