#include "sadg/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sadg {

DurationModel DurationModel::nominal(const SeAdg& g, double step_duration) {
    DurationModel d;
    d.t_est.resize(g.agent_count());
    d.mu.resize(g.agent_count());
    for (int a = 0; a < g.agent_count(); ++a) {
        for (const auto& v : g.chains[a])
            d.t_est[a].push_back((v.planned_goal_time - v.planned_start_time) * step_duration);
        d.mu[a].assign(g.chains[a].size(), 1.0);
    }
    return d;
}

namespace {

constexpr double kInfCost = std::numeric_limits<double>::infinity();
constexpr int kUndecided = -1;

/// Shared machinery for evaluating earliest-time schedules of (partially)
/// realized graphs; the single evaluation path used by solve, the oracle and
/// the bounds, so their costs are bitwise comparable.
struct EvalContext {
    const Sadg& s;
    const DurationModel& d;
    const HorizonSubset* sub;
    double now, eps;

    std::vector<int> off;
    int n = 0;
    std::vector<char> in_scope;                       // flat
    std::vector<double> delta;                        // flat
    std::vector<std::pair<int, int>> static_edges;    // both endpoints in scope
    std::vector<std::vector<std::pair<int, int>>> group_fwd, group_rev;
    std::vector<int> terminal;                        // per agent, flat id or -1
    int scope_count = 0;

    EvalContext(const Sadg& s_, const DurationModel& d_, const HorizonSubset* sub_, double now_,
                double eps_)
        : s(s_), d(d_), sub(sub_), now(now_), eps(eps_) {
        const SeAdg& sk = s.skeleton;
        off = sk.chain_offsets();
        n = off.back();
        in_scope.assign(n, 0);
        delta.assign(n, 0.0);
        for (int a = 0; a < sk.agent_count(); ++a)
            for (const auto& v : sk.chains[a]) {
                if (v.status == Status::Completed) continue;
                if (sub && !sub->contains(v.ref())) continue;
                int id = off[a] + v.index;
                in_scope[id] = 1;
                delta[id] = d.delta(v);
                ++scope_count;
            }
        auto both = [&](const AdgEdge& e) {
            return in_scope[fid(e.tail)] && in_scope[fid(e.head)];
        };
        for (const auto& e : sk.edges)
            if (both(e)) static_edges.emplace_back(fid(e.tail), fid(e.head));
        group_fwd.resize(s.group_count());
        group_rev.resize(s.group_count());
        for (const auto& p : s.pairs) {
            if (both(p.forward)) group_fwd[p.group].emplace_back(fid(p.forward.tail), fid(p.forward.head));
            if (both(p.reverse)) group_rev[p.group].emplace_back(fid(p.reverse.tail), fid(p.reverse.head));
        }
        terminal.assign(sk.agent_count(), -1);
        for (int a = 0; a < sk.agent_count(); ++a)
            for (const auto& v : sk.chains[a])
                if (in_scope[off[a] + v.index]) terminal[a] = off[a] + v.index;
    }

    int fid(VertexRef v) const { return off[v.agent] + v.index; }

    /// assignment: one entry per group, 0 / 1 / kUndecided (no edges).
    /// Returns the cost, or +inf when the selection is cyclic. Fills t_s/t_g
    /// when out parameters are given.
    double evaluate(const std::vector<int>& assignment, std::vector<double>* ts_out = nullptr,
                    std::vector<double>* tg_out = nullptr) const {
        std::vector<int> indeg(n, 0);
        std::vector<std::vector<int>> adj(n);
        auto add_edges = [&](const std::vector<std::pair<int, int>>& edges) {
            for (auto [u, w] : edges) {
                adj[u].push_back(w);
                ++indeg[w];
            }
        };
        add_edges(static_edges);
        for (int gid = 0; gid < s.group_count(); ++gid) {
            if (assignment[gid] == kUndecided) continue;
            add_edges(assignment[gid] ? group_rev[gid] : group_fwd[gid]);
        }
        std::vector<double> ts(n, now), tg(n, now);
        std::vector<int> stack;
        for (int v = 0; v < n; ++v)
            if (in_scope[v] && indeg[v] == 0) stack.push_back(v);
        int seen = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            ++seen;
            tg[v] = ts[v] + delta[v] + eps;
            for (int w : adj[v]) {
                ts[w] = std::max(ts[w], tg[v] + eps);
                if (--indeg[w] == 0) stack.push_back(w);
            }
        }
        if (seen != scope_count) return kInfCost;
        double cost = 0.0;
        for (int t : terminal)
            if (t >= 0) cost += tg[t];
        if (ts_out) *ts_out = std::move(ts);
        if (tg_out) *tg_out = std::move(tg);
        return cost;
    }

    Schedule to_schedule(const std::vector<int>& assignment) const {
        Schedule sched;
        std::vector<double> ts, tg;
        double cost = evaluate(assignment, &ts, &tg);
        if (cost == kInfCost) {
            sched.cyclic = true;
            return sched;
        }
        sched.cost = cost;
        const SeAdg& sk = s.skeleton;
        sched.t_s.resize(sk.agent_count());
        sched.t_g.resize(sk.agent_count());
        sched.terminal.assign(sk.agent_count(), now);
        for (int a = 0; a < sk.agent_count(); ++a) {
            sched.t_s[a].assign(sk.chains[a].size(), now);
            sched.t_g[a].assign(sk.chains[a].size(), now);
            for (const auto& v : sk.chains[a]) {
                int id = off[a] + v.index;
                if (!in_scope[id]) continue;
                sched.t_s[a][v.index] = ts[id];
                sched.t_g[a][v.index] = tg[id];
            }
            if (terminal[a] >= 0) sched.terminal[a] = tg[terminal[a]];
        }
        return sched;
    }
};

std::vector<int> full_assignment(const Sadg& s, const BinaryVector& b) {
    std::vector<int> a(s.group_count());
    for (int g = 0; g < s.group_count(); ++g) a[g] = b.bits[g];
    return a;
}

struct Candidate {
    double cost = kInfCost;
    int flips = std::numeric_limits<int>::max();
    std::vector<std::uint8_t> bits;
};

// Fewest flips from the current selection, then lexicographically smallest
// assignment, decide equal-cost ties.
bool better(const Candidate& a, const Candidate& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.flips != b.flips) return a.flips < b.flips;
    return a.bits < b.bits;
}

int count_flips(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    int f = 0;
    for (std::size_t i = 0; i < a.size(); ++i) f += a[i] != b[i];
    return f;
}

std::vector<int> effective_free(const std::vector<int>& free_groups, const HorizonSubset* sub) {
    if (!sub) return free_groups;
    std::vector<int> out;
    for (int g : free_groups)
        if (std::find(sub->free_groups.begin(), sub->free_groups.end(), g) !=
            sub->free_groups.end())
            out.push_back(g);
    return out;
}

}  // namespace

Schedule earliest_schedule(const SeAdg& g, const DurationModel& d, double now, double epsilon) {
    return earliest_schedule_subset(g, d, now, nullptr, epsilon);
}

Schedule earliest_schedule_subset(const SeAdg& g, const DurationModel& d, double now,
                                  const HorizonSubset* subset, double epsilon) {
    // Wrap the already-realized graph as a pair-free Sadg to share the
    // evaluation path.
    Sadg shell;
    shell.skeleton = g;
    EvalContext ctx(shell, d, subset, now, epsilon);
    return ctx.to_schedule({});
}

SolveResult solve(const Sadg& s, const DurationModel& d, const BinaryVector& b_current,
                  const std::vector<int>& free_groups, const HorizonSubset* subset,
                  const SolveOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    if (b_current.size() != s.group_count())
        throw std::invalid_argument("solve: binary vector size mismatch");
    EvalContext ctx(s, d, subset, opt.now, opt.epsilon);
    const std::vector<int> free = effective_free(free_groups, subset);

    SolveResult res;
    res.b_star = b_current;

    std::vector<int> assignment = full_assignment(s, b_current);
    Candidate best{ctx.evaluate(assignment), 0, b_current.bits};
    if (best.cost == kInfCost)
        throw std::invalid_argument("solve: current selection is cyclic (feasibility lost)");
    res.incumbent_cost = best.cost;
    res.nodes_explored = 1;

    // Branching order: descending root impact (difference of the two
    // single-flip bound evaluations), undecided groups contributing nothing.
    std::vector<int> relaxed = assignment;
    for (int g : free) relaxed[g] = kUndecided;
    std::vector<std::pair<double, int>> order;
    for (int g : free) {
        std::vector<int> probe = relaxed;
        probe[g] = 0;
        double c0 = ctx.evaluate(probe);
        probe[g] = 1;
        double c1 = ctx.evaluate(probe);
        res.nodes_explored += 2;
        double impact = (c0 == kInfCost || c1 == kInfCost) ? kInfCost : std::abs(c0 - c1);
        order.emplace_back(-impact, g);
    }
    std::sort(order.begin(), order.end());

    bool exhausted = false;
    std::vector<int> work = relaxed;
    auto dfs = [&](auto&& self, std::size_t depth) -> void {
        if (exhausted) return;
        if (depth == order.size()) {
            Candidate leaf;
            leaf.cost = ctx.evaluate(work);
            if (leaf.cost == kInfCost) return;
            leaf.bits.assign(work.begin(), work.end());
            leaf.flips = count_flips(leaf.bits, b_current.bits);
            if (better(leaf, best)) best = std::move(leaf);
            return;
        }
        int g = order[depth].second;
        const int preferred = b_current.bits[g];
        for (int val : {preferred, 1 - preferred}) {
            if (res.nodes_explored >= opt.node_budget) {
                exhausted = true;
                return;
            }
            work[g] = val;
            ++res.nodes_explored;
            double bound = ctx.evaluate(work);
            if (bound != kInfCost && !(bound > best.cost)) self(self, depth + 1);
            work[g] = kUndecided;
        }
    };
    dfs(dfs, 0);

    res.budget_exhausted = exhausted;
    res.b_star.bits = best.bits;
    res.cost = best.cost;
    res.flips = best.flips;
    res.schedule = ctx.to_schedule(full_assignment(s, res.b_star));
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

SolveResult oracle_solve(const Sadg& s, const DurationModel& d, const BinaryVector& b_current,
                         const std::vector<int>& free_groups, const HorizonSubset* subset,
                         const SolveOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    if (b_current.size() != s.group_count())
        throw std::invalid_argument("oracle_solve: binary vector size mismatch");
    const std::vector<int> free = effective_free(free_groups, subset);
    if (free.size() > 20)
        throw std::invalid_argument("oracle_solve: refusing more than 20 free groups");
    EvalContext ctx(s, d, subset, opt.now, opt.epsilon);

    SolveResult res;
    res.b_star = b_current;
    std::vector<int> assignment = full_assignment(s, b_current);
    Candidate best{ctx.evaluate(assignment), 0, b_current.bits};
    if (best.cost == kInfCost)
        throw std::invalid_argument("oracle_solve: current selection is cyclic");
    res.incumbent_cost = best.cost;

    const std::uint64_t total = 1ull << free.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (std::size_t i = 0; i < free.size(); ++i)
            assignment[free[i]] = static_cast<int>((mask >> i) & 1);
        ++res.nodes_explored;
        Candidate cand;
        cand.cost = ctx.evaluate(assignment);
        if (cand.cost == kInfCost) continue;
        cand.bits.assign(assignment.begin(), assignment.end());
        cand.flips = count_flips(cand.bits, b_current.bits);
        if (better(cand, best)) best = std::move(cand);
    }

    res.b_star.bits = best.bits;
    res.cost = best.cost;
    res.flips = best.flips;
    res.schedule = ctx.to_schedule(full_assignment(s, res.b_star));
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::string write_milp(const Sadg& s, const DurationModel& d, const BinaryVector& b_current,
                       const std::vector<int>& free_groups, const HorizonSubset* subset,
                       const SolveOptions& opt) {
    const double big_m = 1e6;
    EvalContext ctx(s, d, subset, opt.now, opt.epsilon);
    const std::vector<int> free = effective_free(free_groups, subset);
    const SeAdg& sk = s.skeleton;

    std::ostringstream os;
    char buf[128];
    auto var = [&](const char* base, VertexRef v) {
        std::snprintf(buf, sizeof buf, "%s_%d_%d", base, v.agent, v.index);
        return std::string(buf);
    };
    os << "\\ switch-selection instance; eps=" << opt.epsilon << " M=" << big_m << " now="
       << opt.now << "\nMinimize\n obj:";
    bool first = true;
    for (int a = 0; a < sk.agent_count(); ++a) {
        if (ctx.terminal[a] < 0) continue;
        VertexRef t{a, ctx.terminal[a] - ctx.off[a]};
        os << (first ? " " : " + ") << var("tg", t);
        first = false;
    }
    os << "\nSubject To\n";
    int row = 0;
    for (int a = 0; a < sk.agent_count(); ++a)
        for (const auto& v : sk.chains[a]) {
            if (!ctx.in_scope[ctx.fid(v.ref())]) continue;
            os << " dur" << row++ << ": " << var("tg", v.ref()) << " - " << var("ts", v.ref())
               << " >= " << d.delta(v) + opt.epsilon << "\n";
        }
    auto precedence = [&](const AdgEdge& e, const char* tag, const std::string& relax) {
        if (!ctx.in_scope[ctx.fid(e.tail)] || !ctx.in_scope[ctx.fid(e.head)]) return;
        os << " " << tag << row++ << ": " << var("ts", e.head) << " - " << var("tg", e.tail);
        if (!relax.empty()) os << " " << relax;
        os << " >= " << opt.epsilon << "\n";
    };
    for (const auto& e : sk.edges) precedence(e, e.inter ? "dep" : "chain", "");
    for (std::size_t p = 0; p < s.pairs.size(); ++p) {
        const auto& pair = s.pairs[p];
        bool is_free = std::find(free.begin(), free.end(), pair.group) != free.end();
        if (!is_free) {
            precedence(b_current.bits[pair.group] ? pair.reverse : pair.forward, "frozen", "");
            continue;
        }
        std::snprintf(buf, sizeof buf, "+ %g b%d", big_m, pair.group);
        precedence(pair.forward, "bigm_fwd", buf);
        std::snprintf(buf, sizeof buf, "- %g b%d", big_m, pair.group);
        // ts - tg - M b >= eps - M  encodes  ts > tg - (1-b) M
        if (ctx.in_scope[ctx.fid(pair.reverse.tail)] && ctx.in_scope[ctx.fid(pair.reverse.head)])
            os << " bigm_rev" << row++ << ": " << var("ts", pair.reverse.head) << " - "
               << var("tg", pair.reverse.tail) << " " << buf << " >= " << opt.epsilon - big_m
               << "\n";
    }
    os << "Bounds\n";
    for (int a = 0; a < sk.agent_count(); ++a)
        for (const auto& v : sk.chains[a]) {
            if (!ctx.in_scope[ctx.fid(v.ref())]) continue;
            os << " " << var("ts", v.ref()) << " >= " << opt.now << "\n";
        }
    os << "Binaries\n";
    for (int g : free) os << " b" << g << "\n";
    os << "End\n";
    return os.str();
}

}  // namespace sadg
