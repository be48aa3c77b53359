#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sadg/horizon.hpp"
#include "sadg/maps.hpp"
#include "sadg/optimizer.hpp"
#include "support/fixtures.hpp"

using namespace sadg;
using namespace fixtures;

namespace {

std::vector<int> all_groups(const Sadg& s) {
    std::vector<int> out(s.group_count());
    for (int g = 0; g < s.group_count(); ++g) out[g] = g;
    return out;
}

struct Extracted {
    Sadg sadg;
    BinaryVector b;
    std::vector<int> free;
    Schedule estimates;
};

Extracted random_state(std::mt19937_64& rng, int fleet = 8) {
    auto inst = make_instance(static_cast<MapTemplate>(rng() % 4), 9, 9, fleet, rng());
    REQUIRE(inst);
    Extracted ex;
    ex.sadg = compile_sadg(inst->plan, inst->scenario.roadmap);
    DurationModel d = randomize_execution_state(ex.sadg, inst->scenario.step_duration(), rng);
    ex.b = ex.sadg.zero();
    auto frozen = inadmissible_groups(ex.sadg, ex.b);
    for (int g = 0; g < ex.sadg.group_count(); ++g)
        if (std::find(frozen.begin(), frozen.end(), g) == frozen.end()) ex.free.push_back(g);
    ex.estimates = earliest_schedule(realize(ex.sadg, ex.b), d, 0.0);
    REQUIRE_FALSE(ex.estimates.cyclic);
    return ex;
}

}  // namespace

TEST_CASE("huge horizon captures the whole graph") {
    std::mt19937_64 rng(5);
    auto ex = random_state(rng);
    HorizonSubset sub = extract_subset(ex.sadg, ex.b, ex.free, ex.estimates, 1e9, 0.0);
    CHECK(sub.whole_graph(ex.sadg));
    CHECK(sub.free_groups == ex.free);
    CHECK(sub.boundary_edges.empty());
}

TEST_CASE("tiny horizon still seeds every in-progress vertex") {
    PlusCrossing fx;
    Sadg s = compile_sadg(fx.plan, fx.roadmap);
    mark_status(s.skeleton, {0, 0}, Status::InProgress);
    mark_status(s.skeleton, {1, 0}, Status::InProgress);
    DurationModel d = DurationModel::nominal(s.skeleton, 1.0);
    Schedule est = earliest_schedule(realize(s, s.zero()), d, 0.0);
    HorizonSubset sub = extract_subset(s, s.zero(), all_groups(s), est, 1e-6, 0.0);
    CHECK(sub.contains({0, 0}));
    CHECK(sub.contains({1, 0}));
}

TEST_CASE("mid-plan horizon: boundary edges all point outward") {
    std::mt19937_64 rng(9);
    int strictly_smaller = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto ex = random_state(rng);
        double horizon = 1.0 + static_cast<double>(rng() % 60) / 10.0;
        HorizonSubset sub = extract_subset(ex.sadg, ex.b, ex.free, ex.estimates, horizon, 0.0);
        if (!sub.whole_graph(ex.sadg)) ++strictly_smaller;
        for (const auto& e : sub.boundary_edges) {
            CHECK(sub.contains(e.tail));
            CHECK_FALSE(sub.contains(e.head));
        }
        // the decided groups' candidate edges must live inside the subset
        for (const auto& p : ex.sadg.pairs) {
            bool in_fh = std::find(sub.free_groups.begin(), sub.free_groups.end(), p.group) !=
                         sub.free_groups.end();
            if (!in_fh) continue;
            for (const AdgEdge* e : {&p.forward, &p.reverse}) {
                CHECK(sub.contains(e->tail));
                CHECK(sub.contains(e->head));
            }
        }
    }
    CHECK(strictly_smaller > 5);
}

TEST_CASE("growing the horizon never removes vertices") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 15; ++trial) {
        auto ex = random_state(rng);
        HorizonSubset prev;
        bool first = true;
        for (double horizon : {0.5, 2.0, 5.0, 10.0, 40.0, 1e9}) {
            HorizonSubset sub =
                extract_subset(ex.sadg, ex.b, ex.free, ex.estimates, horizon, 0.0);
            if (!first)
                for (std::size_t a = 0; a < sub.prefix_len.size(); ++a)
                    CHECK(sub.prefix_len[a] >= prev.prefix_len[a]);
            prev = sub;
            first = false;
        }
    }
}

TEST_CASE("check_split basics") {
    SUBCASE("empty subset reduces to plain acyclicity") {
        SeAdg dag = synthetic_graph(3, {{0, 1}, {1, 2}});
        CHECK(check_split(dag, {}));
        SeAdg cyc = synthetic_graph(2, {{0, 1}, {1, 0}});
        CHECK_FALSE(check_split(cyc, {}));
    }
    SUBCASE("one backward crossing edge breaks the split") {
        // two acyclic halves {0,1} and {2,3}, forward crossings plus one back
        SeAdg g = synthetic_graph(4, {{0, 1}, {2, 3}, {1, 2}, {3, 0}});
        CHECK_FALSE(check_split(g, {{0, 0}, {1, 0}}));
        SeAdg ok = synthetic_graph(4, {{0, 1}, {2, 3}, {1, 2}, {0, 3}});
        CHECK(check_split(ok, {{0, 0}, {1, 0}}));
    }
    SUBCASE("cycle inside a half breaks the split even with clean crossings") {
        SeAdg g = synthetic_graph(4, {{0, 1}, {1, 0}, {2, 3}, {1, 2}});
        CHECK_FALSE(check_split(g, {{0, 0}, {1, 0}}));
    }
}

TEST_CASE("acyclic subset selections certify the full realization") {
    std::mt19937_64 rng(21);
    int conditionals = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto ex = random_state(rng, 6 + static_cast<int>(rng() % 5));
        double horizon = 0.5 + static_cast<double>(rng() % 80) / 10.0;
        HorizonSubset sub = extract_subset(ex.sadg, ex.b, ex.free, ex.estimates, horizon, 0.0);

        BinaryVector b_new = ex.b;
        for (int g : sub.free_groups) b_new.bits[g] = rng() % 2;
        SeAdg realized = realize(ex.sadg, b_new);

        // induced acyclicity on the subset
        std::vector<VertexRef> inside = sub.vertices();
        std::set<VertexRef> inside_set(inside.begin(), inside.end());
        const auto off = realized.chain_offsets();
        std::vector<int> indeg(off.back(), 0);
        std::vector<std::vector<int>> adj(off.back());
        auto fid = [&](VertexRef v) { return off[v.agent] + v.index; };
        for (const auto& e : realized.edges) {
            if (!inside_set.count(e.tail) || !inside_set.count(e.head)) continue;
            adj[fid(e.tail)].push_back(fid(e.head));
            ++indeg[fid(e.head)];
        }
        std::vector<int> stack;
        for (const auto& v : inside)
            if (indeg[fid(v)] == 0) stack.push_back(fid(v));
        std::size_t seen = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            ++seen;
            for (int w : adj[v])
                if (--indeg[w] == 0) stack.push_back(w);
        }
        if (seen != inside.size()) continue;  // cyclic subset selection: no claim

        ++conditionals;
        CHECK(is_acyclic(realized));
        CHECK(check_split(realized, inside));
    }
    CHECK(conditionals > 150);
}
