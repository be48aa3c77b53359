#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "sadg/maps.hpp"
#include "sadg/seadg.hpp"
#include "support/fixtures.hpp"

using namespace sadg;
using namespace fixtures;

TEST_CASE("straight path compiles to a two-vertex chain") {
    Roadmap rm = grid_roadmap(3, 1);
    SeAdg g = compile_seadg(plan_from_paths({{0, 1, 2}}), rm);
    REQUIRE(g.chains.size() == 1);
    REQUIRE(g.chains[0].size() == 2);
    CHECK(g.chains[0][0].start_vertex == 0);
    CHECK(g.chains[0][0].goal_vertex == 1);
    CHECK(g.chains[0][1].start_vertex == 1);
    CHECK(g.chains[0][1].goal_vertex == 2);
    REQUIRE(g.edges.size() == 1);
    CHECK_FALSE(g.edges[0].inter);
}

TEST_CASE("in-place waits merge into the enclosing movement vertex") {
    Roadmap rm = grid_roadmap(4, 1);
    SeAdg g = compile_seadg(plan_from_paths({{0, 1, 1, 1, 2, 3}}), rm);
    REQUIRE(g.chains[0].size() == 3);
    for (const auto& v : g.chains[0]) CHECK(v.start_vertex != v.goal_vertex);
    // the waits at vertex 1 live inside the second movement vertex
    CHECK(g.chains[0][1].tuples.size() == 4);
    CHECK(g.chains[0][1].planned_start_time == 1);
    CHECK(g.chains[0][1].planned_goal_time == 4);
}

TEST_CASE("trailing goal waits define no movement") {
    Roadmap rm = grid_roadmap(3, 1);
    SeAdg g = compile_seadg(plan_from_paths({{0, 1, 2, 2, 2}}), rm);
    CHECK(g.chains[0].size() == 2);
    SeAdg none = compile_seadg(plan_from_paths({{0, 0, 0}}), rm);
    CHECK(none.chains[0].empty());
}

TEST_CASE("wide footprints merge multiple hops into one vertex") {
    Roadmap rm = grid_roadmap(4, 1, 0.6);  // adjacent vertices overlap
    SeAdg g = compile_seadg(plan_from_paths({{0, 1, 2, 3}}), rm);
    REQUIRE(g.chains[0].size() == 1);
    CHECK(g.chains[0][0].start_vertex == 0);
    CHECK(g.chains[0][0].goal_vertex == 2);  // first exclusive hop: 2 m apart
}

TEST_CASE("shared corridor vertex yields exactly one inter edge") {
    PlusCrossing fx;
    SeAdg g = compile_seadg(fx.plan, fx.roadmap);
    std::vector<AdgEdge> inter;
    for (const auto& e : g.edges)
        if (e.inter) inter.push_back(e);
    REQUIRE(inter.size() == 1);
    // from the earlier agent's leaving vertex to the later agent's entry
    CHECK(inter[0].tail == VertexRef{1, 1});
    CHECK(inter[0].head == VertexRef{0, 1});
    CHECK(g.at(inter[0].tail).start_vertex == g.at(inter[0].head).goal_vertex);
}

TEST_CASE("stage-2 hash join matches the literal quadruple loop") {
    auto check_instance = [](const MapfPlan& plan, const Roadmap& rm) {
        SeAdg g = compile_seadg(plan, rm);
        std::vector<AdgEdge> inter;
        for (const auto& e : g.edges)
            if (e.inter) inter.push_back(e);
        CHECK(inter == literal_stage2(g));
    };
    Crossing4 c4;
    check_instance(c4.plan, c4.roadmap);
    SameDirCorridor sd;
    check_instance(sd.plan, sd.roadmap);
    HeadOnCorridor ho;
    check_instance(ho.plan, ho.roadmap);

    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        auto inst = make_instance(static_cast<MapTemplate>(rng() % 4), 9, 9,
                                  4 + static_cast<int>(rng() % 9), rng());
        REQUIRE(inst);
        check_instance(inst->plan, inst->scenario.roadmap);
    }
}

TEST_CASE("compiled vertices are spatially exclusive along every chain") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = make_instance(static_cast<MapTemplate>(rng() % 4), 9, 9,
                                  4 + static_cast<int>(rng() % 9), rng());
        REQUIRE(inst);
        SeAdg g = compile_seadg(inst->plan, inst->scenario.roadmap);
        for (const auto& chain : g.chains)
            for (std::size_t k = 0; k < chain.size(); ++k) {
                CHECK(spatially_exclusive(chain[k].start_vertex, chain[k].goal_vertex,
                                          inst->scenario.roadmap));
                if (k > 0) CHECK(chain[k].start_vertex == chain[k - 1].goal_vertex);
            }
    }
}

TEST_CASE("invalid plans are rejected by the compiler") {
    Roadmap rm = grid_roadmap(3, 1);
    CHECK_THROWS_AS(compile_seadg(plan_from_paths({{0, 2}}), rm), std::invalid_argument);
    CHECK_THROWS_AS(compile_seadg(plan_from_paths({{0, 1}, {2, 1}}), rm), std::invalid_argument);
}

TEST_CASE("acyclicity") {
    SUBCASE("empty graph") { CHECK(is_acyclic(SeAdg{})); }
    SUBCASE("two-vertex cycle") {
        SeAdg g = synthetic_graph(2, {{0, 1}, {1, 0}});
        CHECK_FALSE(is_acyclic(g));
    }
    SUBCASE("compiled crossing fixture") {
        Crossing4 fx;
        CHECK(is_acyclic(compile_seadg(fx.plan, fx.roadmap)));
    }
    SUBCASE("synchronized rotation is cyclic") {
        Rotation4 fx;
        CHECK_FALSE(is_acyclic(compile_seadg(fx.plan, fx.roadmap)));
    }
}

TEST_CASE("execution policy gating") {
    PlusCrossing fx;
    SeAdg g = compile_seadg(fx.plan, fx.roadmap);
    // inter edge: (agent1,1) -> (agent0,1)
    SUBCASE("fresh fronts without inbound dependencies are executable") {
        auto exec = executable_vertices(g);
        CHECK(std::set<VertexRef>(exec.begin(), exec.end()) ==
              std::set<VertexRef>{{0, 0}, {1, 0}});
    }
    SUBCASE("vertex behind an incomplete dependency is not executable") {
        mark_status(g, {0, 0}, Status::InProgress);
        mark_status(g, {0, 0}, Status::Completed);
        auto exec = executable_vertices(g);
        // (0,1) waits for (1,1); only agent 1's front is executable
        CHECK(std::set<VertexRef>(exec.begin(), exec.end()) == std::set<VertexRef>{{1, 0}});
    }
    SUBCASE("dependency on an in-progress vertex still blocks") {
        mark_status(g, {0, 0}, Status::InProgress);
        mark_status(g, {0, 0}, Status::Completed);
        mark_status(g, {1, 0}, Status::InProgress);
        mark_status(g, {1, 0}, Status::Completed);
        mark_status(g, {1, 1}, Status::InProgress);
        auto exec = executable_vertices(g);
        CHECK(exec.empty());  // (0,1) blocked until (1,1) completes
        mark_status(g, {1, 1}, Status::Completed);
        exec = executable_vertices(g);
        CHECK(std::set<VertexRef>(exec.begin(), exec.end()) == std::set<VertexRef>{{0, 1}});
    }
}

TEST_CASE("status transitions are guarded") {
    PlusCrossing fx;
    SeAdg g = compile_seadg(fx.plan, fx.roadmap);
    SUBCASE("legal ladder") {
        mark_status(g, {1, 0}, Status::InProgress);
        mark_status(g, {1, 0}, Status::Completed);
        CHECK(g.at({1, 0}).status == Status::Completed);
    }
    SUBCASE("blocked start rejected") {
        // (0,1) has an incomplete inter dependency and an incomplete chain
        CHECK_THROWS_AS(mark_status(g, {0, 1}, Status::InProgress), std::logic_error);
    }
    SUBCASE("illegal transitions rejected") {
        CHECK_THROWS_AS(mark_status(g, {0, 0}, Status::Completed), std::logic_error);
        mark_status(g, {0, 0}, Status::InProgress);
        mark_status(g, {0, 0}, Status::Completed);
        CHECK_THROWS_AS(mark_status(g, {0, 0}, Status::Staged), std::logic_error);
        CHECK_THROWS_AS(mark_status(g, {0, 0}, Status::InProgress), std::logic_error);
    }
}

TEST_CASE("blocked follower stays blocked while the leader is delayed") {
    // Same-direction corridor: follower A's moves depend on leader B's.
    SameDirCorridor fx;
    SeAdg g = compile_seadg(fx.plan, fx.roadmap);
    mark_status(g, {1, 0}, Status::InProgress);  // leader crawls, stays in-progress
    auto exec = executable_vertices(g);
    // A's first contested move (0-based index 0) depends on B's completion
    CHECK(std::find(exec.begin(), exec.end(), VertexRef{0, 0}) == exec.end());
}

TEST_CASE("dot export lists every vertex and edge") {
    Crossing4 fx;
    SeAdg g = compile_seadg(fx.plan, fx.roadmap);
    std::string dot = to_dot(g);
    std::size_t arrows = 0;
    for (std::size_t pos = dot.find("->"); pos != std::string::npos; pos = dot.find("->", pos + 1))
        ++arrows;
    CHECK(arrows == g.edges.size());
    CHECK(dot.find("digraph") == 0);
}
