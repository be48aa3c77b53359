#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sadg/mapf.hpp"
#include "sadg/roadmap.hpp"

namespace sadg {

enum class MapTemplate { Warehouse, FullMaze, HalfMaze, Islands };

const char* to_string(MapTemplate t);
MapTemplate map_template_from_string(const std::string& name);

/// Deterministic unit-pitch grid roadmaps; corridor density decreases from
/// warehouse to islands. Supported dims: 3..64 per side.
Roadmap generate_map(MapTemplate t, int width, int height);

/// Scenario on a generated map with seeded distinct starts and goals.
Scenario make_scenario(MapTemplate t, int width, int height, int fleet, std::uint64_t seed,
                       const DelayModel& delay = DelayModel::none(), double horizon = 5.0,
                       double control_period = 2.0);

struct Instance {
    Scenario scenario;
    MapfPlan plan;
};

/// Scenario plus a valid plan whose dependency graph is acyclic; retries
/// with derived seeds when planning fails. Deterministic per seed.
std::optional<Instance> make_instance(MapTemplate t, int width, int height, int fleet,
                                      std::uint64_t seed,
                                      const DelayModel& delay = DelayModel::none(),
                                      double horizon = 5.0, double control_period = 2.0);

}  // namespace sadg
