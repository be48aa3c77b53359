#include "sadg/maps.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sadg {

const char* to_string(MapTemplate t) {
    switch (t) {
        case MapTemplate::Warehouse: return "warehouse";
        case MapTemplate::FullMaze: return "full-maze";
        case MapTemplate::HalfMaze: return "half-maze";
        case MapTemplate::Islands: return "islands";
    }
    return "?";
}

MapTemplate map_template_from_string(const std::string& name) {
    if (name == "warehouse") return MapTemplate::Warehouse;
    if (name == "full-maze" || name == "full_maze") return MapTemplate::FullMaze;
    if (name == "half-maze" || name == "half_maze") return MapTemplate::HalfMaze;
    if (name == "islands") return MapTemplate::Islands;
    throw std::invalid_argument("unknown map template '" + name + "'");
}

Roadmap generate_map(MapTemplate t, int width, int height) {
    if (width < 3 || height < 3 || width > 64 || height > 64)
        throw std::invalid_argument("generate_map: dims must be within 3..64");
    Roadmap rm;
    auto id = [&](int x, int y) { return y * width + x; };
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            rm.labels.push_back(std::to_string(id(x, y)));
            rm.coords.push_back({static_cast<double>(x), static_cast<double>(y)});
        }
    auto v_edge = [&](int x, int y) { rm.edges.emplace_back(id(x, y), id(x, y + 1)); };
    auto h_edge = [&](int x, int y) { rm.edges.emplace_back(id(x, y), id(x + 1, y)); };

    switch (t) {
        case MapTemplate::Warehouse:
            // Vertical aisles everywhere, cross-aisles every other row.
            for (int x = 0; x < width; ++x)
                for (int y = 0; y + 1 < height; ++y) v_edge(x, y);
            for (int y = 0; y < height; y += 2)
                for (int x = 0; x + 1 < width; ++x) h_edge(x, y);
            break;
        case MapTemplate::FullMaze:
            for (int x = 0; x < width; ++x)
                for (int y = 0; y + 1 < height; ++y) v_edge(x, y);
            for (int y = 0; y < height; ++y) {
                if (y % 4 != 0 && y != height - 1) continue;
                for (int x = 0; x + 1 < width; ++x) h_edge(x, y);
            }
            break;
        case MapTemplate::HalfMaze:
            // Long parallel corridors joined only at the ends.
            for (int x = 0; x < width; ++x)
                for (int y = 0; y + 1 < height; ++y) v_edge(x, y);
            for (int x = 0; x + 1 < width; ++x) {
                h_edge(x, 0);
                h_edge(x, height - 1);
            }
            break;
        case MapTemplate::Islands: {
            // Dense 3x3-ish blocks joined by single bridges; the sparsest family.
            int nbx = std::max(1, width / 3), nby = std::max(1, height / 3);
            auto block_range = [](int b, int nb, int extent) {
                int lo = b * 3;
                int hi = (b == nb - 1) ? extent - 1 : lo + 2;
                return std::pair<int, int>{lo, hi};
            };
            for (int by = 0; by < nby; ++by)
                for (int bx = 0; bx < nbx; ++bx) {
                    auto [x0, x1] = block_range(bx, nbx, width);
                    auto [y0, y1] = block_range(by, nby, height);
                    int ym = (y0 + y1) / 2;
                    for (int x = x0; x <= x1; ++x)
                        for (int y = y0; y < y1; ++y) v_edge(x, y);
                    for (int x = x0; x < x1; ++x) h_edge(x, ym);
                    if (bx + 1 < nbx) h_edge(x1, ym);                       // bridge right
                    if (by + 1 < nby) v_edge((x0 + x1) / 2, y1);            // bridge down
                }
            break;
        }
    }
    rm.finalize();
    return rm;
}

Scenario make_scenario(MapTemplate t, int width, int height, int fleet, std::uint64_t seed,
                       const DelayModel& delay, double horizon, double control_period) {
    Scenario sc;
    sc.roadmap = generate_map(t, width, height);
    if (fleet < 1 || fleet > sc.roadmap.vertex_count())
        throw std::invalid_argument("make_scenario: fleet does not fit the map");
    std::vector<int> ids(sc.roadmap.vertex_count());
    std::iota(ids.begin(), ids.end(), 0);
    std::mt19937_64 rng(seed);
    auto draw = [&](std::vector<int>& pool, int n) {
        std::vector<int> out;
        for (int i = 0; i < n; ++i) {
            int j = i + static_cast<int>(rng() % (pool.size() - i));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    };
    std::vector<int> starts = draw(ids, fleet);
    std::vector<int> pool2(sc.roadmap.vertex_count());
    std::iota(pool2.begin(), pool2.end(), 0);
    std::vector<int> goals = draw(pool2, fleet);
    for (int a = 0; a < fleet; ++a)
        sc.agents.push_back({"agv" + std::to_string(a), starts[a], goals[a]});
    sc.delay_model = delay;
    sc.horizon = horizon;
    sc.control_period = control_period;
    sc.seed = seed;
    sc.validate();
    return sc;
}

std::optional<Instance> make_instance(MapTemplate t, int width, int height, int fleet,
                                      std::uint64_t seed, const DelayModel& delay, double horizon,
                                      double control_period) {
    std::uint64_t s = seed;
    for (int attempt = 0; attempt < 20; ++attempt, s = s * 0x100000001B3ull + 0x9E3779B9ull) {
        Scenario sc = make_scenario(t, width, height, fleet, s, delay, horizon, control_period);
        auto plan = plan_with_restarts(sc, s);
        if (plan) return Instance{std::move(sc), std::move(*plan)};
    }
    return std::nullopt;
}

}  // namespace sadg
