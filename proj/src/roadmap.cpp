#include "sadg/roadmap.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "json_util.hpp"

namespace sadg {

using nlohmann::json;
using detail::label_of;
using detail::need;

bool Roadmap::adjacent(int a, int b) const {
    if (a < 0 || a >= vertex_count()) return false;
    const auto& nb = adjacency[a];
    return std::find(nb.begin(), nb.end(), b) != nb.end();
}

int Roadmap::index_of(const std::string& label) const {
    for (int i = 0; i < vertex_count(); ++i)
        if (labels[i] == label) return i;
    return -1;
}

void Roadmap::finalize() {
    if (labels.size() != coords.size())
        throw std::invalid_argument("roadmap: labels/coords size mismatch");
    if (!(footprint_radius > 0.0))
        throw std::invalid_argument("roadmap: footprint_radius must be > 0");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second)
            throw std::invalid_argument("roadmap: duplicate vertex id '" + l + "'");
    adjacency.assign(coords.size(), {});
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= vertex_count() || b >= vertex_count())
            throw std::invalid_argument("roadmap: edge references unknown vertex");
        if (a == b)
            throw std::invalid_argument("roadmap: self-loop edge at '" + labels[a] + "'");
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    }
    for (auto& nb : adjacency) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
}

DelayModel DelayModel::none() { return DelayModel{}; }

DelayModel DelayModel::stall(double period, double fraction) {
    DelayModel m;
    m.variant = DelayVariant::StallSubset;
    m.period = period;
    m.fraction = fraction;
    return m;
}

DelayModel DelayModel::velocity_default() {
    DelayModel m;
    m.variant = DelayVariant::VelocitySampling;
    m.components = {{0.85, 1.0, 0.05}, {0.15, 0.3, 0.05}};
    m.min_velocity = 0.05;
    return m;
}

void Scenario::validate() {
    warnings.clear();
    std::unordered_set<int> starts, goals;
    for (const auto& a : agents) {
        if (a.start < 0 || a.start >= roadmap.vertex_count() || a.goal < 0 ||
            a.goal >= roadmap.vertex_count())
            throw std::invalid_argument("scenario: agent '" + a.label +
                                        "' references unknown vertex");
        if (!starts.insert(a.start).second)
            throw std::invalid_argument("scenario: duplicate start vertex '" +
                                        roadmap.labels[a.start] + "'");
        if (!goals.insert(a.goal).second)
            throw std::invalid_argument("scenario: duplicate goal vertex '" +
                                        roadmap.labels[a.goal] + "'");
    }
    if (!(nominal_speed > 0.0)) throw std::invalid_argument("scenario: nominal_speed must be > 0");
    if (!(rotation_speed > 0.0))
        throw std::invalid_argument("scenario: rotation_speed must be > 0");
    if (!(control_period > 0.0))
        throw std::invalid_argument("scenario: control_period must be > 0");
    if (delay_model.variant == DelayVariant::StallSubset) {
        if (delay_model.fraction < 0.0 || delay_model.fraction > 1.0)
            throw std::invalid_argument("scenario: delay fraction must be in [0,1]");
        if (!(delay_model.period > 0.0))
            throw std::invalid_argument("scenario: delay period must be > 0");
    }
    if (delay_model.variant == DelayVariant::VelocitySampling) {
        double wsum = 0.0;
        for (const auto& c : delay_model.components) {
            if (!(c.mean > 0.0)) throw std::invalid_argument("scenario: velocity mean must be > 0");
            wsum += c.weight;
        }
        if (delay_model.components.empty() || std::abs(wsum - 1.0) > 1e-9)
            throw std::invalid_argument("scenario: velocity mixture weights must sum to 1");
    }
    if (roadmap.vertex_count() <= agent_count())
        warnings.push_back("vertex count does not exceed fleet size; initial graph may be cyclic");
}

bool spatially_exclusive(int a, int b, const Roadmap& r) {
    if (a < 0 || b < 0 || a >= r.vertex_count() || b >= r.vertex_count())
        throw std::invalid_argument("spatially_exclusive: unknown vertex id");
    return distance(r.coords[a], r.coords[b]) > 2.0 * r.footprint_radius;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
    Scenario sc;
    try {
        const json& rm = need(j, "roadmap", origin);
        std::unordered_map<std::string, int> index;
        for (const json& v : need(rm, "vertices", origin + "/roadmap")) {
            if (!v.is_array() || v.size() != 3)
                throw std::runtime_error("vertex entry must be [id, x, y]");
            std::string label = label_of(v[0]);
            if (!index.emplace(label, sc.roadmap.vertex_count()).second)
                throw std::runtime_error("duplicate vertex id '" + label + "'");
            sc.roadmap.labels.push_back(label);
            sc.roadmap.coords.push_back({v[1].get<double>(), v[2].get<double>()});
        }
        for (const json& e : need(rm, "edges", origin + "/roadmap")) {
            if (!e.is_array() || e.size() != 2)
                throw std::runtime_error("edge entry must be [a, b]");
            auto look = [&](const json& id) {
                auto it = index.find(label_of(id));
                if (it == index.end())
                    throw std::runtime_error("edge references unknown vertex '" + label_of(id) +
                                             "'");
                return it->second;
            };
            sc.roadmap.edges.emplace_back(look(e[0]), look(e[1]));
        }
        sc.roadmap.footprint_radius = need(rm, "footprint_radius", origin + "/roadmap").get<double>();
        sc.roadmap.finalize();

        for (const json& a : need(j, "agents", origin)) {
            AgentTask task;
            task.label = label_of(need(a, "id", origin + "/agents"));
            auto look = [&](const json& id, const char* what) {
                auto it = index.find(label_of(id));
                if (it == index.end())
                    throw std::runtime_error("agent '" + task.label + "' " + what +
                                             " references unknown vertex");
                return it->second;
            };
            task.start = look(need(a, "start", origin + "/agents"), "start");
            task.goal = look(need(a, "goal", origin + "/agents"), "goal");
            sc.agents.push_back(std::move(task));
        }

        sc.nominal_speed = need(j, "nominal_speed", origin).get<double>();
        sc.rotation_speed = need(j, "rotation_speed", origin).get<double>();
        sc.control_period = need(j, "control_period", origin).get<double>();
        sc.horizon = need(j, "horizon", origin).get<double>();
        if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();

        const json& dm = need(j, "delay_model", origin);
        std::string variant = need(dm, "variant", origin + "/delay_model").get<std::string>();
        if (variant == "none") {
            sc.delay_model.variant = DelayVariant::None;
        } else if (variant == "stall") {
            sc.delay_model = DelayModel::stall(
                need(dm, "period", origin + "/delay_model").get<double>(),
                need(dm, "fraction", origin + "/delay_model").get<double>());
        } else if (variant == "velocity") {
            sc.delay_model.variant = DelayVariant::VelocitySampling;
            sc.delay_model.components.clear();
            for (const json& c : need(dm, "components", origin + "/delay_model")) {
                sc.delay_model.components.push_back({need(c, "weight", origin).get<double>(),
                                                     need(c, "mean", origin).get<double>(),
                                                     need(c, "stddev", origin).get<double>()});
            }
            if (dm.contains("min_velocity"))
                sc.delay_model.min_velocity = dm["min_velocity"].get<double>();
        } else {
            throw std::runtime_error("unknown delay_model variant '" + variant + "'");
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(origin + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
    sc.validate();
    return sc;
}

std::string scenario_to_json(const Scenario& sc) {
    json rm;
    rm["vertices"] = json::array();
    for (int i = 0; i < sc.roadmap.vertex_count(); ++i)
        rm["vertices"].push_back({sc.roadmap.labels[i], sc.roadmap.coords[i].x,
                                  sc.roadmap.coords[i].y});
    rm["edges"] = json::array();
    for (auto [a, b] : sc.roadmap.edges)
        rm["edges"].push_back({sc.roadmap.labels[a], sc.roadmap.labels[b]});
    rm["footprint_radius"] = sc.roadmap.footprint_radius;

    json agents = json::array();
    for (const auto& a : sc.agents)
        agents.push_back({{"id", a.label},
                          {"start", sc.roadmap.labels[a.start]},
                          {"goal", sc.roadmap.labels[a.goal]}});

    json dm;
    switch (sc.delay_model.variant) {
        case DelayVariant::None:
            dm["variant"] = "none";
            break;
        case DelayVariant::StallSubset:
            dm["variant"] = "stall";
            dm["period"] = sc.delay_model.period;
            dm["fraction"] = sc.delay_model.fraction;
            break;
        case DelayVariant::VelocitySampling: {
            dm["variant"] = "velocity";
            json comps = json::array();
            for (const auto& c : sc.delay_model.components)
                comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"stddev", c.stddev}});
            dm["components"] = comps;
            dm["min_velocity"] = sc.delay_model.min_velocity;
            break;
        }
    }

    json j{{"roadmap", rm},
           {"agents", agents},
           {"nominal_speed", sc.nominal_speed},
           {"rotation_speed", sc.rotation_speed},
           {"control_period", sc.control_period},
           {"horizon", sc.horizon},
           {"delay_model", dm},
           {"seed", sc.seed}};
    return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open scenario file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << scenario_to_json(sc);
}

}  // namespace sadg
