#include "sadg/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace sadg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double to_unit(std::uint64_t x) { return (x >> 11) * 0x1.0p-53; }

/// Velocity factor for (agent, vertex): mixture component by weight, then a
/// Box-Muller gaussian, clamped below. Keyed hashing keeps draws identical
/// across modes and independent of grant order.
double velocity_factor(const DelayModel& dm, std::uint64_t seed, int agent, int index) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(0x5EEDF00Dull + 0x10001ull * agent) ^
                                 splitmix64(0xC0FFEEull + index));
    double pick = to_unit(h);
    const VelocityComponent* comp = &dm.components.back();
    double acc = 0.0;
    for (const auto& c : dm.components) {
        acc += c.weight;
        if (pick <= acc) {
            comp = &c;
            break;
        }
    }
    double u1 = to_unit(splitmix64(h ^ 0xA5A5A5A5ull));
    double u2 = to_unit(splitmix64(h ^ 0x5A5A5A5Aull));
    u1 = std::max(u1, 1e-12);
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return std::max(dm.min_velocity, comp->mean + comp->stddev * z);
}

/// Stall victims for interval k: partial Fisher-Yates draw, keyed by (seed, k).
std::vector<int> stall_victims(std::uint64_t seed, int interval, int fleet, int count) {
    std::vector<int> ids(fleet);
    for (int i = 0; i < fleet; ++i) ids[i] = i;
    std::uint64_t state = splitmix64(seed ^ (0x57A11ull + interval));
    for (int i = 0; i < count && i < fleet; ++i) {
        state = splitmix64(state);
        int j = i + static_cast<int>(state % (fleet - i));
        std::swap(ids[i], ids[j]);
    }
    ids.resize(std::min(count, fleet));
    std::sort(ids.begin(), ids.end());
    return ids;
}

double angle_diff(double a, double b) {
    double d = std::fmod(a - b, 2.0 * std::numbers::pi);
    if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    if (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
    return std::abs(d);
}

struct MotionSegment {
    double rotate = 0.0;  // radians to turn before translating
    double length = 0.0;  // meters
    Vec2 from, to;
};

struct MotionProgram {
    std::vector<MotionSegment> segments;
    double rotate_time(double rotation_speed) const {
        double r = 0.0;
        for (const auto& s : segments) r += s.rotate / rotation_speed;
        return r;
    }
    double translate_length() const {
        double l = 0.0;
        for (const auto& s : segments) l += s.length;
        return l;
    }
};

/// Executes one movement vertex: distinct waypoint locations traversed as
/// rotate-then-translate segments; waits in the plan are subsumed by the
/// dependency gating.
struct AgvExec {
    int agent = -1;
    Vec2 pos{};
    double heading = 0.0;
    int next_index = 0;   // next chain vertex to request
    int active_index = -1;
    double speed_factor = 1.0;
    std::size_t seg = 0;
    double rotate_left = 0.0;
    double translate_left = 0.0;
    double stalled_until = 0.0;
    double completed_at = -1.0;
};

}  // namespace

std::string CollisionIncident::describe() const {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "agents %d and %d overlap at t=%.3f: (%.3f,%.3f) vs (%.3f,%.3f)", agent_a,
                  agent_b, t, pos_a.x, pos_a.y, pos_b.x, pos_b.y);
    return buf;
}

std::optional<CollisionIncident> collision_monitor(const std::vector<Vec2>& poses,
                                                   double footprint_radius, double t) {
    for (std::size_t a = 0; a < poses.size(); ++a)
        for (std::size_t b = a + 1; b < poses.size(); ++b)
            if (distance(poses[a], poses[b]) < 2.0 * footprint_radius - 1e-9)
                return CollisionIncident{static_cast<int>(a), static_cast<int>(b), poses[a],
                                         poses[b], t};
    return std::nullopt;
}

EpisodeResult run_episode(const Scenario& sc, const MapfPlan& plan, Mode mode,
                          const RunOptions& opt) {
    ValidationReport validity = validate_plan(plan, sc);
    if (!validity.ok())
        throw std::invalid_argument("run_episode: invalid plan: " + validity.summary());

    Sadg sadg = compile_sadg(plan, sc.roadmap);
    const int fleet = sc.agent_count();
    const Roadmap& rm = sc.roadmap;

    // Motion programs per vertex, chaining headings along each agent's route.
    std::vector<std::vector<MotionProgram>> programs(fleet);
    std::vector<double> initial_heading(fleet, 0.0);
    std::vector<std::vector<double>> exact_duration(fleet);
    for (int a = 0; a < fleet; ++a) {
        double heading = 0.0;
        bool heading_set = false;
        for (const auto& v : sadg.skeleton.chains[a]) {
            MotionProgram prog;
            Vec2 prev = rm.coords[v.tuples.front().vertex];
            for (std::size_t k = 1; k < v.tuples.size(); ++k) {
                Vec2 next = rm.coords[v.tuples[k].vertex];
                if (v.tuples[k].vertex == v.tuples[k - 1].vertex) continue;  // wait tuple
                double target = std::atan2(next.y - prev.y, next.x - prev.x);
                if (!heading_set) {
                    heading = target;
                    initial_heading[a] = target;
                    heading_set = true;
                }
                prog.segments.push_back(
                    {angle_diff(target, heading), distance(prev, next), prev, next});
                heading = target;
                prev = next;
            }
            exact_duration[a].push_back(prog.rotate_time(sc.rotation_speed) +
                                        prog.translate_length() / sc.nominal_speed);
            programs[a].push_back(std::move(prog));
        }
    }

    // Delay-free fleet makespan under the dependency gating, used for the
    // deadlock bound.
    DurationModel exact_model;
    exact_model.t_est = exact_duration;
    exact_model.mu.resize(fleet);
    for (int a = 0; a < fleet; ++a) exact_model.mu[a].assign(exact_duration[a].size(), 1.0);
    Schedule nominal =
        earliest_schedule(realize(sadg, sadg.zero()), exact_model, 0.0, kScheduleEpsilon);
    if (nominal.cyclic) throw std::invalid_argument("run_episode: initial graph is cyclic");
    double nominal_makespan = 0.0;
    for (double t : nominal.terminal) nominal_makespan = std::max(nominal_makespan, t);

    ControllerConfig cfg;
    cfg.mode = mode;
    cfg.period = opt.period_override.value_or(sc.control_period);
    cfg.horizon = opt.horizon_override.value_or(sc.horizon);
    cfg.node_budget = opt.node_budget;
    Controller controller(sadg, DurationModel::nominal(sadg.skeleton, sc.step_duration()), cfg);

    EpisodeResult res;
    res.nominal_makespan = nominal_makespan;
    res.completion_times.assign(fleet, 0.0);

    std::vector<AgvExec> agvs(fleet);
    for (int a = 0; a < fleet; ++a) {
        agvs[a].agent = a;
        agvs[a].pos = rm.coords[sc.agents[a].start];
        agvs[a].heading = initial_heading[a];
        if (programs[a].empty()) agvs[a].completed_at = 0.0;
    }

    const double dt = opt.tick;
    const long tick_bound =
        static_cast<long>(std::ceil((opt.makespan_factor * nominal_makespan + 30.0) / dt));
    const std::uint64_t delay_seed = opt.delay_seed.value_or(sc.seed);
    const DelayModel& dm = sc.delay_model;
    int next_interval = 0;

    std::vector<StatusEvent> pending;
    double now = 0.0;

    auto speed_for = [&](int agent, int index) {
        if (dm.variant != DelayVariant::VelocitySampling) return 1.0;
        return velocity_factor(dm, delay_seed, agent, index);
    };

    for (long tick = 0; tick < tick_bound; ++tick) {
        now = tick * dt;

        // Stall-subset model: fresh victims at every interval boundary.
        if (dm.variant == DelayVariant::StallSubset && now >= next_interval * dm.period) {
            int count = static_cast<int>(std::ceil(dm.fraction * fleet));
            for (int a : stall_victims(delay_seed, next_interval, fleet, count))
                agvs[a].stalled_until =
                    std::max(agvs[a].stalled_until, (next_interval + 1) * dm.period);
            ++next_interval;
        }
        for (const auto& stall : opt.scripted_stalls)
            if (stall.from <= now && now < stall.until && stall.agent >= 0 && stall.agent < fleet)
                agvs[stall.agent].stalled_until =
                    std::max(agvs[stall.agent].stalled_until, stall.until);

        // Advance motion.
        for (auto& agv : agvs) {
            if (agv.active_index < 0) continue;
            double t_cursor = now;
            double budget = dt;
            if (agv.stalled_until > t_cursor) {
                double frozen = std::min(budget, agv.stalled_until - t_cursor);
                budget -= frozen;
                t_cursor += frozen;
            }
            MotionProgram& prog = programs[agv.agent][agv.active_index];
            while (budget > 1e-12 && agv.seg < prog.segments.size()) {
                MotionSegment& segment = prog.segments[agv.seg];
                if (agv.rotate_left > 0.0) {
                    double need = agv.rotate_left / sc.rotation_speed;
                    double used = std::min(budget, need);
                    agv.rotate_left -= used * sc.rotation_speed;
                    budget -= used;
                    t_cursor += used;
                    if (agv.rotate_left > 1e-12) break;
                    agv.rotate_left = 0.0;
                    agv.heading = std::atan2(segment.to.y - segment.from.y,
                                             segment.to.x - segment.from.x);
                    continue;
                }
                double speed = sc.nominal_speed * agv.speed_factor;
                double need = agv.translate_left / speed;
                double used = std::min(budget, need);
                agv.translate_left -= used * speed;
                budget -= used;
                t_cursor += used;
                double done = 1.0 - agv.translate_left / segment.length;
                agv.pos = {segment.from.x + (segment.to.x - segment.from.x) * done,
                           segment.from.y + (segment.to.y - segment.from.y) * done};
                if (agv.translate_left > 1e-12) break;
                agv.pos = segment.to;
                ++agv.seg;
                if (agv.seg < prog.segments.size()) {
                    agv.rotate_left = prog.segments[agv.seg].rotate;
                    agv.translate_left = prog.segments[agv.seg].length;
                }
            }
            if (agv.seg >= prog.segments.size()) {
                pending.push_back({{agv.agent, agv.active_index}, Status::Completed});
                if (agv.next_index >= static_cast<int>(programs[agv.agent].size()))
                    agv.completed_at = t_cursor;
                agv.active_index = -1;
            }
        }

        // Independent geometric oracle; does not consult the graph.
        {
            std::vector<Vec2> poses(fleet);
            for (int a = 0; a < fleet; ++a) poses[a] = agvs[a].pos;
            res.collision = collision_monitor(poses, rm.footprint_radius, now);
            if (res.collision) {
                res.failure_detail = res.collision->describe();
                break;
            }
        }

        std::vector<StatusEvent> batch;
        std::swap(batch, pending);
        std::stable_sort(batch.begin(), batch.end(), [](const StatusEvent& a, const StatusEvent& b) {
            return (a.to == Status::Completed) > (b.to == Status::Completed);
        });
        std::vector<VertexRef> grants = controller.step(batch, dt);

        for (auto& agv : agvs) {
            if (agv.active_index >= 0 ||
                agv.next_index >= static_cast<int>(programs[agv.agent].size()))
                continue;
            if (agv.stalled_until > now + dt) continue;  // stopped AGVs do not start vertices
            VertexRef want{agv.agent, agv.next_index};
            if (std::find(grants.begin(), grants.end(), want) == grants.end()) continue;
            agv.active_index = agv.next_index++;
            agv.speed_factor = speed_for(agv.agent, agv.active_index);
            MotionProgram& prog = programs[agv.agent][agv.active_index];
            agv.seg = 0;
            if (!prog.segments.empty()) {
                agv.rotate_left = prog.segments[0].rotate;
                agv.translate_left = prog.segments[0].length;
            }
            pending.push_back({want, Status::InProgress});
        }

        res.ticks = tick + 1;
        bool all_done = true;
        for (const auto& agv : agvs)
            if (agv.completed_at < 0.0) all_done = false;
        if (all_done && pending.empty()) {
            res.completed = true;
            break;
        }
    }

    if (!res.completed && !res.collision) {
        res.deadlock_suspected = true;
        char buf[96];
        std::snprintf(buf, sizeof buf, "tick bound tripped after %.1f s (bound %.1f s)", now,
                      tick_bound * dt);
        res.failure_detail = buf;
    }
    for (int a = 0; a < fleet; ++a) {
        res.completion_times[a] = std::max(agvs[a].completed_at, 0.0);
        res.sum_completion += res.completion_times[a];
        res.makespan = std::max(res.makespan, res.completion_times[a]);
    }
    res.solve_count = static_cast<int>(controller.solve_wall_times().size());
    res.solve_wall_times = controller.solve_wall_times();
    res.b_history = controller.b_history();
    if (opt.keep_log) res.log = controller.log();
    return res;
}

}  // namespace sadg
