#include "sadg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sadg {

double compute_improvement(double base, double ours) {
    if (!(base > 0.0)) throw std::invalid_argument("compute_improvement: base must be > 0");
    return (base - ours) / base * 100.0;
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean_of(xs), s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double percentile_of(std::vector<double> xs, double p) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    double idx = p / 100.0 * static_cast<double>(xs.size() - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, xs.size() - 1);
    double frac = idx - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

double bootstrap_prob_mean_greater(const std::vector<double>& a, const std::vector<double>& b,
                                   int resamples, std::uint64_t seed) {
    if (a.empty() || b.empty()) return 0.0;
    std::mt19937_64 rng(seed);
    int wins = 0;
    for (int r = 0; r < resamples; ++r) {
        double ma = 0.0, mb = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) ma += a[rng() % a.size()];
        for (std::size_t i = 0; i < b.size(); ++i) mb += b[rng() % b.size()];
        if (ma / static_cast<double>(a.size()) > mb / static_cast<double>(b.size())) ++wins;
    }
    return static_cast<double>(wins) / static_cast<double>(resamples);
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string delay_desc(const DelayModel& d) {
    switch (d.variant) {
        case DelayVariant::None: return "none";
        case DelayVariant::StallSubset:
            return "stall:" + fmt(d.period) + ":" + fmt(d.fraction);
        case DelayVariant::VelocitySampling: {
            std::string s = "velocity";
            for (const auto& c : d.components)
                s += ":" + fmt(c.weight) + "," + fmt(c.mean) + "," + fmt(c.stddev);
            return s;
        }
    }
    return "?";
}

}  // namespace

std::string ExperimentCell::key() const {
    std::ostringstream os;
    os << to_string(map) << ":" << width << "x" << height << ":f" << fleet << ":"
       << delay_desc(delay) << ":H" << fmt(horizon) << ":h" << fmt(control_period);
    return os.str();
}

ExperimentResults run_experiment(const ExperimentSpec& spec) {
    if (spec.repetitions < 1) throw std::invalid_argument("run_experiment: repetitions >= 1");
    if (spec.modes.size() < 2)
        throw std::invalid_argument("run_experiment: at least two modes (baseline first)");

    ExperimentResults out;
    out.cells = spec.cells;

    struct Task {
        int cell;
        int rep;
    };
    std::vector<Task> tasks;
    for (int c = 0; c < static_cast<int>(spec.cells.size()); ++c)
        for (int r = 0; r < spec.repetitions; ++r) tasks.push_back({c, r});

    struct TaskOut {
        std::vector<EpisodeRow> episodes;
        std::vector<PairRow> pairs;
        std::vector<double> walls;
        double planning = 0.0;
        std::string failure;
    };
    std::vector<TaskOut> results(tasks.size());

    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& task = tasks[i];
            const ExperimentCell& cell = spec.cells[task.cell];
            TaskOut& to = results[i];

            // Instance seed ignores the delay parameters so delay sweeps
            // share scenarios and plans; delay draws use the full cell key.
            std::ostringstream inst_key;
            inst_key << to_string(cell.map) << ":" << cell.width << "x" << cell.height << ":f"
                     << cell.fleet << ":r" << task.rep;
            std::uint64_t inst_seed = spec.seed_base ^ fnv1a(inst_key.str());
            std::uint64_t delay_seed =
                spec.seed_base ^ fnv1a(cell.key() + ":r" + std::to_string(task.rep));

            auto t0 = std::chrono::steady_clock::now();
            auto instance = make_instance(cell.map, cell.width, cell.height, cell.fleet,
                                          inst_seed, cell.delay, cell.horizon,
                                          cell.control_period);
            to.planning =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (!instance) {
                to.failure = "cell " + cell.key() + " rep " + std::to_string(task.rep) +
                             ": no valid plan found";
                continue;
            }

            RunOptions ro;
            ro.tick = spec.tick;
            ro.node_budget = spec.node_budget;
            ro.delay_seed = delay_seed;
            ro.keep_log = false;

            std::vector<EpisodeResult> per_mode;
            for (Mode mode : spec.modes) {
                EpisodeResult er = run_episode(instance->scenario, instance->plan, mode, ro);
                if (er.collision)
                    throw std::logic_error("collision during experiment: " + er.failure_detail);
                EpisodeRow row;
                row.cell = task.cell;
                row.repetition = task.rep;
                row.seed = delay_seed;
                row.mode = mode;
                row.completed = er.completed;
                row.deadlock = er.deadlock_suspected;
                row.sum_completion = er.sum_completion;
                row.makespan = er.makespan;
                row.solve_count = er.solve_count;
                row.ticks = er.ticks;
                to.episodes.push_back(row);
                to.walls.insert(to.walls.end(), er.solve_wall_times.begin(),
                                er.solve_wall_times.end());
                per_mode.push_back(std::move(er));
            }
            for (std::size_t m = 1; m < spec.modes.size(); ++m) {
                PairRow pr;
                pr.cell = task.cell;
                pr.repetition = task.rep;
                pr.seed = delay_seed;
                pr.mode = spec.modes[m];
                pr.sum_baseline = per_mode[0].sum_completion;
                pr.sum_mode = per_mode[m].sum_completion;
                pr.baseline_deadlock = per_mode[0].deadlock_suspected;
                pr.mode_deadlock = per_mode[m].deadlock_suspected;
                if (per_mode[0].completed && per_mode[m].completed)
                    pr.improvement =
                        compute_improvement(pr.sum_baseline, pr.sum_mode);
                to.pairs.push_back(pr);
            }
        }
    };

    int jobs = std::max(1, spec.jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (auto& to : results) {
        out.episodes.insert(out.episodes.end(), to.episodes.begin(), to.episodes.end());
        out.pairs.insert(out.pairs.end(), to.pairs.begin(), to.pairs.end());
        out.solve_wall_times.insert(out.solve_wall_times.end(), to.walls.begin(), to.walls.end());
        out.planning_times.push_back(to.planning);
        if (!to.failure.empty()) out.failures.push_back(to.failure);
    }

    for (int c = 0; c < static_cast<int>(spec.cells.size()); ++c)
        for (std::size_t m = 1; m < spec.modes.size(); ++m) {
            CellStats st;
            st.cell = c;
            st.mode = spec.modes[m];
            std::vector<double> imps;
            for (const auto& pr : out.pairs) {
                if (pr.cell != c || pr.mode != spec.modes[m]) continue;
                ++st.pairs;
                if (pr.baseline_deadlock && pr.mode_deadlock) ++st.deadlock_both;
                if (pr.improvement) imps.push_back(*pr.improvement);
            }
            st.defined = static_cast<int>(imps.size());
            st.mean = mean_of(imps);
            st.stddev = stddev_of(imps);
            out.stats.push_back(st);
        }
    return out;
}

std::vector<double> cell_improvements(const ExperimentResults& r, int cell, Mode mode) {
    std::vector<double> out;
    for (const auto& pr : r.pairs)
        if (pr.cell == cell && pr.mode == mode && pr.improvement) out.push_back(*pr.improvement);
    return out;
}

namespace {

std::string cell_fields(const ExperimentCell& c) {
    std::ostringstream os;
    os << to_string(c.map) << "," << c.width << "," << c.height << "," << c.fleet << ",";
    switch (c.delay.variant) {
        case DelayVariant::None: os << "none,0.000000,0.000000"; break;
        case DelayVariant::StallSubset:
            os << "stall," << fmt(c.delay.period) << "," << fmt(c.delay.fraction);
            break;
        case DelayVariant::VelocitySampling: os << "velocity,0.000000,0.000000"; break;
    }
    os << "," << fmt(c.horizon) << "," << fmt(c.control_period);
    return os.str();
}

}  // namespace

std::string episodes_csv(const ExperimentResults& r) {
    std::ostringstream os;
    os << "map,width,height,fleet,delay_variant,delay_period,delay_fraction,horizon,"
          "control_period,repetition,seed,mode,completed,deadlock,sum_completion,makespan,"
          "solve_count,ticks\n";
    for (const auto& row : r.episodes)
        os << cell_fields(r.cells[row.cell]) << "," << row.repetition << "," << row.seed << ","
           << to_string(row.mode) << "," << (row.completed ? 1 : 0) << ","
           << (row.deadlock ? 1 : 0) << "," << fmt(row.sum_completion) << ","
           << fmt(row.makespan) << "," << row.solve_count << "," << row.ticks << "\n";
    return os.str();
}

std::string improvements_csv(const ExperimentResults& r) {
    std::ostringstream os;
    os << "map,width,height,fleet,delay_variant,delay_period,delay_fraction,horizon,"
          "control_period,repetition,seed,mode,sum_baseline,sum_mode,baseline_deadlock,"
          "mode_deadlock,improvement_pct\n";
    for (const auto& pr : r.pairs)
        os << cell_fields(r.cells[pr.cell]) << "," << pr.repetition << "," << pr.seed << ","
           << to_string(pr.mode) << "," << fmt(pr.sum_baseline) << "," << fmt(pr.sum_mode) << ","
           << (pr.baseline_deadlock ? 1 : 0) << "," << (pr.mode_deadlock ? 1 : 0) << ","
           << (pr.improvement ? fmt(*pr.improvement) : "") << "\n";
    return os.str();
}

std::string summary_json(const ExperimentResults& r) {
    std::ostringstream os;
    os << "{\n  \"cells\": [\n";
    for (std::size_t i = 0; i < r.stats.size(); ++i) {
        const auto& st = r.stats[i];
        os << "    {\"cell\": \"" << r.cells[st.cell].key() << "\", \"mode\": \""
           << to_string(st.mode) << "\", \"pairs\": " << st.pairs
           << ", \"defined\": " << st.defined << ", \"deadlock_both\": " << st.deadlock_both
           << ", \"mean_improvement\": " << fmt(st.mean) << ", \"stddev\": " << fmt(st.stddev)
           << "}" << (i + 1 < r.stats.size() ? "," : "") << "\n";
    }
    os << "  ],\n  \"failures\": [";
    for (std::size_t i = 0; i < r.failures.size(); ++i)
        os << (i ? ", " : "") << "\"" << r.failures[i] << "\"";
    os << "]\n}\n";
    return os.str();
}

std::string timing_json(const ExperimentResults& r) {
    std::ostringstream os;
    std::vector<double> walls = r.solve_wall_times;
    os << "{\n  \"solve_wall_seconds\": {\"count\": " << walls.size();
    for (double p : {50.0, 90.0, 95.0, 99.0})
        os << ", \"p" << static_cast<int>(p) << "\": " << fmt(percentile_of(walls, p));
    os << ", \"max\": " << fmt(walls.empty() ? 0.0 : *std::max_element(walls.begin(), walls.end()))
       << "},\n  \"planning_seconds\": {\"count\": " << r.planning_times.size()
       << ", \"mean\": " << fmt(mean_of(r.planning_times))
       << ", \"p95\": " << fmt(percentile_of(r.planning_times, 95.0)) << "}\n}\n";
    return os.str();
}

void write_outputs(const ExperimentResults& r, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto dump = [&](const std::string& name, const std::string& text) {
        std::ofstream f(out_dir + "/" + name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out_dir + "/" + name);
        f << text;
    };
    dump("episodes.csv", episodes_csv(r));
    dump("improvements.csv", improvements_csv(r));
    dump("summary.json", summary_json(r));
    dump("timing.json", timing_json(r));
}

}  // namespace sadg
