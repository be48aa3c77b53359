#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "sadg/experiment.hpp"
#include "sadg/optimizer.hpp"

namespace fs = std::filesystem;
using namespace sadg;

namespace {

void dump(const std::string& path, const std::string& text) {
    fs::create_directories(fs::path(path).parent_path().empty()
                               ? "."
                               : fs::path(path).parent_path().string());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

int cmd_plan(const std::string& scenario_path, const std::string& out, std::uint64_t seed,
             int restarts) {
    Scenario sc = load_scenario(scenario_path);
    for (const auto& w : sc.warnings) std::cerr << "warning: " << w << "\n";
    PlannerLimits limits;
    limits.max_restarts = restarts;
    PlanFailure failure;
    auto plan = plan_with_restarts(sc, seed, limits, &failure);
    if (!plan) {
        std::cerr << "planning failed: " << failure.reason << "\n";
        return 1;
    }
    dump(out, plan_to_json(*plan, sc));
    std::cout << "plan written to " << out << " (makespan " << plan->makespan() << " steps)\n";
    return 0;
}

int cmd_compile(const std::string& scenario_path, const std::string& plan_path,
                const std::string& out_dir, std::uint64_t seed) {
    Scenario sc = load_scenario(scenario_path);
    MapfPlan plan;
    if (!plan_path.empty()) {
        plan = load_plan(plan_path, sc);
        auto report = validate_plan(plan, sc);
        if (!report.ok()) {
            std::cerr << "plan invalid: " << report.summary() << "\n";
            return 1;
        }
    } else {
        auto generated = plan_with_restarts(sc, seed);
        if (!generated) {
            std::cerr << "planning failed\n";
            return 1;
        }
        plan = *generated;
    }
    fs::create_directories(out_dir);
    SeAdg g = compile_seadg(plan, sc.roadmap);
    dump(out_dir + "/seadg.dot", to_dot(g));
    Sadg s = compile_sadg(plan, sc.roadmap);
    dump(out_dir + "/sadg.dot", to_dot(s));
    DurationModel d = DurationModel::nominal(s.skeleton, sc.step_duration());
    std::vector<int> free;
    for (int gid = 0; gid < s.group_count(); ++gid) free.push_back(gid);
    dump(out_dir + "/instance.lp", write_milp(s, d, s.zero(), free));
    std::cout << "vertices: " << g.vertex_count() << ", edges: " << g.edges.size()
              << ", switchable groups: " << s.group_count() << "\n"
              << "wrote seadg.dot, sadg.dot, instance.lp to " << out_dir << "\n";
    return 0;
}

int cmd_run(const std::string& scenario_path, const std::string& plan_path,
            const std::string& mode_name, double horizon, double period, std::uint64_t seed,
            const std::string& out_dir) {
    Scenario sc = load_scenario(scenario_path);
    if (seed != 0) sc.seed = seed;
    MapfPlan plan;
    if (!plan_path.empty()) {
        plan = load_plan(plan_path, sc);
    } else {
        auto generated = plan_with_restarts(sc, sc.seed);
        if (!generated) {
            std::cerr << "planning failed\n";
            return 1;
        }
        plan = *generated;
    }
    RunOptions opt;
    if (horizon > 0) opt.horizon_override = horizon;
    if (period > 0) opt.period_override = period;
    EpisodeResult res = run_episode(sc, plan, mode_from_string(mode_name), opt);

    std::ostringstream summary;
    summary << "{\n  \"completed\": " << (res.completed ? "true" : "false")
            << ",\n  \"deadlock_suspected\": " << (res.deadlock_suspected ? "true" : "false")
            << ",\n  \"collision\": " << (res.collision ? "true" : "false")
            << ",\n  \"sum_completion\": " << res.sum_completion
            << ",\n  \"makespan\": " << res.makespan
            << ",\n  \"nominal_makespan\": " << res.nominal_makespan
            << ",\n  \"solve_count\": " << res.solve_count << ",\n  \"ticks\": " << res.ticks
            << "\n}\n";
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        dump(out_dir + "/events.jsonl", res.log.to_jsonl());
        dump(out_dir + "/episode.json", summary.str());
    }
    std::cout << summary.str();
    if (!res.failure_detail.empty()) std::cerr << res.failure_detail << "\n";
    return res.ok() ? 0 : 1;
}

int cmd_experiment(const std::string& map_name, int width, int height,
                   const std::vector<int>& fleets, const std::string& variant,
                   const std::vector<double>& delays, const std::vector<double>& fractions,
                   const std::vector<std::string>& mode_names, int reps, std::uint64_t seed,
                   double horizon, double period, const std::string& out_dir, int jobs) {
    ExperimentSpec spec;
    spec.repetitions = reps;
    spec.seed_base = seed;
    spec.jobs = jobs;
    for (const auto& m : mode_names) spec.modes.push_back(mode_from_string(m));
    if (spec.modes.empty()) spec.modes = {Mode::Adg, Mode::Rhc};
    else if (spec.modes.size() < 2)
        throw std::runtime_error("experiment needs at least two modes (baseline first)");

    MapTemplate map = map_template_from_string(map_name);
    for (int fleet : fleets) {
        auto add_cell = [&](const DelayModel& dm) {
            ExperimentCell cell;
            cell.map = map;
            cell.width = width;
            cell.height = height;
            cell.fleet = fleet;
            cell.delay = dm;
            cell.horizon = horizon;
            cell.control_period = period;
            spec.cells.push_back(cell);
        };
        if (variant == "stall") {
            for (double d : delays)
                for (double f : fractions) add_cell(DelayModel::stall(d, f));
        } else if (variant == "velocity") {
            add_cell(DelayModel::velocity_default());
        } else if (variant == "none") {
            add_cell(DelayModel::none());
        } else {
            throw std::runtime_error("unknown delay variant '" + variant + "'");
        }
    }

    ExperimentResults res = run_experiment(spec);
    write_outputs(res, out_dir);
    std::cout << summary_json(res);
    std::cout << "outputs written to " << out_dir << "\n";
    return res.failures.empty() ? 0 : 1;
}

int cmd_verify(int count, std::uint64_t seed, int jobs) {
    // Compilation equivalence and solver-versus-oracle cross-checks on
    // random instances.
    (void)jobs;
    std::mt19937_64 rng(seed);
    int b0_checked = 0, solver_checked = 0;
    for (int i = 0; i < count; ++i) {
        MapTemplate map = static_cast<MapTemplate>(rng() % 4);
        int fleet = 4 + static_cast<int>(rng() % 6);
        auto inst = make_instance(map, 9, 9, fleet, rng());
        if (!inst) continue;
        SeAdg direct = compile_seadg(inst->plan, inst->scenario.roadmap);
        Sadg s = compile_sadg(inst->plan, inst->scenario.roadmap);
        if (realize(s, s.zero()).edges != direct.edges) {
            std::cerr << "FAIL: zero-vector realization differs from direct compilation\n";
            return 1;
        }
        ++b0_checked;

        DurationModel d = DurationModel::nominal(s.skeleton, inst->scenario.step_duration());
        for (auto& row : d.t_est)
            for (double& t : row) t *= 1.0 + static_cast<double>(rng() % 200) / 100.0;
        std::vector<int> free;
        for (int g = 0; g < s.group_count() && g < 12; ++g) free.push_back(g);
        SolveResult bb = solve(s, d, s.zero(), free);
        SolveResult oracle = oracle_solve(s, d, s.zero(), free);
        if (bb.cost != oracle.cost) {
            std::cerr << "FAIL: branch-and-bound cost " << bb.cost << " != oracle cost "
                      << oracle.cost << "\n";
            return 1;
        }
        ++solver_checked;
    }
    std::cout << "verify: " << b0_checked << " zero-vector equivalence checks, " << solver_checked
              << " solver-vs-oracle checks, all passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Switchable dependency-graph plan execution for AGV fleets"};
    app.require_subcommand(1);

    std::string scenario_path, plan_path, out = "plan.json", out_dir = "out", mode = "rhc";
    std::string map_name = "warehouse", variant = "stall";
    std::uint64_t seed = 1;
    int restarts = 10, width = 9, height = 9, reps = 10, jobs = 1, count = 25;
    double horizon = 0.0, period = 0.0;
    std::vector<int> fleets{10};
    std::vector<double> delays{10.0}, fractions{0.2};
    std::vector<std::string> mode_names;

    auto* plan_cmd = app.add_subcommand("plan", "generate a plan for a scenario");
    plan_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    plan_cmd->add_option("--out", out, "output plan file");
    plan_cmd->add_option("--seed", seed, "restart shuffle seed");
    plan_cmd->add_option("--restarts", restarts, "max priority-order restarts");

    auto* compile_cmd = app.add_subcommand("compile", "compile a plan to DOT exports");
    compile_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    compile_cmd->add_option("--plan", plan_path, "plan JSON file (generated when omitted)");
    compile_cmd->add_option("--out", out_dir, "output directory");
    compile_cmd->add_option("--seed", seed, "planner seed when generating");

    auto* run_cmd = app.add_subcommand("run", "run a single episode");
    run_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run_cmd->add_option("--plan", plan_path, "plan JSON file (generated when omitted)");
    run_cmd->add_option("--mode", mode, "adg|shc|rhc");
    run_cmd->add_option("--horizon", horizon, "horizon H in seconds (overrides scenario)");
    run_cmd->add_option("--period", period, "control period h in seconds (overrides scenario)");
    run_cmd->add_option("--seed", seed, "episode seed (overrides scenario)");
    run_cmd->add_option("--out", out_dir, "output directory for logs");

    auto* exp_cmd = app.add_subcommand("experiment", "run an experiment grid");
    exp_cmd->add_option("--map", map_name, "warehouse|full-maze|half-maze|islands");
    exp_cmd->add_option("--width", width, "map width");
    exp_cmd->add_option("--height", height, "map height");
    exp_cmd->add_option("--fleet", fleets, "fleet sizes");
    exp_cmd->add_option("--variant", variant, "stall|velocity|none");
    exp_cmd->add_option("--delay", delays, "stall periods in seconds");
    exp_cmd->add_option("--fraction", fractions, "stalled fleet fractions");
    exp_cmd->add_option("--mode", mode_names, "modes, baseline first (default adg rhc)");
    exp_cmd->add_option("--reps", reps, "repetitions per cell");
    exp_cmd->add_option("--seed", seed, "seed base");
    exp_cmd->add_option("--horizon", horizon, "horizon H in seconds")->default_val(5.0);
    exp_cmd->add_option("--period", period, "control period h in seconds")->default_val(2.0);
    exp_cmd->add_option("--out", out_dir, "output directory");
    exp_cmd->add_option("--jobs", jobs, "parallel workers");

    auto* verify_cmd = app.add_subcommand("verify", "oracle cross-checks on random instances");
    verify_cmd->add_option("--count", count, "instances to check");
    verify_cmd->add_option("--seed", seed, "instance seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan_cmd->parsed()) return cmd_plan(scenario_path, out, seed, restarts);
        if (compile_cmd->parsed()) return cmd_compile(scenario_path, plan_path, out_dir, seed);
        if (run_cmd->parsed())
            return cmd_run(scenario_path, plan_path, mode, horizon, period, seed, out_dir);
        if (exp_cmd->parsed())
            return cmd_experiment(map_name, width, height, fleets, variant, delays, fractions,
                                  mode_names, reps, seed, horizon, period, out_dir, jobs);
        if (verify_cmd->parsed()) return cmd_verify(count, seed, jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
