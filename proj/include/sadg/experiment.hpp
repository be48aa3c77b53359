#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sadg/maps.hpp"
#include "sadg/simulator.hpp"

namespace sadg {

/// Percentage reduction in cumulative completion time versus the baseline:
/// (base - ours) / base * 100. Throws on nonpositive base.
double compute_improvement(double base, double ours);

double mean_of(const std::vector<double>& xs);
double stddev_of(const std::vector<double>& xs);  // sample, n-1
double percentile_of(std::vector<double> xs, double p);

/// Fraction of seeded bootstrap resamples in which mean(a) > mean(b).
double bootstrap_prob_mean_greater(const std::vector<double>& a, const std::vector<double>& b,
                                   int resamples, std::uint64_t seed);

struct ExperimentCell {
    MapTemplate map = MapTemplate::Warehouse;
    int width = 9, height = 9;
    int fleet = 10;
    DelayModel delay;
    double horizon = 5.0;
    double control_period = 2.0;

    std::string key() const;
};

struct ExperimentSpec {
    std::vector<ExperimentCell> cells;
    std::vector<Mode> modes{Mode::Adg, Mode::Rhc};  // first is the baseline
    int repetitions = 1;
    std::uint64_t seed_base = 1;
    int jobs = 1;
    double tick = 0.1;
    long node_budget = 100000;
};

struct EpisodeRow {
    int cell = 0;
    int repetition = 0;
    std::uint64_t seed = 0;
    Mode mode = Mode::Adg;
    bool completed = false;
    bool deadlock = false;
    double sum_completion = 0.0;
    double makespan = 0.0;
    int solve_count = 0;
    long ticks = 0;
};

struct PairRow {
    int cell = 0;
    int repetition = 0;
    std::uint64_t seed = 0;
    Mode mode = Mode::Rhc;  // compared against the baseline mode
    double sum_baseline = 0.0;
    double sum_mode = 0.0;
    bool baseline_deadlock = false;
    bool mode_deadlock = false;
    std::optional<double> improvement;  // defined when both episodes completed
};

struct CellStats {
    int cell = 0;
    Mode mode = Mode::Rhc;
    int pairs = 0;
    int defined = 0;
    int deadlock_both = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct ExperimentResults {
    std::vector<ExperimentCell> cells;
    std::vector<EpisodeRow> episodes;
    std::vector<PairRow> pairs;
    std::vector<CellStats> stats;
    std::vector<double> solve_wall_times;  // pooled, non-deterministic
    std::vector<double> planning_times;    // per task, non-deterministic
    std::vector<std::string> failures;     // tasks that could not produce an instance
};

/// Runs every (cell, repetition, mode) episode; scenario and plan depend on
/// (map, fleet, repetition) only so delay cells share instances, while delay
/// draws depend on the full cell key. Episode-parallel, deterministically
/// aggregated.
ExperimentResults run_experiment(const ExperimentSpec& spec);

std::string episodes_csv(const ExperimentResults& r);
std::string improvements_csv(const ExperimentResults& r);
std::string summary_json(const ExperimentResults& r);
std::string timing_json(const ExperimentResults& r);

/// episodes.csv, improvements.csv, summary.json (deterministic) and
/// timing.json (wall-clock, excluded from determinism guarantees).
void write_outputs(const ExperimentResults& r, const std::string& out_dir);

/// Per-pair improvements of one cell against the baseline mode; undefined
/// pairs are skipped.
std::vector<double> cell_improvements(const ExperimentResults& r, int cell, Mode mode);

}  // namespace sadg
