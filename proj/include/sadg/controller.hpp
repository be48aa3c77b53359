#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sadg/optimizer.hpp"

namespace sadg {

enum class Mode { Adg, Shc, Rhc };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& name);

struct StatusEvent {
    VertexRef vertex;
    Status to = Status::Staged;
};

struct LogStatus {
    double t;
    VertexRef vertex;
    Status to;
};

struct LogSolve {
    double t;
    Mode mode;
    int free_count = 0;
    int frozen_count = 0;
    double cost_before = 0.0;
    double cost_after = 0.0;
    long nodes = 0;
    int flips = 0;
    bool budget_exhausted = false;
    bool subset_whole = true;
};

struct LogGrant {
    double t;
    std::vector<VertexRef> granted;
};

/// Deterministic record of an episode: status transitions, solve
/// invocations and newly granted vertices. Solver wall times are kept
/// separately so replays of the same seed serialize identically.
struct EventLog {
    std::vector<std::variant<LogStatus, LogSolve, LogGrant>> entries;
    std::string to_jsonl() const;
};

struct ControllerConfig {
    Mode mode = Mode::Rhc;
    double period = 2.0;   // h, seconds between solves
    double horizon = 5.0;  // H, seconds (RHC only)
    double epsilon = kScheduleEpsilon;
    long node_budget = 100000;
};

/// Owns the switchable graph, the active selection and the live statuses.
/// step() applies status events, refreshes the remaining-fraction estimates,
/// runs an optimization every `period` seconds (except in baseline mode) and
/// publishes the currently executable vertices.
class Controller {
  public:
    Controller(Sadg sadg, DurationModel durations, ControllerConfig cfg);

    std::vector<VertexRef> step(const std::vector<StatusEvent>& events, double dt);

    /// Groups pinned to their current side for the next solve.
    std::vector<int> freeze_inadmissible() const;

    const SeAdg& active_graph() const { return active_; }
    const BinaryVector& b_active() const { return b_active_; }
    const Sadg& graph() const { return sadg_; }
    double now() const { return now_; }
    bool done() const;

    const EventLog& log() const { return log_; }
    const std::vector<LogSolve>& solve_log() const { return solve_log_; }
    const std::vector<double>& solve_wall_times() const { return solve_wall_; }
    const std::vector<BinaryVector>& b_history() const { return b_history_; }

  private:
    void apply_event(const StatusEvent& ev);
    void run_solve();

    Sadg sadg_;
    DurationModel durations_;
    ControllerConfig cfg_;
    BinaryVector b_active_;
    SeAdg active_;
    double now_ = 0.0;
    double next_solve_at_;
    std::vector<std::vector<double>> started_at_;
    std::vector<VertexRef> last_grants_;
    EventLog log_;
    std::vector<LogSolve> solve_log_;
    std::vector<double> solve_wall_;
    std::vector<BinaryVector> b_history_;
};

}  // namespace sadg
