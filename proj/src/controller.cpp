#include "sadg/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sadg {

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Adg: return "adg";
        case Mode::Shc: return "shc";
        case Mode::Rhc: return "rhc";
    }
    return "?";
}

Mode mode_from_string(const std::string& name) {
    if (name == "adg") return Mode::Adg;
    if (name == "shc") return Mode::Shc;
    if (name == "rhc") return Mode::Rhc;
    throw std::invalid_argument("unknown mode '" + name + "' (expected adg|shc|rhc)");
}

namespace {

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

}  // namespace

std::string EventLog::to_jsonl() const {
    std::ostringstream os;
    for (const auto& entry : entries) {
        if (const auto* st = std::get_if<LogStatus>(&entry)) {
            os << "{\"t\":" << fmt(st->t) << ",\"type\":\"status\",\"agent\":" << st->vertex.agent
               << ",\"index\":" << st->vertex.index << ",\"status\":\"" << to_string(st->to)
               << "\"}\n";
        } else if (const auto* so = std::get_if<LogSolve>(&entry)) {
            os << "{\"t\":" << fmt(so->t) << ",\"type\":\"solve\",\"mode\":\""
               << to_string(so->mode) << "\",\"free\":" << so->free_count
               << ",\"frozen\":" << so->frozen_count << ",\"cost_before\":" << fmt(so->cost_before)
               << ",\"cost_after\":" << fmt(so->cost_after) << ",\"nodes\":" << so->nodes
               << ",\"flips\":" << so->flips
               << ",\"budget_exhausted\":" << (so->budget_exhausted ? "true" : "false")
               << ",\"subset_whole\":" << (so->subset_whole ? "true" : "false") << "}\n";
        } else if (const auto* gr = std::get_if<LogGrant>(&entry)) {
            os << "{\"t\":" << fmt(gr->t) << ",\"type\":\"grant\",\"vertices\":[";
            for (std::size_t i = 0; i < gr->granted.size(); ++i)
                os << (i ? "," : "") << "[" << gr->granted[i].agent << ","
                   << gr->granted[i].index << "]";
            os << "]}\n";
        }
    }
    return os.str();
}

Controller::Controller(Sadg sadg, DurationModel durations, ControllerConfig cfg)
    : sadg_(std::move(sadg)), durations_(std::move(durations)), cfg_(cfg) {
    b_active_ = sadg_.zero();
    active_ = realize(sadg_, b_active_);
    if (!is_acyclic(active_))
        throw std::invalid_argument("controller: initial graph is cyclic");
    next_solve_at_ = cfg_.period;
    started_at_.resize(sadg_.skeleton.agent_count());
    for (int a = 0; a < sadg_.skeleton.agent_count(); ++a)
        started_at_[a].assign(sadg_.skeleton.chains[a].size(), 0.0);
    b_history_.push_back(b_active_);
}

bool Controller::done() const {
    for (const auto& chain : sadg_.skeleton.chains)
        for (const auto& v : chain)
            if (v.status != Status::Completed) return false;
    return true;
}

void Controller::apply_event(const StatusEvent& ev) {
    mark_status(active_, ev.vertex, ev.to);
    sadg_.skeleton.at(ev.vertex).status = ev.to;
    if (ev.to == Status::InProgress) started_at_[ev.vertex.agent][ev.vertex.index] = now_;
    log_.entries.push_back(LogStatus{now_, ev.vertex, ev.to});
}

std::vector<int> Controller::freeze_inadmissible() const {
    return inadmissible_groups(sadg_, b_active_);
}

void Controller::run_solve() {
    auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> frozen = freeze_inadmissible();
    std::vector<int> free;
    for (int g = 0; g < sadg_.group_count(); ++g)
        if (std::find(frozen.begin(), frozen.end(), g) == frozen.end()) free.push_back(g);

    SolveOptions opt;
    opt.now = now_;
    opt.epsilon = cfg_.epsilon;
    opt.node_budget = cfg_.node_budget;

    SolveResult result;
    bool subset_whole = true;
    if (cfg_.mode == Mode::Rhc) {
        Schedule estimates = earliest_schedule(active_, durations_, now_, cfg_.epsilon);
        if (estimates.cyclic) throw std::logic_error("controller: active graph became cyclic");
        HorizonSubset subset =
            extract_subset(sadg_, b_active_, free, estimates, cfg_.horizon, now_);
        subset_whole = subset.whole_graph(sadg_);
        result = solve(sadg_, durations_, b_active_, free, &subset, opt);
    } else {
        result = solve(sadg_, durations_, b_active_, free, nullptr, opt);
    }
    solve_wall_.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    if (result.budget_exhausted) {
        result.b_star = b_active_;  // guarantees intact, optimality sacrificed
        result.flips = 0;
    }
    if (!switch_admissible(sadg_, b_active_, result.b_star))
        throw std::logic_error("controller: optimizer returned an inadmissible switch");
    b_active_ = result.b_star;
    active_ = realize(sadg_, b_active_);
    if (!is_acyclic(active_))
        throw std::logic_error("controller: optimizer returned a cyclic selection");
    b_history_.push_back(b_active_);

    LogSolve entry{now_,
                   cfg_.mode,
                   static_cast<int>(free.size()),
                   static_cast<int>(frozen.size()),
                   result.incumbent_cost,
                   result.cost,
                   result.nodes_explored,
                   result.flips,
                   result.budget_exhausted,
                   subset_whole};
    solve_log_.push_back(entry);
    log_.entries.push_back(entry);
}

std::vector<VertexRef> Controller::step(const std::vector<StatusEvent>& events, double dt) {
    now_ += dt;
    for (const auto& ev : events) apply_event(ev);

    // Remaining fraction of in-progress vertices from elapsed time.
    for (int a = 0; a < sadg_.skeleton.agent_count(); ++a)
        for (const auto& v : sadg_.skeleton.chains[a]) {
            if (v.status != Status::InProgress) continue;
            double est = durations_.t_est[a][v.index];
            double done = est > 0.0 ? (now_ - started_at_[a][v.index]) / est : 1.0;
            durations_.mu[a][v.index] = 1.0 - std::clamp(done, 0.0, 1.0);
        }

    if (cfg_.mode != Mode::Adg && now_ >= next_solve_at_) {
        run_solve();
        next_solve_at_ += cfg_.period;
        if (next_solve_at_ <= now_) next_solve_at_ = now_ + cfg_.period;
    }

    if (!is_acyclic(active_))
        throw std::logic_error("controller: active graph is cyclic at step boundary");

    std::vector<VertexRef> grants = executable_vertices(active_);
    std::vector<VertexRef> fresh;
    for (const auto& v : grants)
        if (std::find(last_grants_.begin(), last_grants_.end(), v) == last_grants_.end())
            fresh.push_back(v);
    if (!fresh.empty()) log_.entries.push_back(LogGrant{now_, fresh});
    last_grants_ = grants;
    return grants;
}

}  // namespace sadg
