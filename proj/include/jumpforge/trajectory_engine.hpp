#pragma once

// Stage loop shared by the statevector and stabilizer backends.
//
// A Backend provides:
//   double rate(const JumpChannel&) const;   // <L^dag L>, only for non-uniform channels
//   void jump(const JumpChannel&);
//   double waiting_time(const DecayReport&, std::span<const double> diag, double r) const;
//   void evolve(const DecayReport&, std::span<const double> diag, double dt);
//   void project_ground(int qubit);
//   static constexpr bool kNeedsDiagonal;    // whether diag entries must be expanded

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "jumpforge/errors.hpp"
#include "jumpforge/trajectory.hpp"

namespace jumpforge::detail {

struct RuleRuntime {
    std::vector<std::size_t> watch;
    std::vector<std::size_t> deactivate;
    std::vector<std::size_t> activate;
    RuleAction action;
    bool once;
    bool fired = false;
};

template <class Backend>
class StageRunner {
public:
    StageRunner(const Stage& stage, Backend& backend, RngStream& rng, TrajectoryLog& log, int n_qubits)
        : stage_(stage),
          backend_(backend),
          rng_(rng),
          log_(log),
          n_qubits_(n_qubits),
          channels_(stage.layout.channels().begin(), stage.layout.channels().end()) {
        for (const auto& rule : stage.layout.triggers()) {
            RuleRuntime rt{{}, {}, {}, rule.action, rule.once};
            for (const auto& id : rule.watch) rt.watch.push_back(*stage.layout.find(id));
            for (const auto& id : rule.deactivate) rt.deactivate.push_back(*stage.layout.find(id));
            for (const auto& id : rule.activate) rt.activate.push_back(*stage.layout.find(id));
            rules_.push_back(std::move(rt));
        }
        for (int q : stage.termination.measured) measured_.push_back({q, -1});
        refresh();
    }

    /// Runs from time t; returns the time the stage ended. Sets `stopped`
    /// when the global stop time cut the stage short.
    double execute(double t, double stop_time, bool& stopped) {
        using Kind = Termination::Kind;
        const auto& term = stage_.termination;
        const double start = t;
        const bool timed = term.kind == Kind::DURATION || term.kind == Kind::ALL_MEASURED;
        const double stage_end = timed ? start + term.duration : std::numeric_limits<double>::infinity();
        const double limit = std::min(stage_end, stop_time);
        stopped = false;

        while (!done_) {
            const double r = rng_.uniform();
            const double wait = backend_.waiting_time(decay_, diag_, r);
            if (!(t + wait <= limit)) {
                if (std::isinf(limit))
                    throw ConfigError("stage '" + stage_.label + "' can no longer reach its termination condition");
                backend_.evolve(decay_, diag_, limit - t);
                t = limit;
                stopped = limit < stage_end;
                break;
            }
            if (!timed && t + wait - start > stage_.time_limit)
                throw ConfigError("stage '" + stage_.label + "' exceeded its time limit");
            backend_.evolve(decay_, diag_, wait);
            t += wait;
            const std::size_t c = select_channel();
            backend_.jump(channels_[c]);
            record(c, t);
            fire_rules(c);
            check_termination(c, t);
        }
        if (!stopped && term.kind == Kind::ALL_MEASURED) {
            for (auto& [q, outcome] : measured_) {
                if (outcome >= 0) continue;
                outcome = 0;
                backend_.project_ground(q);
                log_.measurements.push_back({q, 0, t});
            }
        }
        return t;
    }

private:
    void refresh() {
        decay_ = total_decay(channels_);
        active_.clear();
        state_dependent_ = false;
        for (std::size_t i = 0; i < channels_.size(); ++i) {
            if (!channels_[i].active) continue;
            active_.push_back(i);
            state_dependent_ = state_dependent_ || !channels_[i].uniform;
        }
        diag_.clear();
        if constexpr (Backend::kNeedsDiagonal)
            if (decay_.kind == DecayClass::DIAGONAL) diag_ = decay_.entries(n_qubits_);
    }

    std::size_t select_channel() {
        weights_.resize(active_.size());
        double total = 0.0;
        for (std::size_t k = 0; k < active_.size(); ++k) {
            const auto& ch = channels_[active_[k]];
            weights_[k] = (!state_dependent_ || ch.uniform) ? ch.rate : backend_.rate(ch);
            total += weights_[k];
        }
        if (!(total > 0.0)) throw SamplerFault("jump drawn while every channel rate is zero");
        const double target = rng_.uniform() * total;
        double acc = 0.0;
        for (std::size_t k = 0; k < active_.size(); ++k) {
            acc += weights_[k];
            if (target <= acc && weights_[k] > 0.0) return active_[k];
        }
        // Rounding left target just above the last partial sum.
        for (std::size_t k = active_.size(); k-- > 0;)
            if (weights_[k] > 0.0) return active_[k];
        throw SamplerFault("no channel with positive rate");
    }

    void record(std::size_t c, double t) {
        const auto& ch = channels_[c];
        log_.clicks.push_back(ClickRecord{t, ch.id, ch.kind, ch.sign, ch.qubits, ch.op});
        if (stage_.termination.kind == Termination::Kind::ALL_MEASURED && ch.kind == ChannelKind::SE) {
            for (auto& [q, outcome] : measured_) {
                if (outcome < 0 && ch.qubits.size() == 1 && ch.qubits[0] == q) {
                    outcome = 1;
                    log_.measurements.push_back({q, 1, t});
                }
            }
        }
    }

    void fire_rules(std::size_t c) {
        bool changed = false;
        for (auto& rule : rules_) {
            if (rule.once && rule.fired) continue;
            if (std::find(rule.watch.begin(), rule.watch.end(), c) == rule.watch.end()) continue;
            rule.fired = true;
            for (auto i : rule.deactivate) channels_[i].active = false;
            for (auto i : rule.activate) channels_[i].active = true;
            changed = changed || !rule.deactivate.empty() || !rule.activate.empty();
            if (rule.action == RuleAction::STAGE_ADVANCE) advance_ = true;
        }
        if (changed) refresh();
    }

    void check_termination(std::size_t c, double) {
        const auto& term = stage_.termination;
        switch (term.kind) {
            case Termination::Kind::CLICK_COUNT:
                if (!term.count_kind || *term.count_kind == channels_[c].kind) ++counted_;
                done_ = counted_ >= term.count;
                break;
            case Termination::Kind::ALL_MEASURED:
                done_ = std::all_of(measured_.begin(), measured_.end(),
                                    [](const auto& m) { return m.second >= 0; });
                break;
            case Termination::Kind::ADVANCE_TRIGGER: done_ = advance_; break;
            default: break;
        }
    }

    const Stage& stage_;
    Backend& backend_;
    RngStream& rng_;
    TrajectoryLog& log_;
    int n_qubits_;
    std::vector<JumpChannel> channels_;
    std::vector<RuleRuntime> rules_;
    std::vector<std::pair<int, int>> measured_;  // (qubit, outcome or -1)
    DecayReport decay_;
    std::vector<double> diag_;
    std::vector<std::size_t> active_;
    std::vector<double> weights_;
    bool state_dependent_ = false;
    bool done_ = false;
    bool advance_ = false;
    int counted_ = 0;
};

template <class Backend>
TrajectoryLog run_stages(const ProtocolScript& script, Backend& backend, RngStream& rng,
                         const RunOptions& options) {
    script.validate();
    TrajectoryLog log;
    double t = 0.0;
    bool stopped = false;
    for (const auto& stage : script.stages) {
        if (stopped || t >= options.stop_time) {
            stopped = true;
            break;
        }
        log.stage_marks.push_back({t, stage.label, log.clicks.size()});
        StageRunner<Backend> runner(stage, backend, rng, log, script.n_qubits());
        t = runner.execute(t, options.stop_time, stopped);
    }
    log.end_time = t;
    log.completed = !stopped;
    return log;
}

}  // namespace jumpforge::detail
