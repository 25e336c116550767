#include "jumpforge/trajectory.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <map>

#include "jumpforge/errors.hpp"
#include "jumpforge/trajectory_engine.hpp"

namespace jumpforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Survival S(t) = sum_g w_g exp(-g t) over distinct decay rates g.
struct Survival {
    std::vector<std::pair<double, double>> groups;  // (rate, weight), rate > 0
    double floor = 0.0;

    double operator()(double t) const {
        double s = floor;
        for (const auto& [g, w] : groups) s += w * std::exp(-g * t);
        return s;
    }
};

Survival survival_of(const StateVector& state, std::span<const double> diag) {
    std::map<double, double> by_rate;
    double total = 0.0;
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        const double p = std::norm(state[i]);
        if (p == 0.0) continue;
        by_rate[diag[i]] += p;
        total += p;
    }
    Survival s;
    double scale = 0.0;
    for (const auto& [g, w] : by_rate) scale = std::max(scale, std::abs(g));
    for (const auto& [g, w] : by_rate) {
        if (g < -1e-12 * scale) throw UnsupportedConfiguration("negative decay rate");
        if (g <= 1e-14 * scale)
            s.floor += w / total;
        else
            s.groups.emplace_back(g, w / total);
    }
    return s;
}

double invert_survival(const Survival& s, double r) {
    if (s.floor >= r || s.groups.empty()) return kInf;
    double slowest = kInf;
    for (const auto& [g, w] : s.groups) slowest = std::min(slowest, g);
    double lo = 0.0, hi = 1.0 / slowest;
    while (s(hi) > r) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        (s(mid) > r ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double waiting_time_impl(const StateVector& state, const DecayReport& decay, std::span<const double> diag,
                         double r) {
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("survival draw must lie in (0, 1]");
    if (decay.kind == DecayClass::UNIFORM)
        return decay.uniform_rate > 0.0 ? -std::log(r) / decay.uniform_rate : kInf;
    if (decay.kind != DecayClass::DIAGONAL) throw UnsupportedConfiguration("general decay operator");
    return invert_survival(survival_of(state, diag), r);
}

void evolve_impl(StateVector& state, const DecayReport& decay, std::span<const double> diag, double dt) {
    if (decay.kind == DecayClass::UNIFORM || dt == 0.0) return;
    for (std::size_t i = 0; i < state.dimension(); ++i) state[i] *= std::exp(-0.5 * diag[i] * dt);
    state = normalize(state);
}

}  // namespace

double waiting_time_for(const StateVector& state, const DecayReport& decay, double r) {
    std::vector<double> diag;
    if (decay.kind == DecayClass::DIAGONAL) diag = decay.entries(state.n_qubits());
    return waiting_time_impl(state, decay, diag, r);
}

StateVector no_jump_evolve(const StateVector& state, const DecayReport& decay, double t) {
    StateVector out = normalize(state);
    if (decay.kind == DecayClass::DIAGONAL) evolve_impl(out, decay, decay.entries(state.n_qubits()), t);
    return out;
}

WaitingTime sample_waiting_time(const StateVector& state, std::span<const JumpChannel> channels,
                                RngStream& rng) {
    const DecayReport decay = total_decay(channels);
    std::vector<double> diag;
    if (decay.kind == DecayClass::DIAGONAL) diag = decay.entries(state.n_qubits());
    const double t = waiting_time_impl(state, decay, diag, rng.uniform());
    if (std::isinf(t)) return {};

    StateVector at = normalize(state);
    evolve_impl(at, decay, diag, t);
    std::vector<double> w(channels.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < channels.size(); ++k) {
        if (!channels[k].active) continue;
        w[k] = channels[k].uniform ? channels[k].rate : jump_rate(at, channels[k].op);
        total += w[k];
    }
    if (!(total > 0.0)) throw SamplerFault("jump drawn while every channel rate is zero");
    const double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t pick = channels.size();
    for (std::size_t k = 0; k < channels.size(); ++k) {
        if (w[k] <= 0.0) continue;
        pick = k;
        acc += w[k];
        if (target <= acc) break;
    }
    return {true, t, pick};
}

std::pair<StateVector, ClickRecord> apply_jump(const StateVector& state, const JumpChannel& channel,
                                               double time) {
    if (!channel.active) throw ConfigError("jump on inactive channel " + channel.id);
    StatevectorBackend backend(state);
    backend.jump(channel);
    return {backend.take_state(),
            ClickRecord{time, channel.id, channel.kind, channel.sign, channel.qubits, channel.op}};
}

std::string event_csv(const TrajectoryLog& log) {
    std::string out = "time,detector,kind,sign,qubits\n";
    char buf[40];
    for (const auto& c : log.clicks) {
        std::snprintf(buf, sizeof buf, "%.12g", c.time);
        out += buf;
        out += ',' + c.detector + ',' + std::string(kind_name(c.kind)) + ',' + std::to_string(c.sign) + ',';
        for (std::size_t i = 0; i < c.qubits.size(); ++i) out += (i ? ";" : "") + std::to_string(c.qubits[i]);
        out += '\n';
    }
    return out;
}

double StatevectorBackend::rate(const JumpChannel& ch) const { return jump_rate(state_, ch.op); }

void StatevectorBackend::jump(const JumpChannel& ch) {
    try {
        state_ = normalize(apply(state_, ch.op));
    } catch (const Annihilation&) {
        throw SamplerFault("channel " + ch.id + " annihilated the conditional state");
    }
}

double StatevectorBackend::waiting_time(const DecayReport& decay, std::span<const double> diag,
                                        double r) const {
    return waiting_time_impl(state_, decay, diag, r);
}

void StatevectorBackend::evolve(const DecayReport& decay, std::span<const double> diag, double dt) {
    evolve_impl(state_, decay, diag, dt);
}

void StatevectorBackend::project_ground(int qubit) {
    const std::size_t bit = qubit_mask(state_.n_qubits(), qubit);
    for (std::size_t i = 0; i < state_.dimension(); ++i)
        if (i & bit) state_[i] = 0.0;
    state_ = normalize(state_);
}

RunResult run(const ProtocolScript& script, RngStream& rng, const RunOptions& options) {
    StatevectorBackend backend(normalize(script.initial_state()));
    TrajectoryLog log = detail::run_stages(script, backend, rng, options);
    return {std::move(log), backend.take_state()};
}

}  // namespace jumpforge
