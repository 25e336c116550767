#pragma once

// Event-driven Monte Carlo wavefunction sampler.
//
// Waiting times are drawn from the exact no-jump survival law
// S(t) = ||exp(-Gamma t / 2) psi||^2 instead of small-step integration; every
// channel set in this project has a diagonal Gamma, so S(t) is a sum of
// exponentials and can be inverted by bisection.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jumpforge/channels.hpp"
#include "jumpforge/qstate.hpp"
#include "jumpforge/rng.hpp"
#include "jumpforge/script.hpp"

namespace jumpforge {

struct ClickRecord {
    double time = 0.0;  // units of 1/gamma
    std::string detector;
    ChannelKind kind = ChannelKind::SE;
    int sign = 0;  // s_jk for ENTANGLE and CLASSICAL_MIX clicks
    std::vector<int> qubits;
    OperatorSum op;  // jump operator that was applied
};

struct StageMark {
    double time = 0.0;
    std::string label;
    std::size_t first_click = 0;  // index of the stage's first click in the log
};

struct MeasurementRecord {
    int qubit = 0;
    int outcome = 0;  // 1: photon detected, 0: no click by the cutoff
    double time = 0.0;
};

struct TrajectoryLog {
    std::vector<ClickRecord> clicks;
    std::vector<StageMark> stage_marks;
    std::vector<MeasurementRecord> measurements;
    double end_time = 0.0;
    bool completed = false;  // false when stopped early by RunOptions::stop_time
};

/// Outcome of one waiting-time draw.
struct WaitingTime {
    bool jump = false;      // false: the state survives forever (NO_JUMP)
    double time = 0.0;      // delay until the jump
    std::size_t channel = 0;  // index into the channel span passed in
};

/// Delay t with S(t) = r for survival probability r in (0, 1]; +infinity when
/// the survival floor S(inf) is at least r. Bisection to 1e-10 relative.
double waiting_time_for(const StateVector& state, const DecayReport& decay, double r);

/// Normalized no-jump state exp(-Gamma t / 2)|psi> / norm.
StateVector no_jump_evolve(const StateVector& state, const DecayReport& decay, double t);

/// Draws the next jump among the active channels. The channel is picked with
/// probability proportional to <psi(t)|L^dag L|psi(t)> on the no-jump-evolved
/// state; for unitary channels this is just the channel rate.
WaitingTime sample_waiting_time(const StateVector& state, std::span<const JumpChannel> channels,
                                RngStream& rng);

/// normalize(L|psi>) plus its click record. Throws SamplerFault when L
/// annihilates the state.
std::pair<StateVector, ClickRecord> apply_jump(const StateVector& state, const JumpChannel& channel,
                                               double time);

struct RunOptions {
    /// Stop the whole run at this absolute time (trajectory averaging).
    double stop_time = std::numeric_limits<double>::infinity();
};

struct RunResult {
    TrajectoryLog log;
    StateVector state;
};

/// Executes every stage of the script on a statevector.
RunResult run(const ProtocolScript& script, RngStream& rng, const RunOptions& options = {});

/// Click log as CSV: header `time,detector,kind,sign,qubits`, times with 12
/// significant digits, qubits separated by ';'.
std::string event_csv(const TrajectoryLog& log);

/// Statevector backend of the generic engine in trajectory_engine.hpp.
class StatevectorBackend {
public:
    static constexpr bool kNeedsDiagonal = true;

    explicit StatevectorBackend(StateVector state) : state_(std::move(state)) {}

    const StateVector& state() const noexcept { return state_; }
    StateVector take_state() { return std::move(state_); }

    double rate(const JumpChannel& ch) const;
    void jump(const JumpChannel& ch);
    double waiting_time(const DecayReport& decay, std::span<const double> diag, double r) const;
    void evolve(const DecayReport& decay, std::span<const double> diag, double dt);
    void project_ground(int qubit);

private:
    StateVector state_;
};

}  // namespace jumpforge
