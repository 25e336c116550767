#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jumpforge/channels.hpp"
#include "jumpforge/qstate.hpp"

namespace jumpforge {

/// When a stage ends.
struct Termination {
    enum class Kind { NONE, DURATION, CLICK_COUNT, ALL_MEASURED, ADVANCE_TRIGGER };

    Kind kind = Kind::NONE;
    /// DURATION: stage length. ALL_MEASURED: measurement cutoff.
    double duration = 0.0;
    /// CLICK_COUNT: number of matching clicks that ends the stage.
    int count = 0;
    std::optional<ChannelKind> count_kind;
    /// ALL_MEASURED: qubits read out by spontaneous emission.
    std::vector<int> measured;

    static Termination after(double duration) {
        Termination t;
        t.kind = Kind::DURATION;
        t.duration = duration;
        return t;
    }
    static Termination clicks(int count, std::optional<ChannelKind> kind = std::nullopt) {
        Termination t;
        t.kind = Kind::CLICK_COUNT;
        t.count = count;
        t.count_kind = kind;
        return t;
    }
    static Termination measure(std::vector<int> qubits, double cutoff) {
        Termination t;
        t.kind = Kind::ALL_MEASURED;
        t.measured = std::move(qubits);
        t.duration = cutoff;
        return t;
    }
    static Termination on_advance() {
        Termination t;
        t.kind = Kind::ADVANCE_TRIGGER;
        return t;
    }
};

struct Stage {
    std::string label;
    OpticalLayout layout;
    Termination termination;
    /// Click-driven stages that run longer than this are reported as stuck.
    double time_limit = 1e6;
};

/// Classical-source rotation exp(sign i pi/4 sigma_y) requested on a qubit
/// by the stage at index `stage`.
struct MixTarget {
    int qubit = 0;
    int sign = 1;
    std::size_t stage = 0;
};

/// Staged protocol: an initial register state and the detection layouts
/// applied one after another.
struct ProtocolScript {
    int register_size = 0;
    /// Initial state; |0...0> when empty (the only option for the tableau backend).
    std::optional<StateVector> initial;
    std::vector<Stage> stages;
    /// Named qubit roles, e.g. A, B, C for teleportation.
    std::map<std::string, int> roles;
    /// Emission rate every channel of the script was built from.
    double gamma = 1.0;
    std::vector<MixTarget> mix_targets;

    int n_qubits() const { return register_size; }
    StateVector initial_state() const;
    /// Throws ConfigError on the first structural problem found.
    void validate() const;
};

}  // namespace jumpforge
