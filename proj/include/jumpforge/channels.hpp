#pragma once

// Detection channels and the optical networks that compose them.
//
// A channel's jump operator carries its rate as amplitude scale: a spontaneous
// emission channel at rate gamma is sqrt(gamma) * SM. Erasure stages (PBS,
// BS, classical source mixing) turn channels into coherent combinations of
// their inputs.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jumpforge/qstate.hpp"

namespace jumpforge {

enum class ChannelKind { SE, IS, FLIP, ENTANGLE, CLASSICAL_MIX };

std::string_view kind_name(ChannelKind kind);
std::optional<ChannelKind> parse_kind(std::string_view name);

struct JumpChannel {
    std::string id;        // unique within a layout; doubles as the detector label
    OperatorSum op;
    ChannelKind kind = ChannelKind::SE;
    bool active = true;
    /// For uniform channels L^dag L = rate * I; otherwise the process rate.
    double rate = 0.0;
    /// L^dag L proportional to the identity (unitary jump).
    bool uniform = false;
    /// +1/-1 for the two output ports of a beamsplitter, 0 otherwise.
    int sign = 0;
    /// Qubits the channel acts on, in combination order (j, k for ENTANGLE).
    std::vector<int> qubits;
    /// ids of the channels a beamsplitter consumed (empty for raw channels).
    std::vector<std::string> inputs;
};

/// sqrt(gamma) * lowering on `qubit`.
JumpChannel se_channel(int n_qubits, int qubit, double gamma);
/// sqrt(gamma_p) * raising on `qubit` (optically pumped inelastic scattering).
JumpChannel is_channel(int n_qubits, int qubit, double gamma_p);

/// PBS which-process erasure of an s.e./i.s. pair on one qubit. Ports are
/// sqrt(gamma/2) (cos t X + sin t Y) for t = theta and t = theta + pi/2.
/// Throws ErasureMismatch when the rates differ.
std::pair<JumpChannel, JumpChannel> pbs_erase(const JumpChannel& se, const JumpChannel& is,
                                              double theta);

/// Balanced BS which-qubit erasure: ports (La + i Lb)/sqrt2 (sign +1) and
/// (La - i Lb)/sqrt2 (sign -1).
std::pair<JumpChannel, JumpChannel> bs_combine(const JumpChannel& a, const JumpChannel& b);

/// Mixes a sigma_y FLIP port with a matched classical field on a BS. The port
/// with `sign` yields sqrt(r) (I +- i sigma_y) = sqrt(2r) exp(+- i pi/4 sigma_y),
/// where r is the input port rate.
JumpChannel classical_mix(const JumpChannel& y_port, int sign);

/// Copy of `ch` carrying only `rate` of its original rate, under a new id.
JumpChannel split_channel(const JumpChannel& ch, double rate, std::string id);

enum class DecayClass { UNIFORM, DIAGONAL, GENERAL };

/// coefficient * prod_{q in qubits} Z_q
struct ZTerm {
    std::vector<int> qubits;
    double coefficient = 0.0;
};

/// The total decay operator Gamma = sum L^dag L of an active channel set.
struct DecayReport {
    DecayClass kind = DecayClass::UNIFORM;
    /// Gamma = uniform_rate * I when kind is UNIFORM.
    double uniform_rate = 0.0;
    /// Z-string expansion of Gamma (single identity term when UNIFORM).
    std::vector<ZTerm> diagonal;

    /// Gamma_ii for basis index i of an n-qubit register.
    double entry(std::size_t index, int n_qubits) const;
    std::vector<double> entries(int n_qubits) const;
};

/// Classifies the active channels. Throws UnsupportedConfiguration when Gamma
/// is not diagonal in the computational basis.
DecayReport total_decay(std::span<const JumpChannel> channels);

enum class RuleAction { REMOVE_BS, DEACTIVATE, STAGE_ADVANCE };

struct ReconfigRule {
    std::vector<std::string> watch;       // detector ids that fire the rule
    RuleAction action = RuleAction::REMOVE_BS;
    std::vector<std::string> deactivate;  // switched off when fired
    std::vector<std::string> activate;    // switched on when fired
    bool once = true;
};

/// The full detection network of a register.
class OpticalLayout {
public:
    OpticalLayout() = default;
    explicit OpticalLayout(int n_qubits);

    int n_qubits() const noexcept { return n_qubits_; }
    std::span<const JumpChannel> channels() const noexcept { return channels_; }
    std::span<const ReconfigRule> triggers() const noexcept { return triggers_; }

    /// Adds a channel; ids must be unique and match the register size.
    void add(JumpChannel ch);
    /// Adds a rule; every referenced id must already exist.
    void add_rule(ReconfigRule rule);

    std::optional<std::size_t> find(std::string_view id) const;
    const JumpChannel& at(std::string_view id) const;
    void set_active(std::string_view id, bool active);

    std::vector<JumpChannel> active_channels() const;

    /// Adds the two PBS ports of `qubit` under ids "x<q>" (angle theta) and
    /// "y<q>" (theta + pi/2).
    void add_flip_ports(int qubit, double gamma, double theta = 0.0);

    /// Replaces active channels a and b by their BS ports "bs<a>|<b>+" and
    /// "bs<a>|<b>-" and registers the REMOVE_BS rule restoring them after the
    /// first click. Returns the two port ids.
    std::pair<std::string, std::string> combine(std::string_view a, std::string_view b,
                                                bool remove_after_click = true);

    /// Replaces the active sigma_y port `y_id` by both classical-mix ports,
    /// ids "mix<q>+" and "mix<q>-".
    std::pair<std::string, std::string> mix(std::string_view y_id);

private:
    int n_qubits_ = 0;
    std::vector<JumpChannel> channels_;
    std::vector<ReconfigRule> triggers_;
};

}  // namespace jumpforge
