#include <algorithm>
#include <cmath>

#include "jumpforge/errors.hpp"
#include "jumpforge/script.hpp"

namespace jumpforge {

StateVector ProtocolScript::initial_state() const {
    if (initial) return *initial;
    return basis_state(register_size, std::string(static_cast<std::size_t>(register_size), '0'));
}

void ProtocolScript::validate() const {
    if (register_size < 1) throw ConfigError("script has no qubits");
    if (initial && initial->n_qubits() != register_size)
        throw ConfigError("initial state size differs from the register size");
    if (stages.empty()) throw ConfigError("script has no stages");
    for (const auto& stage : stages) {
        const std::string where = "stage '" + stage.label + "': ";
        if (stage.layout.n_qubits() != n_qubits())
            throw ConfigError(where + "layout register size differs from the initial state");
        const auto& term = stage.termination;
        switch (term.kind) {
            case Termination::Kind::NONE:
                throw ConfigError(where + "no termination condition");
            case Termination::Kind::DURATION:
                if (!(term.duration >= 0.0) || !std::isfinite(term.duration))
                    throw ConfigError(where + "duration must be finite and non-negative");
                break;
            case Termination::Kind::CLICK_COUNT:
                if (term.count < 1) throw ConfigError(where + "click count must be at least 1");
                break;
            case Termination::Kind::ALL_MEASURED: {
                if (term.measured.empty()) throw ConfigError(where + "measurement stage measures nothing");
                if (!(term.duration > 0.0) || !std::isfinite(term.duration))
                    throw ConfigError(where + "measurement cutoff must be finite and positive");
                for (int q : term.measured) {
                    if (q < 0 || q >= n_qubits()) throw ConfigError(where + "measured qubit out of range");
                    bool has_se = false;
                    for (const auto& ch : stage.layout.channels()) {
                        if (!ch.active) continue;
                        const bool on_q = std::find(ch.qubits.begin(), ch.qubits.end(), q) != ch.qubits.end();
                        if (!on_q) continue;
                        if (ch.kind == ChannelKind::SE && ch.qubits.size() == 1) {
                            has_se = true;
                        } else {
                            throw ConfigError(where + "measured qubit " + std::to_string(q) +
                                              " must only be monitored by spontaneous emission (" +
                                              ch.id + " is active)");
                        }
                    }
                    if (!has_se)
                        throw ConfigError(where + "measured qubit " + std::to_string(q) + " has no s.e. detector");
                }
                break;
            }
            case Termination::Kind::ADVANCE_TRIGGER: {
                const auto& rules = stage.layout.triggers();
                const bool any = std::any_of(rules.begin(), rules.end(), [](const ReconfigRule& r) {
                    return r.action == RuleAction::STAGE_ADVANCE;
                });
                if (!any) throw ConfigError(where + "waits for a STAGE_ADVANCE rule that does not exist");
                break;
            }
        }
    }
}

}  // namespace jumpforge
