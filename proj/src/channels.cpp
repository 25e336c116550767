#include "jumpforge/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jumpforge/errors.hpp"
#include "jumpforge/pauli_algebra.hpp"

namespace jumpforge {

namespace {

constexpr double kRateTol = 1e-12;

void require_positive(double rate, const char* what) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw ConfigError(std::string(what) + " must be positive and finite");
}

// Sets `uniform` and, for uniform channels, `rate` from L^dag L.
void classify(JumpChannel& ch) {
    const auto g = pauli::gram(ch.op);
    ch.uniform = g.size() == 1 && g.begin()->first.empty();
    if (ch.uniform) ch.rate = g.begin()->second.real();
}

bool rates_match(double a, double b) { return std::abs(a - b) <= kRateTol * std::max(1.0, std::abs(a)); }

// Single factor on one qubit of the given type, if that is all the operator is.
std::optional<std::pair<int, cplx>> single_factor(const OperatorSum& op, Op1 type) {
    if (op.terms().size() != 1) return std::nullopt;
    const auto& t = op.terms()[0];
    if (t.factors().size() != 1 || t.factors()[0].op != type) return std::nullopt;
    return std::pair{t.factors()[0].qubit, t.coefficient()};
}

}  // namespace

std::string_view kind_name(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::SE: return "SE";
        case ChannelKind::IS: return "IS";
        case ChannelKind::FLIP: return "FLIP";
        case ChannelKind::ENTANGLE: return "ENTANGLE";
        case ChannelKind::CLASSICAL_MIX: return "CLASSICAL_MIX";
    }
    return "?";
}

std::optional<ChannelKind> parse_kind(std::string_view name) {
    for (auto k : {ChannelKind::SE, ChannelKind::IS, ChannelKind::FLIP, ChannelKind::ENTANGLE,
                   ChannelKind::CLASSICAL_MIX})
        if (kind_name(k) == name) return k;
    return std::nullopt;
}

JumpChannel se_channel(int n_qubits, int qubit, double gamma) {
    require_positive(gamma, "spontaneous emission rate");
    JumpChannel ch;
    ch.id = "se" + std::to_string(qubit);
    ch.op = OperatorSum(n_qubits, {PauliTerm::single(qubit, Op1::SM, std::sqrt(gamma))});
    ch.kind = ChannelKind::SE;
    ch.rate = gamma;
    ch.qubits = {qubit};
    return ch;
}

JumpChannel is_channel(int n_qubits, int qubit, double gamma_p) {
    require_positive(gamma_p, "inelastic scattering rate");
    JumpChannel ch;
    ch.id = "is" + std::to_string(qubit);
    ch.op = OperatorSum(n_qubits, {PauliTerm::single(qubit, Op1::SP, std::sqrt(gamma_p))});
    ch.kind = ChannelKind::IS;
    ch.rate = gamma_p;
    ch.qubits = {qubit};
    return ch;
}

std::pair<JumpChannel, JumpChannel> pbs_erase(const JumpChannel& se, const JumpChannel& is,
                                              double theta) {
    if (se.kind != ChannelKind::SE || is.kind != ChannelKind::IS)
        throw ConfigError("PBS erasure needs one SE and one IS channel");
    if (se.qubits != is.qubits) throw ConfigError("PBS erasure needs both processes on one qubit");
    if (!rates_match(se.rate, is.rate))
        throw ErasureMismatch("s.e. rate " + std::to_string(se.rate) + " and i.s. rate " +
                              std::to_string(is.rate) + " are distinguishable");
    const int q = se.qubits.front();
    const int n = se.op.n_qubits();
    const double amp = std::sqrt(se.rate / 2.0);

    auto port = [&](double angle, const char* prefix) {
        // Exact zeros keep the theta = k pi/2 ports single Pauli strings.
        const double c = std::cos(angle), s = std::sin(angle);
        std::vector<PauliTerm> terms;
        if (std::abs(c) > 1e-15) terms.push_back(PauliTerm::single(q, Op1::X, amp * c));
        if (std::abs(s) > 1e-15) terms.push_back(PauliTerm::single(q, Op1::Y, amp * s));
        JumpChannel ch;
        ch.id = prefix + std::to_string(q);
        ch.op = OperatorSum(n, std::move(terms));
        ch.kind = ChannelKind::FLIP;
        ch.qubits = {q};
        ch.inputs = {se.id, is.id};
        classify(ch);
        return ch;
    };
    return {port(theta, "x"), port(theta + std::numbers::pi / 2.0, "y")};
}

std::pair<JumpChannel, JumpChannel> bs_combine(const JumpChannel& a, const JumpChannel& b) {
    if (a.op.n_qubits() != b.op.n_qubits()) throw ConfigError("BS inputs act on different registers");
    const auto sa = a.op.support();
    const auto sb = b.op.support();
    for (int q : sa)
        if (std::find(sb.begin(), sb.end(), q) != sb.end())
            throw ConfigError("BS which-qubit erasure needs channels on different qubits");
    if (!rates_match(a.rate, b.rate))
        throw ErasureMismatch("BS inputs " + a.id + " and " + b.id + " have different rates");

    const double r = 1.0 / std::numbers::sqrt2;
    const cplx i{0.0, 1.0};
    auto port = [&](int sign) {
        JumpChannel ch;
        ch.id = "bs" + a.id + "|" + b.id + (sign > 0 ? "+" : "-");
        ch.op = a.op.scaled(r) + b.op.scaled(static_cast<double>(sign) * i * r);
        ch.kind = ChannelKind::ENTANGLE;
        ch.sign = sign;
        ch.rate = a.rate;
        ch.qubits = a.qubits;
        ch.qubits.insert(ch.qubits.end(), b.qubits.begin(), b.qubits.end());
        ch.inputs = {a.id, b.id};
        classify(ch);
        return ch;
    };
    return {port(+1), port(-1)};
}

JumpChannel classical_mix(const JumpChannel& y_port, int sign) {
    if (sign != 1 && sign != -1) throw ConfigError("classical mix sign must be +1 or -1");
    const auto y = single_factor(y_port.op, Op1::Y);
    if (y_port.kind != ChannelKind::FLIP || !y || std::abs(y->second.imag()) > 1e-15)
        throw ConfigError("classical mixing needs a sigma_y FLIP port, got " + y_port.id);
    const auto [q, c] = *y;
    const double amp = std::abs(c.real());
    const cplx i{0.0, 1.0};
    JumpChannel ch;
    ch.id = "mix" + std::to_string(q) + (sign > 0 ? "+" : "-");
    // sqrt(r) I +- i (c Y) with |c| = sqrt(r)
    ch.op = OperatorSum(y_port.op.n_qubits(),
                        {PauliTerm::identity(amp), PauliTerm::single(q, Op1::Y, i * c * double(sign))});
    ch.kind = ChannelKind::CLASSICAL_MIX;
    ch.sign = sign;
    ch.qubits = {q};
    ch.inputs = {y_port.id};
    classify(ch);
    return ch;
}

JumpChannel split_channel(const JumpChannel& ch, double rate, std::string id) {
    require_positive(rate, "split rate");
    if (rate > ch.rate * (1.0 + kRateTol)) throw ConfigError("split rate exceeds channel rate");
    JumpChannel out = ch;
    out.op = ch.op.scaled(std::sqrt(rate / ch.rate));
    out.rate = rate;
    out.id = std::move(id);
    out.inputs = {ch.id};
    return out;
}

double DecayReport::entry(std::size_t index, int n_qubits) const {
    double g = 0.0;
    for (const auto& t : diagonal) {
        int parity = 0;
        for (int q : t.qubits) parity ^= static_cast<int>((index & qubit_mask(n_qubits, q)) != 0);
        g += parity ? -t.coefficient : t.coefficient;
    }
    return g;
}

std::vector<double> DecayReport::entries(int n_qubits) const {
    std::vector<double> out(std::size_t{1} << n_qubits);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = entry(i, n_qubits);
    return out;
}

DecayReport total_decay(std::span<const JumpChannel> channels) {
    DecayReport report;
    double uniform_part = 0.0;
    auto poly = pauli::make_polynomial();
    bool all_uniform = true;
    for (const auto& ch : channels) {
        if (!ch.active) continue;
        if (ch.uniform) {
            uniform_part += ch.rate;
        } else {
            all_uniform = false;
            pauli::accumulate(poly, pauli::gram(ch.op));
        }
    }
    if (all_uniform) {
        report.kind = DecayClass::UNIFORM;
        report.uniform_rate = uniform_part;
        report.diagonal = {ZTerm{{}, uniform_part}};
        return report;
    }
    poly[pauli::String{}] += uniform_part;
    double scale = 0.0;
    for (const auto& [s, c] : poly) scale = std::max(scale, std::abs(c));
    pauli::prune(poly, 1e-12 * scale);

    for (const auto& [s, c] : poly) {
        const bool z_only = std::all_of(s.begin(), s.end(), [](const Factor& f) { return f.op == Op1::Z; });
        if (!z_only || std::abs(c.imag()) > 1e-12 * std::max(1.0, scale))
            throw UnsupportedConfiguration("total decay operator is not diagonal in the computational basis");
        ZTerm t;
        for (const auto& f : s) t.qubits.push_back(f.qubit);
        t.coefficient = c.real();
        report.diagonal.push_back(std::move(t));
    }
    const bool identity_only =
        report.diagonal.empty() || (report.diagonal.size() == 1 && report.diagonal[0].qubits.empty());
    if (identity_only) {
        report.kind = DecayClass::UNIFORM;
        report.uniform_rate = report.diagonal.empty() ? 0.0 : report.diagonal[0].coefficient;
        report.diagonal = {ZTerm{{}, report.uniform_rate}};
    } else {
        report.kind = DecayClass::DIAGONAL;
    }
    return report;
}

OpticalLayout::OpticalLayout(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw ConfigError("layout needs at least one qubit");
}

void OpticalLayout::add(JumpChannel ch) {
    if (ch.op.n_qubits() != n_qubits_)
        throw ConfigError("channel " + ch.id + " built for a different register size");
    if (find(ch.id)) throw ConfigError("duplicate detector label " + ch.id);
    channels_.push_back(std::move(ch));
}

void OpticalLayout::add_rule(ReconfigRule rule) {
    auto check = [&](const std::vector<std::string>& ids) {
        for (const auto& id : ids)
            if (!find(id)) throw ConfigError("trigger references unknown channel " + id);
    };
    if (rule.watch.empty()) throw ConfigError("trigger watches no detectors");
    check(rule.watch);
    check(rule.deactivate);
    check(rule.activate);
    if (rule.action == RuleAction::REMOVE_BS) {
        for (const auto& id : rule.deactivate)
            if (at(id).kind != ChannelKind::ENTANGLE)
                throw ConfigError("REMOVE_BS must switch off entangling ports, not " + id);
    }
    triggers_.push_back(std::move(rule));
}

std::optional<std::size_t> OpticalLayout::find(std::string_view id) const {
    for (std::size_t i = 0; i < channels_.size(); ++i)
        if (channels_[i].id == id) return i;
    return std::nullopt;
}

const JumpChannel& OpticalLayout::at(std::string_view id) const {
    const auto i = find(id);
    if (!i) throw ConfigError("no channel " + std::string(id));
    return channels_[*i];
}

void OpticalLayout::set_active(std::string_view id, bool active) {
    const auto i = find(id);
    if (!i) throw ConfigError("no channel " + std::string(id));
    channels_[*i].active = active;
}

std::vector<JumpChannel> OpticalLayout::active_channels() const {
    std::vector<JumpChannel> out;
    for (const auto& ch : channels_)
        if (ch.active) out.push_back(ch);
    return out;
}

void OpticalLayout::add_flip_ports(int qubit, double gamma, double theta) {
    auto [x, y] = pbs_erase(se_channel(n_qubits_, qubit, gamma), is_channel(n_qubits_, qubit, gamma), theta);
    add(std::move(x));
    add(std::move(y));
}

std::pair<std::string, std::string> OpticalLayout::combine(std::string_view a, std::string_view b,
                                                           bool remove_after_click) {
    const auto& ca = at(a);
    const auto& cb = at(b);
    if (!ca.active || !cb.active) throw ConfigError("BS inputs must be active channels");
    auto [plus, minus] = bs_combine(ca, cb);
    std::pair<std::string, std::string> ids{plus.id, minus.id};
    set_active(a, false);
    set_active(b, false);
    add(std::move(plus));
    add(std::move(minus));
    if (remove_after_click) {
        add_rule(ReconfigRule{{ids.first, ids.second},
                              RuleAction::REMOVE_BS,
                              {ids.first, ids.second},
                              {std::string(a), std::string(b)},
                              true});
    }
    return ids;
}

std::pair<std::string, std::string> OpticalLayout::mix(std::string_view y_id) {
    const auto& y = at(y_id);
    if (!y.active) throw ConfigError("mixed port must be active");
    auto plus = classical_mix(y, +1);
    auto minus = classical_mix(y, -1);
    std::pair<std::string, std::string> ids{plus.id, minus.id};
    set_active(y_id, false);
    add(std::move(plus));
    add(std::move(minus));
    add_rule(ReconfigRule{{ids.first, ids.second},
                          RuleAction::DEACTIVATE,
                          {ids.first, ids.second},
                          {std::string(y_id)},
                          true});
    return ids;
}

}  // namespace jumpforge
