#include "jumpforge/protocols.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "jumpforge/errors.hpp"
#include "jumpforge/trajectory_engine.hpp"

namespace jumpforge {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// Power k with c ~ i^k, if c is one within tolerance.
std::optional<int> quarter_phase(cplx c) {
    for (int k = 0; k < 4; ++k)
        if (std::abs(c - kIPow[k]) < 1e-9) return k;
    return std::nullopt;
}

// Entangling port (c X_j + c s i X_k): returns (j, k, s).
struct EntangleShape {
    int j, k, sign;
};

std::optional<EntangleShape> entangle_shape(const OperatorSum& op) {
    const auto terms = op.terms();
    if (terms.size() != 2) return std::nullopt;
    for (const auto& t : terms)
        if (t.factors().size() != 1 || t.factors()[0].op != Op1::X) return std::nullopt;
    const cplx ratio = terms[1].coefficient() / terms[0].coefficient();
    if (std::abs(ratio.real()) > 1e-9 || std::abs(std::abs(ratio.imag()) - 1.0) > 1e-9) return std::nullopt;
    return EntangleShape{terms[0].factors()[0].qubit, terms[1].factors()[0].qubit, ratio.imag() > 0 ? 1 : -1};
}

// Classical-mix port a (I + s i Y_q): returns (q, s).
std::optional<std::pair<int, int>> mix_shape(const OperatorSum& op) {
    const auto terms = op.terms();
    if (terms.size() != 2 || !terms[0].factors().empty()) return std::nullopt;
    const auto& f = terms[1].factors();
    if (f.size() != 1 || f[0].op != Op1::Y) return std::nullopt;
    const cplx ratio = terms[1].coefficient() / terms[0].coefficient();
    if (std::abs(ratio.real()) > 1e-9 || std::abs(std::abs(ratio.imag()) - 1.0) > 1e-9) return std::nullopt;
    return std::pair{f[0].qubit, ratio.imag() > 0 ? 1 : -1};
}

int eps(const Pauli1& frame) { return frame.z ? -1 : 1; }

void add_local_ports(OpticalLayout& layout, double gamma) {
    for (int q = 0; q < layout.n_qubits(); ++q) layout.add_flip_ports(q, gamma);
}

std::string phase_token(cplx phase) {
    if (const auto k = quarter_phase(phase)) {
        static constexpr const char* kTok[4] = {"+1", "+i", "-1", "-i"};
        return kTok[*k];
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.12g,%.12g)", phase.real(), phase.imag());
    return buf;
}

using Mat2 = std::array<cplx, 4>;  // row-major

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Mat2 dagger(const Mat2& a) { return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}; }

Mat2 pauli_matrix(const Pauli1& p) {
    // i^phase X^x Z^z
    Mat2 m{1.0, 0.0, 0.0, 1.0};
    if (p.z) m = mul(m, Mat2{1.0, 0.0, 0.0, -1.0});
    if (p.x) m = mul(Mat2{0.0, 1.0, 1.0, 0.0}, m);
    for (auto& e : m) e *= kIPow[p.phase & 3];
    return m;
}

Mat2 y_rotation(int sign) {
    // (I + sign i Y)/sqrt2 with iY = [[0, 1], [-1, 0]]
    const double r = 1.0 / std::numbers::sqrt2;
    return {r, sign * r, -sign * r, r};
}

}  // namespace

Pauli1 operator*(const Pauli1& a, const Pauli1& b) {
    const int sign = (a.z && b.x) ? 2 : 0;
    return {static_cast<bool>(a.x ^ b.x), static_cast<bool>(a.z ^ b.z), (a.phase + b.phase + sign) & 3};
}

Pauli1 Pauli1::inverse() const { return {x, z, (4 - phase + ((x && z) ? 2 : 0)) & 3}; }

std::optional<std::pair<int, Pauli1>> as_pauli(const OperatorSum& op) {
    if (op.terms().size() != 1) return std::nullopt;
    const auto& t = op.terms()[0];
    if (t.factors().size() != 1) return std::nullopt;
    const cplx c = t.coefficient();
    if (std::abs(c) == 0.0) return std::nullopt;
    const auto k = quarter_phase(c / std::abs(c));
    if (!k) return std::nullopt;
    const auto& f = t.factors()[0];
    switch (f.op) {
        case Op1::X: return std::pair{f.qubit, Pauli1{true, false, *k}};
        case Op1::Z: return std::pair{f.qubit, Pauli1{false, true, *k}};
        case Op1::Y: return std::pair{f.qubit, Pauli1{true, true, (*k + 1) & 3}};  // Y = iXZ
        default: return std::nullopt;
    }
}

CorrectionOp correction_of(int qubit, const Pauli1& p) {
    using K = CorrectionOp::Kind;
    if (p.x && p.z) return {K::PAULI_Y, qubit, kIPow[(p.phase + 3) & 3], 0};  // XZ = -iY
    if (p.x) return {K::PAULI_X, qubit, kIPow[p.phase & 3], 0};
    if (p.z) return {K::PAULI_Z, qubit, kIPow[p.phase & 3], 0};
    return {K::IDENTITY, qubit, kIPow[p.phase & 3], 0};
}

OperatorSum correction_operator(const CorrectionOp& op, int n_qubits) {
    using K = CorrectionOp::Kind;
    const int q = op.qubit;
    const double r = 1.0 / std::numbers::sqrt2;
    const cplx ph = op.phase;
    switch (op.kind) {
        case K::IDENTITY: return OperatorSum(n_qubits, {PauliTerm::identity(ph)});
        case K::PAULI_X: return OperatorSum(n_qubits, {PauliTerm::single(q, Op1::X, ph)});
        case K::PAULI_Y: return OperatorSum(n_qubits, {PauliTerm::single(q, Op1::Y, ph)});
        case K::PAULI_Z: return OperatorSum(n_qubits, {PauliTerm::single(q, Op1::Z, ph)});
        case K::Z_ROT:
            return OperatorSum(n_qubits,
                               {PauliTerm::identity(ph * r), PauliTerm::single(q, Op1::Z, ph * r * kI * double(op.sign))});
        case K::Y_ROT:
            return OperatorSum(n_qubits,
                               {PauliTerm::identity(ph * r), PauliTerm::single(q, Op1::Y, ph * r * kI * double(op.sign))});
        case K::HADAMARD:
            return OperatorSum(n_qubits, {PauliTerm::single(q, Op1::X, ph * r), PauliTerm::single(q, Op1::Z, ph * r)});
    }
    throw ConfigError("unknown correction kind");
}

StateVector apply_corrections(StateVector state, const std::vector<CorrectionOp>& ops) {
    for (const auto& op : ops) state = apply(state, correction_operator(op, state.n_qubits()));
    return state;
}

std::string format_corrections(const std::vector<CorrectionOp>& ops) {
    using K = CorrectionOp::Kind;
    std::ostringstream os;
    for (const auto& op : ops) {
        const char* name = "I";
        switch (op.kind) {
            case K::IDENTITY: name = "I"; break;
            case K::PAULI_X: name = "X"; break;
            case K::PAULI_Y: name = "Y"; break;
            case K::PAULI_Z: name = "Z"; break;
            case K::Z_ROT: name = op.sign > 0 ? "Z+" : "Z-"; break;
            case K::Y_ROT: name = op.sign > 0 ? "Y+" : "Y-"; break;
            case K::HADAMARD: name = "H"; break;
        }
        os << op.qubit << ' ' << name << ' ' << phase_token(op.phase) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------- teleportation

ProtocolScript teleport_script(cplx alpha, cplx beta, double stage_b_duration, double t_meas, double gamma) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
        throw ConfigError("teleported amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
    if (!(stage_b_duration >= 0.0) || !(t_meas > 0.0)) throw ConfigError("stage durations must be positive");
    constexpr int A = 0, B = 1, C = 2;

    ProtocolScript script;
    script.register_size = 3;
    script.gamma = gamma;
    script.roles = {{"A", A}, {"B", B}, {"C", C}};
    StateVector init(3);
    init[0b000] = alpha;
    init[0b001] = beta;
    script.initial = init;

    auto entangling_stage = [&](const char* label, int partner) {
        Stage s{label, OpticalLayout(3), Termination::clicks(1, ChannelKind::ENTANGLE)};
        add_local_ports(s.layout, gamma);
        s.layout.combine("x" + std::to_string(A), "x" + std::to_string(partner));
        return s;
    };

    script.stages.push_back(entangling_stage("a: entangle A-B", B));

    Stage b{"b: local flips", OpticalLayout(3), Termination::after(stage_b_duration)};
    add_local_ports(b.layout, gamma);
    script.stages.push_back(std::move(b));

    script.stages.push_back(entangling_stage("c: entangle A-C", C));

    Stage d{"d: measure A and C", OpticalLayout(3), Termination::measure({A, C}, t_meas)};
    d.layout.add(se_channel(3, A, gamma));
    d.layout.add(se_channel(3, C, gamma));
    d.layout.add_flip_ports(B, gamma);
    script.stages.push_back(std::move(d));
    return script;
}

CorrectionOp pauli_correction(const TrajectoryLog& log, const std::map<std::string, int>& roles) {
    auto role = [&](const char* name) {
        const auto it = roles.find(name);
        if (it == roles.end()) throw ConfigError(std::string("missing role ") + name);
        return it->second;
    };
    const int A = role("A"), B = role("B"), C = role("C");
    std::map<int, Pauli1> frame;
    std::optional<int> s_ab, s_ac, out_a, out_c;

    // Measurements are resolved against the frame at their own time.
    std::size_t next_meas = 0;
    auto resolve_measurements_until = [&](double t) {
        for (; next_meas < log.measurements.size() && log.measurements[next_meas].time <= t; ++next_meas) {
            const auto& m = log.measurements[next_meas];
            const int ideal = m.outcome ^ static_cast<int>(frame[m.qubit].x);
            if (m.qubit == A) out_a = ideal;
            else if (m.qubit == C) out_c = ideal;
            else throw LogCorruption("measurement of unexpected qubit " + std::to_string(m.qubit));
        }
    };

    for (const auto& click : log.clicks) {
        // A measurement at this click's time was made by this click (SE) or
        // earlier; flips of A and C have ended by then.
        if (click.kind != ChannelKind::SE) resolve_measurements_until(std::nextafter(click.time, -1.0));
        switch (click.kind) {
            case ChannelKind::FLIP: {
                const auto p = as_pauli(click.op);
                if (!p) throw LogCorruption("flip click " + click.detector + " is not a Pauli");
                frame[p->first] = p->second * frame[p->first];
                break;
            }
            case ChannelKind::ENTANGLE: {
                const auto shape = entangle_shape(click.op);
                if (!shape || shape->sign != click.sign)
                    throw LogCorruption("entangling click " + click.detector + " has an unexpected operator");
                const int eff = shape->sign * eps(frame[shape->j]) * eps(frame[shape->k]);
                if (shape->j == A && shape->k == B && !s_ab) s_ab = eff;
                else if (shape->j == A && shape->k == C && !s_ac) s_ac = eff;
                else throw LogCorruption("unexpected entangling click " + click.detector);
                break;
            }
            case ChannelKind::SE:
                if (click.qubits != std::vector<int>{A} && click.qubits != std::vector<int>{C})
                    throw LogCorruption("emission click on " + click.detector);
                break;
            default:
                throw LogCorruption("teleportation log holds a " + std::string(kind_name(click.kind)) + " click");
        }
    }
    resolve_measurements_until(std::numeric_limits<double>::infinity());
    if (!s_ab || !s_ac) throw ProtocolIncomplete("teleportation log lacks an entangling click");
    if (!out_a || !out_c) throw ProtocolIncomplete("teleportation log lacks a measurement of A or C");

    // Flip-free Bob state for outcomes (a, c) and signs s1 s2:
    //   a = 0: psi(c)|0> - s1 s2 psi(c^1)|1>,  a = 1: psi(c^1)|0> + s1 s2 psi(c)|1>
    // so the ideal correction is Z^z X^x with x = a ^ c, z = [s1 s2 = +1] ^ a.
    const bool x = (*out_a ^ *out_c) != 0;
    const bool z = ((*s_ab * *s_ac) > 0) != (*out_a != 0);
    const Pauli1 ideal = Pauli1{false, z, 0} * Pauli1{x, false, 0};
    return correction_of(B, ideal * frame[B].inverse());
}

StateVector extract_qubit(const StateVector& state, int qubit) {
    if (qubit < 0 || qubit >= state.n_qubits()) throw ConfigError("qubit out of range");
    const std::size_t bit = qubit_mask(state.n_qubits(), qubit);
    std::size_t best = 0;
    for (std::size_t i = 1; i < state.dimension(); ++i)
        if (std::abs(state[i]) > std::abs(state[best])) best = i;
    const std::size_t base = best & ~bit;
    double rest = 0.0;
    for (std::size_t i = 0; i < state.dimension(); ++i)
        if ((i & ~bit) != base) rest += std::norm(state[i]);
    if (rest > 1e-18 * state.norm_squared())
        throw ConfigError("other qubits are not in a computational basis state");
    return normalize(StateVector(1, {state[base], state[base | bit]}));
}

// ---------------------------------------------------------------- graph states

ProtocolScript graph_script(const GraphSpec& graph, Wiring wiring, double gamma) {
    if (graph.n_edges() == 0) throw ConfigError("graph has no edges to entangle");
    const int n = graph.n_vertices();
    ProtocolScript script;
    script.register_size = n;
    script.gamma = gamma;

    if (wiring == Wiring::SEQUENTIAL_CHAIN) {
        for (const auto& [u, v] : graph.edges()) {
            Stage s{"edge " + std::to_string(u) + "-" + std::to_string(v), OpticalLayout(n),
                    Termination::clicks(1, ChannelKind::ENTANGLE)};
            add_local_ports(s.layout, gamma);
            s.layout.combine("x" + std::to_string(u), "x" + std::to_string(v));
            script.stages.push_back(std::move(s));
        }
        return script;
    }

    Stage s{"entangle all edges", OpticalLayout(n),
            Termination::clicks(static_cast<int>(graph.n_edges()), ChannelKind::ENTANGLE)};
    std::vector<JumpChannel> x_full;
    std::vector<double> lent(static_cast<std::size_t>(n), 0.0);
    for (int q = 0; q < n; ++q) {
        auto [x, y] = pbs_erase(se_channel(n, q, gamma), is_channel(n, q, gamma), 0.0);
        x_full.push_back(std::move(x));
        s.layout.add(std::move(y));
    }
    std::vector<std::pair<std::string, std::string>> shares;
    for (std::size_t e = 0; e < graph.n_edges(); ++e) {
        const auto [u, v] = graph.edges()[e];
        const double share = 0.5 * gamma / std::max(graph.degree(u), graph.degree(v));
        const std::string tag = ".e" + std::to_string(e);
        s.layout.add(split_channel(x_full[u], share, x_full[u].id + tag));
        s.layout.add(split_channel(x_full[v], share, x_full[v].id + tag));
        lent[u] += share;
        lent[v] += share;
        shares.emplace_back(x_full[u].id + tag, x_full[v].id + tag);
    }
    for (int q = 0; q < n; ++q) {
        const double left = x_full[q].rate - lent[q];
        if (left > 1e-12 * gamma) s.layout.add(split_channel(x_full[q], left, x_full[q].id));
    }
    for (const auto& [a, b] : shares) s.layout.combine(a, b);
    script.stages.push_back(std::move(s));
    return script;
}

std::vector<CorrectionOp> graph_correction(const TrajectoryLog& log, const GraphSpec& graph) {
    const int n = graph.n_vertices();
    std::vector<Pauli1> frame(static_cast<std::size_t>(n));
    std::vector<int> m(static_cast<std::size_t>(n), 0);
    std::map<std::pair<int, int>, bool> clicked;
    for (const auto& [u, v] : graph.edges()) clicked[{std::min(u, v), std::max(u, v)}] = false;

    for (const auto& click : log.clicks) {
        switch (click.kind) {
            case ChannelKind::FLIP: {
                const auto p = as_pauli(click.op);
                if (!p || p->first >= n) throw LogCorruption("flip click " + click.detector + " is not a Pauli");
                frame[p->first] = p->second * frame[p->first];
                break;
            }
            case ChannelKind::ENTANGLE: {
                const auto shape = entangle_shape(click.op);
                if (!shape || shape->sign != click.sign)
                    throw LogCorruption("entangling click " + click.detector + " has an unexpected operator");
                const auto it = clicked.find({std::min(shape->j, shape->k), std::max(shape->j, shape->k)});
                if (it == clicked.end()) throw LogCorruption("entangling click on a non-edge " + click.detector);
                if (it->second) throw LogCorruption("edge " + click.detector + " entangled twice");
                it->second = true;
                const int eff = shape->sign * eps(frame[shape->j]) * eps(frame[shape->k]);
                m[shape->j] -= eff;
                m[shape->k] += eff;
                break;
            }
            default:
                throw LogCorruption("graph log holds a " + std::string(kind_name(click.kind)) + " click");
        }
    }
    for (const auto& [e, done] : clicked)
        if (!done)
            throw ProtocolIncomplete("edge " + std::to_string(e.first) + "-" + std::to_string(e.second) +
                                     " never clicked");

    using K = CorrectionOp::Kind;
    std::vector<CorrectionOp> ops;
    for (int q = 0; q < n; ++q) {
        const Pauli1 undo = frame[q].inverse();
        if (!undo.is_identity()) ops.push_back(correction_of(q, undo));
        ops.push_back({K::HADAMARD, q, 1.0, 0});
        // exp(-i pi/4 m sigma_z) = exp(i pi/4 t sigma_z), t = -m mod 4
        const int t = ((-m[q]) % 4 + 4) % 4;
        if (t == 1) ops.push_back({K::Z_ROT, q, 1.0, +1});
        if (t == 2) ops.push_back({K::PAULI_Z, q, kI, 0});
        if (t == 3) ops.push_back({K::Z_ROT, q, 1.0, -1});
    }
    return ops;
}

StateVector standard_graph_state(const GraphSpec& graph) {
    const int n = graph.n_vertices();
    StateVector s(n);
    const double amp = std::pow(2.0, -0.5 * n);
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        int parity = 0;
        for (const auto& [u, v] : graph.edges())
            parity ^= static_cast<int>((i & qubit_mask(n, u)) && (i & qubit_mask(n, v)));
        s[i] = parity ? -amp : amp;
    }
    return s;
}

std::vector<Gate> clifford_of(const JumpChannel& channel) {
    if (const auto p = as_pauli(channel.op)) {
        const auto [q, pauli] = *p;
        if (pauli.x && pauli.z) return {Gate::y(q)};
        if (pauli.x) return {Gate::x(q)};
        return {Gate::z(q)};
    }
    if (const auto e = entangle_shape(channel.op)) return {Gate::xjk(e->sign, e->j, e->k)};
    if (const auto mix = mix_shape(channel.op)) {
        // (I + iY)/sqrt2 = Z H, (I - iY)/sqrt2 = H Z (rightmost first)
        const auto [q, sign] = *mix;
        if (sign > 0) return {Gate::h(q), Gate::z(q)};
        return {Gate::z(q), Gate::h(q)};
    }
    throw UnsupportedConfiguration("channel " + channel.id + " is not a Clifford jump");
}

void apply_corrections(StabilizerTableau& tab, const std::vector<CorrectionOp>& ops) {
    using K = CorrectionOp::Kind;
    for (const auto& op : ops) {
        const int q = op.qubit;
        switch (op.kind) {
            case K::IDENTITY: break;
            case K::PAULI_X: tab.pauli_x(q); break;
            case K::PAULI_Y: tab.pauli_y(q); break;
            case K::PAULI_Z: tab.pauli_z(q); break;
            case K::HADAMARD: tab.h(q); break;
            // exp(+i pi/4 Z) ~ S^dag, exp(-i pi/4 Z) ~ S
            case K::Z_ROT: op.sign > 0 ? tab.sdg(q) : tab.s(q); break;
            case K::Y_ROT:
                if (op.sign > 0) {
                    tab.h(q);
                    tab.pauli_z(q);
                } else {
                    tab.pauli_z(q);
                    tab.h(q);
                }
                break;
        }
    }
}

namespace {

class TableauBackend {
public:
    static constexpr bool kNeedsDiagonal = false;

    explicit TableauBackend(int n) : tab_(n) {}
    StabilizerTableau take() { return std::move(tab_); }

    double rate(const JumpChannel& ch) const {
        throw UnsupportedConfiguration("tableau backend needs unitary jumps; " + ch.id + " is not");
    }
    void jump(const JumpChannel& ch) {
        for (const auto& g : clifford_of(ch)) tab_.apply(g);
    }
    double waiting_time(const DecayReport& decay, std::span<const double>, double r) const {
        require_uniform(decay);
        return decay.uniform_rate > 0.0 ? -std::log(r) / decay.uniform_rate
                                        : std::numeric_limits<double>::infinity();
    }
    void evolve(const DecayReport& decay, std::span<const double>, double) const { require_uniform(decay); }
    void project_ground(int) { throw UnsupportedConfiguration("tableau backend cannot run measurement stages"); }

private:
    static void require_uniform(const DecayReport& decay) {
        if (decay.kind != DecayClass::UNIFORM)
            throw UnsupportedConfiguration("tableau backend needs a uniform total decay");
    }
    StabilizerTableau tab_;
};

}  // namespace

TableauRun run_tableau(const ProtocolScript& script, RngStream& rng) {
    if (script.initial) throw ConfigError("tableau runs start from |0...0>");
    TableauBackend backend(script.n_qubits());
    TrajectoryLog log = detail::run_stages(script, backend, rng, RunOptions{});
    return {std::move(log), backend.take()};
}

// ---------------------------------------------------------------- classical source

ProtocolScript hadamard_via_mix(ProtocolScript script, int qubit, int sign) {
    if (sign != 1 && sign != -1) throw ConfigError("mix sign must be +1 or -1");
    if (qubit < 0 || qubit >= script.n_qubits()) throw ConfigError("mix qubit out of range");
    if (script.stages.empty()) throw ConfigError("script has no stage to extend");
    const std::string y_id = "y" + std::to_string(qubit);
    const auto& last = script.stages.back().layout;
    const auto found = last.find(y_id);
    if (!found || !as_pauli(last.channels()[*found].op) || last.channels()[*found].kind != ChannelKind::FLIP)
        throw ConfigError("qubit " + std::to_string(qubit) + " has no sigma_y port to mix");

    Stage s{"mix " + std::to_string(qubit), OpticalLayout(script.n_qubits()),
            Termination::clicks(1, ChannelKind::CLASSICAL_MIX)};
    add_local_ports(s.layout, script.gamma);
    s.layout.mix(y_id);
    script.mix_targets.push_back({qubit, sign, script.stages.size()});
    script.stages.push_back(std::move(s));
    return script;
}

std::vector<CorrectionOp> mix_correction(const TrajectoryLog& log, const ProtocolScript& script) {
    // Per qubit, D with (actual state) = (prod D_q)(ideal state); every D stays
    // a Pauli since M D R^dag = (M R^dag)(R D R^dag) for mix rotations M, R.
    std::map<int, Mat2> frame;
    auto frame_of = [&](int q) -> Mat2& { return frame.try_emplace(q, Mat2{1.0, 0.0, 0.0, 1.0}).first->second; };

    for (const auto& target : script.mix_targets) {
        if (target.stage >= log.stage_marks.size())
            throw ProtocolIncomplete("mix stage " + std::to_string(target.stage) + " never ran");
        const std::size_t begin = log.stage_marks[target.stage].first_click;
        const std::size_t end = target.stage + 1 < log.stage_marks.size()
                                    ? log.stage_marks[target.stage + 1].first_click
                                    : log.clicks.size();
        bool mixed = false;
        for (std::size_t c = begin; c < end; ++c) {
            const auto& click = log.clicks[c];
            if (click.kind == ChannelKind::CLASSICAL_MIX) {
                const auto shape = mix_shape(click.op);
                if (!shape || shape->first != target.qubit || mixed)
                    throw LogCorruption("unexpected mix click " + click.detector);
                Mat2& d = frame_of(target.qubit);
                d = mul(mul(y_rotation(shape->second), d), dagger(y_rotation(target.sign)));
                mixed = true;
            } else if (click.kind == ChannelKind::FLIP) {
                const auto p = as_pauli(click.op);
                if (!p) throw LogCorruption("flip click " + click.detector + " is not a Pauli");
                Mat2& d = frame_of(p->first);
                d = mul(pauli_matrix(p->second), d);
            } else {
                throw LogCorruption("mix stage holds a " + std::string(kind_name(click.kind)) + " click");
            }
        }
        if (!mixed) throw ProtocolIncomplete("mix stage ended without a mix click");
    }

    std::vector<CorrectionOp> ops;
    for (const auto& [q, d] : frame) {
        bool matched = false;
        for (const Pauli1 p : {Pauli1{false, false, 0}, Pauli1{true, false, 0}, Pauli1{false, true, 0},
                               Pauli1{true, true, 1}}) {
            // d = c P  <=>  P^dag d = c I
            const Mat2 prod = mul(dagger(pauli_matrix(p)), d);
            const cplx c = prod[0];
            if (std::abs(prod[1]) > 1e-9 || std::abs(prod[2]) > 1e-9 || std::abs(prod[3] - c) > 1e-9) continue;
            if (p.is_identity() && std::abs(c - 1.0) < 1e-12) {
                matched = true;
                break;
            }
            CorrectionOp op = correction_of(q, p);  // P^-1 = P for these Hermitian Paulis
            op.phase /= c;
            ops.push_back(op);
            matched = true;
            break;
        }
        if (!matched) throw LogCorruption("mix stages left a non-Pauli frame");
    }
    return ops;
}

}  // namespace jumpforge
