#pragma once

// Protocol scripts (teleportation, graph-state generation, classical-source
// basis change) and the bookkeeping that turns a click record into the local
// corrections it calls for.
//
// Corrections are derived by tracking a Pauli frame: every local flip click
// is pushed into a per-qubit Pauli F, and every later entangling click
// X_jk^s = (X_j + s i X_k)/sqrt2 is conjugated through it,
// F^dag X_jk^s F = +-X_jk^{s eps_j eps_k} with eps_q = -1 when F_q anticommutes
// with X_q. The ideal (flip-free) evolution therefore sees effective signs,
// and the frame itself is undone at the end.

#include <optional>
#include <string>
#include <vector>

#include "jumpforge/graph.hpp"
#include "jumpforge/script.hpp"
#include "jumpforge/stabilizer.hpp"
#include "jumpforge/trajectory.hpp"

namespace jumpforge {

/// Single-qubit Pauli i^phase X^x Z^z.
struct Pauli1 {
    bool x = false;
    bool z = false;
    int phase = 0;

    friend Pauli1 operator*(const Pauli1& a, const Pauli1& b);
    Pauli1 inverse() const;
    bool is_identity() const { return !x && !z; }
    friend bool operator==(const Pauli1&, const Pauli1&) = default;
};

/// The Pauli a single-qubit click operator is proportional to, if any.
std::optional<std::pair<int, Pauli1>> as_pauli(const OperatorSum& op);

struct CorrectionOp {
    enum class Kind { IDENTITY, PAULI_X, PAULI_Y, PAULI_Z, Z_ROT, Y_ROT, HADAMARD };
    Kind kind = Kind::IDENTITY;
    int qubit = 0;
    /// Unit prefactor, a power of i.
    cplx phase{1.0};
    /// Z_ROT / Y_ROT: exp(sign i pi/4 sigma).
    int sign = 0;
};

CorrectionOp correction_of(int qubit, const Pauli1& p);
OperatorSum correction_operator(const CorrectionOp& op, int n_qubits);
StateVector apply_corrections(StateVector state, const std::vector<CorrectionOp>& ops);

/// "qubit op phase" lines; op is I, X, Y, Z, Z+, Z-, Y+, Y- or H and phase one
/// of +1, -1, +i, -i.
std::string format_corrections(const std::vector<CorrectionOp>& ops);

// ---------------------------------------------------------------- teleportation

/// Roles A = 0 (Alice), B = 1 (Bob), C = 2 (Charlie, holding alpha|0> + beta|1>).
/// Stages: a) BS on the sigma_x ports of A and B until the first entangling
/// click; b) local flips only, for stage_b_duration; c) BS on A and C until the
/// first entangling click; d) pumps on A and C off, s.e. readout of A and C
/// with cutoff t_meas while B keeps its flip ports.
ProtocolScript teleport_script(cplx alpha, cplx beta, double stage_b_duration, double t_meas,
                               double gamma = 1.0);

/// Pauli (with phase) Bob applies after a completed teleportation run.
CorrectionOp pauli_correction(const TrajectoryLog& log, const std::map<std::string, int>& roles);

/// Bob's qubit once A and C are in basis states. Throws if not a product state.
StateVector extract_qubit(const StateVector& state, int qubit);

// ---------------------------------------------------------------- graph states

enum class Wiring {
    /// All edges at once; a vertex of degree d lends each pending edge a share
    /// of its sigma_x rate (see graph_script).
    PAIRWISE_SPLIT,
    /// One edge at a time, in edge-list order, at the full sigma_x rate.
    SEQUENTIAL_CHAIN
};

/// Graph-state generation from |0...0>. sigma_y ports stay local; sigma_x
/// ports of each edge are BS-combined and restored after the edge's first
/// click. Under PAIRWISE_SPLIT edge (u, v) receives gamma / (2 max(d_u, d_v))
/// from each endpoint so both BS inputs carry equal rates; any remainder of a
/// vertex's gamma / 2 stays a local sigma_x port.
ProtocolScript graph_script(const GraphSpec& graph, Wiring wiring = Wiring::PAIRWISE_SPLIT,
                            double gamma = 1.0);

/// Local operations taking the generated state to prod cZ |+>^N, in
/// application order: per qubit, undo the Pauli frame, Hadamard, then a
/// Z rotation exp(-i pi/4 m_j sigma_z), with m_j the signed sum of the
/// X_j^-+ factors from X_jk^s = e^{s i pi/4} X_j^{-s} X_k^{s} cX_jk.
std::vector<CorrectionOp> graph_correction(const TrajectoryLog& log, const GraphSpec& graph);

/// prod_{(j,k)} cZ_jk |+>^N built directly from amplitudes.
StateVector standard_graph_state(const GraphSpec& graph);

/// Runs a Clifford-only script on a tableau. Every active channel must be a
/// unitary jump (Pauli flip, entangling port or classical mix) and the
/// initial state |0...0>.
struct TableauRun {
    TrajectoryLog log;
    StabilizerTableau tableau;
};
TableauRun run_tableau(const ProtocolScript& script, RngStream& rng);

/// Gate sequence realising a unitary jump channel on the tableau.
std::vector<Gate> clifford_of(const JumpChannel& channel);

/// Applies corrections made only of Paulis, Hadamards and Z rotations.
void apply_corrections(StabilizerTableau& tab, const std::vector<CorrectionOp>& ops);

// ---------------------------------------------------------------- classical source

/// Appends a stage where `qubit`'s sigma_y port is mixed with a classical
/// field (both BS outputs monitored) until the first mix click; every other
/// port is local. The requested rotation exp(sign i pi/4 sigma_y) is recorded
/// in script.mix_targets.
ProtocolScript hadamard_via_mix(ProtocolScript script, int qubit, int sign);

/// Paulis that turn what the mix stages actually did into the requested
/// rotations, applied after the run. A per-qubit frame D (actual = D ideal)
/// is carried through the mix stages in order: flips multiply D, a mix click
/// M where R = exp(sign i pi/4 Y) was requested maps D to M D R^dag. Clicks
/// outside mix stages are not considered.
std::vector<CorrectionOp> mix_correction(const TrajectoryLog& log, const ProtocolScript& script);

}  // namespace jumpforge
