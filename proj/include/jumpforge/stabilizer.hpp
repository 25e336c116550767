#pragma once

// Bit-packed binary-symplectic tableau (destabilizers + stabilizers).
//
// Row r is the Pauli i^phase(r) * prod_q X_q^x(r,q) Z_q^z(r,q). Rows 0..n-1
// are destabilizers, rows n..2n-1 stabilizers. Phases are kept mod 4 because
// the entangling jumps X_jk^+- = (X_j +- i X_k)/sqrt2 are Clifford but their
// decomposition passes through S gates.
//
// Storage is column-major: for each qubit one bit vector over the 2n rows for
// x and one for z, and the phase as two bit planes. A gate then touches only
// its own columns, 2n/64 words each.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jumpforge/graph.hpp"
#include "jumpforge/qstate.hpp"

namespace jumpforge {

struct Gate {
    enum class Kind { H, S, SDG, CX, CZ, X, Y, Z, XJK };
    Kind kind = Kind::H;
    int a = 0;
    int b = -1;    // second qubit of CX/CZ/XJK
    int sign = 1;  // XJK sign

    static Gate h(int q) { return {Kind::H, q}; }
    static Gate s(int q) { return {Kind::S, q}; }
    static Gate sdg(int q) { return {Kind::SDG, q}; }
    static Gate cx(int c, int t) { return {Kind::CX, c, t}; }
    static Gate cz(int a, int b) { return {Kind::CZ, a, b}; }
    static Gate x(int q) { return {Kind::X, q}; }
    static Gate y(int q) { return {Kind::Y, q}; }
    static Gate z(int q) { return {Kind::Z, q}; }
    /// The entangling jump (X_j + sign i X_k)/sqrt2.
    static Gate xjk(int sign, int j, int k) { return {Kind::XJK, j, k, sign}; }
};

/// Parses "H", "S", "SDG", "CX", "CZ", "X", "Y", "Z", "XJK+" or "XJK-" with
/// its qubit operands. Unknown labels throw ConfigError.
Gate parse_gate(std::string_view label, const std::vector<int>& qubits);
std::string gate_label(const Gate& g);

/// Gate sequence equal (up to global phase) to X_jk^sign.
std::vector<Gate> xjk_decomposition(int sign, int j, int k);

class StabilizerTableau {
public:
    StabilizerTableau() = default;
    /// |0...0>: destabilizers X_q, stabilizers Z_q.
    explicit StabilizerTableau(int n_qubits);

    /// Graph state with stabilizers K_v = X_v prod_{u in N(v)} Z_u.
    static StabilizerTableau from_graph(const GraphSpec& graph);

    int n_qubits() const noexcept { return n_; }

    bool x(int row, int qubit) const;
    bool z(int row, int qubit) const;
    int phase(int row) const;

    void apply(const Gate& g);
    void h(int q);
    void s(int q);
    void sdg(int q);
    void cx(int control, int target);
    void cz(int a, int b);
    void pauli_x(int q);
    void pauli_y(int q);
    void pauli_z(int q);

    /// Stabilizers pairwise commute, destabilizers pairwise commute,
    /// destabilizer i anticommutes exactly with stabilizer i, and rows are
    /// Hermitian.
    bool is_valid() const;
    /// Throws IntegrityError if !is_valid().
    void check() const;

    /// Row as an operator term (coefficient = phase) for statevector use.
    PauliTerm row_term(int row) const;
    /// Generators, one per line, e.g. "+XZI" / "-iYYZ" (destabilizers if asked).
    std::string dump(bool include_destabilizers = false) const;

    friend bool operator==(const StabilizerTableau&, const StabilizerTableau&) = default;

private:
    friend bool states_equal(const StabilizerTableau&, const StabilizerTableau&);

    struct Rows;
    Rows rows() const;

    std::uint64_t* xcol(int q) { return x_.data() + static_cast<std::size_t>(q) * words_; }
    std::uint64_t* zcol(int q) { return z_.data() + static_cast<std::size_t>(q) * words_; }
    const std::uint64_t* xcol(int q) const { return x_.data() + static_cast<std::size_t>(q) * words_; }
    const std::uint64_t* zcol(int q) const { return z_.data() + static_cast<std::size_t>(q) * words_; }
    void set_x(int row, int q) { xcol(q)[row >> 6] |= std::uint64_t{1} << (row & 63); }
    void set_z(int row, int q) { zcol(q)[row >> 6] |= std::uint64_t{1} << (row & 63); }
    void check_qubit(int q) const;

    int n_ = 0;
    std::size_t words_ = 0;  // words per column (2n rows)
    std::vector<std::uint64_t> x_;
    std::vector<std::uint64_t> z_;
    std::vector<std::uint64_t> phase_lo_;  // bit 0 of each row phase
    std::vector<std::uint64_t> phase_hi_;  // bit 1
};

StabilizerTableau apply_gate(StabilizerTableau tab, const Gate& g);

/// True iff both tableaux stabilize the same state (up to global phase).
/// Each stabilizer of b is rebuilt from a's stabilizers, selected by which of
/// a's destabilizers it anticommutes with, and compared bit- and phase-wise.
bool states_equal(const StabilizerTableau& a, const StabilizerTableau& b);

/// Dense state stabilized by the tableau (n <= 20), by projecting a fixed
/// generic vector with prod (I + S_i)/2.
StateVector to_statevector(const StabilizerTableau& tab);

}  // namespace jumpforge
