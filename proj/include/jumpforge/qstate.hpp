#pragma once

// Dense n-qubit statevectors and weighted Pauli-type operator strings.
//
// Basis convention: qubit 0 is the most significant bit of the amplitude
// index, so |b0 b1 ... b(n-1)> lives at index sum_q b_q * 2^(n-1-q).
// Logical |0> is the emitter ground state |g>, |1> the excited state |e>.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jumpforge {

using cplx = std::complex<double>;

/// Norm below which an operator output counts as annihilated.
inline constexpr double kZeroNorm = 1e-14;

/// Largest register the dense engine accepts (2^26 amplitudes, 1 GiB).
inline constexpr int kMaxDenseQubits = 26;

/// Single-qubit factor. SM is the lowering operator |0><1|, SP the raising |1><0|.
enum class Op1 : std::uint8_t { I, X, Y, Z, SM, SP };

char op1_symbol(Op1 op);

struct Factor {
    int qubit;
    Op1 op;
    friend bool operator==(const Factor&, const Factor&) = default;
};

/// coefficient * (tensor product of single-qubit factors). Identity factors
/// are dropped on construction; factors are kept sorted by qubit.
class PauliTerm {
public:
    PauliTerm() = default;
    PauliTerm(cplx coefficient, std::vector<Factor> factors);

    static PauliTerm identity(cplx coefficient = 1.0) { return {coefficient, {}}; }
    static PauliTerm single(int qubit, Op1 op, cplx coefficient = 1.0) {
        return {coefficient, {{qubit, op}}};
    }

    cplx coefficient() const noexcept { return coefficient_; }
    std::span<const Factor> factors() const noexcept { return factors_; }
    PauliTerm scaled(cplx s) const;
    /// Op1::I when the qubit is untouched.
    Op1 factor_on(int qubit) const;

private:
    cplx coefficient_{1.0};
    std::vector<Factor> factors_;
};

/// Sum of PauliTerms on a fixed register size.
class OperatorSum {
public:
    OperatorSum() = default;
    OperatorSum(int n_qubits, std::vector<PauliTerm> terms);

    int n_qubits() const noexcept { return n_qubits_; }
    std::span<const PauliTerm> terms() const noexcept { return terms_; }
    /// Sorted set of qubits touched by any term.
    std::vector<int> support() const;

    OperatorSum scaled(cplx s) const;
    friend OperatorSum operator+(const OperatorSum& a, const OperatorSum& b);

private:
    int n_qubits_{0};
    std::vector<PauliTerm> terms_;
};

class StateVector {
public:
    StateVector() = default;
    /// Zero vector of n qubits.
    explicit StateVector(int n_qubits);
    StateVector(int n_qubits, std::vector<cplx> amplitudes);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
    std::span<cplx> amplitudes() noexcept { return amplitudes_; }
    cplx operator[](std::size_t i) const { return amplitudes_[i]; }
    cplx& operator[](std::size_t i) { return amplitudes_[i]; }

    double norm_squared() const;

private:
    int n_qubits_{0};
    std::vector<cplx> amplitudes_;
};

/// Bit of `qubit` in a basis index of an n-qubit register.
inline std::size_t qubit_mask(int n_qubits, int qubit) {
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

StateVector basis_state(int n_qubits, std::string_view bits);

/// op|psi>, unnormalized. Throws Annihilation if the result has norm < kZeroNorm.
StateVector apply(const StateVector& state, const OperatorSum& op);

/// ||op|psi>||^2, the instantaneous detection rate <psi|L^dag L|psi> of a
/// jump operator L. Zero for annihilating channels; never throws Annihilation.
double jump_rate(const StateVector& state, const OperatorSum& op);

StateVector normalize(const StateVector& state);

/// <a|b>
cplx inner(const StateVector& a, const StateVector& b);

/// |<a|b>|^2 for normalized a, b.
double fidelity(const StateVector& a, const StateVector& b);

/// One "index real imag" line per amplitude with magnitude >= kZeroNorm.
std::string dump(const StateVector& state);

/// Raw kernels. The *_serial variants are straight loops kept as the
/// reference; the *_parallel variants split work across OpenMP threads.
/// Reductions sum fixed-size blocks and then combine the block sums in order,
/// so their result does not depend on the thread count.
namespace kernels {

/// Precomputed index arithmetic of one PauliTerm.
struct TermMasks {
    std::size_t flip = 0;        // bits toggled by X, Y, SM, SP
    std::size_t sign = 0;        // bits contributing (-1)^bit (Y, Z)
    std::size_t require = 0;     // bits constrained by SM/SP
    std::size_t require_value = 0;
    cplx scale{1.0};             // coefficient * i^(#Y)
};

TermMasks term_masks(const PauliTerm& term, int n_qubits);

/// out[i ^ flip] += scale * (-1)^popcount(i & sign) * in[i] for admissible i.
void accumulate_term_serial(std::span<const cplx> in, std::span<cplx> out, const TermMasks& m);
void accumulate_term_parallel(std::span<const cplx> in, std::span<cplx> out, const TermMasks& m);

double norm_squared_serial(std::span<const cplx> v);
double norm_squared_parallel(std::span<const cplx> v);

cplx inner_serial(std::span<const cplx> a, std::span<const cplx> b);
cplx inner_parallel(std::span<const cplx> a, std::span<const cplx> b);

/// Registers at or above this size take the parallel path.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

}  // namespace kernels

}  // namespace jumpforge
