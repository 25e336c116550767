#include "jumpforge/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "jumpforge/errors.hpp"

namespace jumpforge {

char op1_symbol(Op1 op) {
    switch (op) {
        case Op1::I: return 'I';
        case Op1::X: return 'X';
        case Op1::Y: return 'Y';
        case Op1::Z: return 'Z';
        case Op1::SM: return '-';
        case Op1::SP: return '+';
    }
    return '?';
}

PauliTerm::PauliTerm(cplx coefficient, std::vector<Factor> factors)
    : coefficient_(coefficient) {
    std::erase_if(factors, [](const Factor& f) { return f.op == Op1::I; });
    std::sort(factors.begin(), factors.end(),
              [](const Factor& a, const Factor& b) { return a.qubit < b.qubit; });
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].qubit < 0) throw ConfigError("negative qubit index in Pauli term");
        if (i > 0 && factors[i].qubit == factors[i - 1].qubit)
            throw ConfigError("Pauli term has two factors on qubit " +
                              std::to_string(factors[i].qubit));
    }
    factors_ = std::move(factors);
}

PauliTerm PauliTerm::scaled(cplx s) const {
    PauliTerm t = *this;
    t.coefficient_ *= s;
    return t;
}

Op1 PauliTerm::factor_on(int qubit) const {
    for (const auto& f : factors_)
        if (f.qubit == qubit) return f.op;
    return Op1::I;
}

OperatorSum::OperatorSum(int n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
    if (n_qubits < 1) throw ConfigError("operator needs at least one qubit");
    if (terms_.empty()) throw ConfigError("operator has no terms");
    for (const auto& t : terms_)
        for (const auto& f : t.factors())
            if (f.qubit >= n_qubits)
                throw ConfigError("qubit " + std::to_string(f.qubit) + " outside " +
                                  std::to_string(n_qubits) + "-qubit register");
}

std::vector<int> OperatorSum::support() const {
    std::vector<int> s;
    for (const auto& t : terms_)
        for (const auto& f : t.factors()) s.push_back(f.qubit);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

OperatorSum OperatorSum::scaled(cplx s) const {
    OperatorSum r = *this;
    for (auto& t : r.terms_) t = t.scaled(s);
    return r;
}

OperatorSum operator+(const OperatorSum& a, const OperatorSum& b) {
    if (a.n_qubits() != b.n_qubits()) throw ConfigError("operator register sizes differ");
    std::vector<PauliTerm> terms(a.terms().begin(), a.terms().end());
    terms.insert(terms.end(), b.terms().begin(), b.terms().end());
    return {a.n_qubits(), std::move(terms)};
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxDenseQubits)
        throw ConfigError("statevector size " + std::to_string(n_qubits) +
                          " outside [1, " + std::to_string(kMaxDenseQubits) + "]");
    amplitudes_.assign(std::size_t{1} << n_qubits, cplx{});
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes) : StateVector(n_qubits) {
    if (amplitudes.size() != amplitudes_.size())
        throw ConfigError("expected " + std::to_string(amplitudes_.size()) + " amplitudes, got " +
                          std::to_string(amplitudes.size()));
    amplitudes_ = std::move(amplitudes);
}

double StateVector::norm_squared() const {
    return dimension() >= kernels::kParallelThreshold ? kernels::norm_squared_parallel(amplitudes_)
                                                      : kernels::norm_squared_serial(amplitudes_);
}

StateVector basis_state(int n_qubits, std::string_view bits) {
    if (bits.size() != static_cast<std::size_t>(n_qubits))
        throw ConfigError("basis string length " + std::to_string(bits.size()) +
                          " does not match " + std::to_string(n_qubits) + " qubits");
    StateVector s(n_qubits);
    std::size_t index = 0;
    for (char b : bits) {
        if (b != '0' && b != '1') throw ConfigError("basis string must contain only 0 and 1");
        index = (index << 1) | static_cast<std::size_t>(b == '1');
    }
    s[index] = 1.0;
    return s;
}

namespace {

void check_sizes(const StateVector& state, const OperatorSum& op) {
    if (state.n_qubits() != op.n_qubits())
        throw ConfigError("operator acts on " + std::to_string(op.n_qubits()) +
                          " qubits, state has " + std::to_string(state.n_qubits()));
}

StateVector act(const StateVector& state, const OperatorSum& op) {
    check_sizes(state, op);
    StateVector out(state.n_qubits());
    const bool parallel = state.dimension() >= kernels::kParallelThreshold;
    for (const auto& term : op.terms()) {
        const auto m = kernels::term_masks(term, state.n_qubits());
        if (parallel)
            kernels::accumulate_term_parallel(state.amplitudes(), out.amplitudes(), m);
        else
            kernels::accumulate_term_serial(state.amplitudes(), out.amplitudes(), m);
    }
    return out;
}

}  // namespace

StateVector apply(const StateVector& state, const OperatorSum& op) {
    StateVector out = act(state, op);
    if (std::sqrt(out.norm_squared()) < kZeroNorm)
        throw Annihilation("operator annihilates the state");
    return out;
}

double jump_rate(const StateVector& state, const OperatorSum& op) {
    return act(state, op).norm_squared();
}

StateVector normalize(const StateVector& state) {
    const double norm = std::sqrt(state.norm_squared());
    if (norm < kZeroNorm) throw Annihilation("cannot normalize a zero vector");
    StateVector out = state;
    for (auto& a : out.amplitudes()) a /= norm;
    return out;
}

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) throw ConfigError("inner product of different register sizes");
    return a.dimension() >= kernels::kParallelThreshold
               ? kernels::inner_parallel(a.amplitudes(), b.amplitudes())
               : kernels::inner_serial(a.amplitudes(), b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::min(1.0, std::norm(inner(a, b)));
}

std::string dump(const StateVector& state) {
    std::ostringstream os;
    char buf[96];
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        const cplx a = state[i];
        if (std::abs(a) < kZeroNorm) continue;
        std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", i, a.real(), a.imag());
        os << buf;
    }
    return os.str();
}

}  // namespace jumpforge
