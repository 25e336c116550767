#include "jumpforge/pauli_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace jumpforge::pauli {

namespace {

bool string_less(const String& a, const String& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Factor& x, const Factor& y) {
                                            if (x.qubit != y.qubit) return x.qubit < y.qubit;
                                            return x.op < y.op;
                                        });
}

// a*b for single-qubit Paulis a, b in {X, Y, Z}: returns (phase, product).
std::pair<cplx, Op1> product1(Op1 a, Op1 b) {
    if (a == b) return {1.0, Op1::I};
    const cplx i{0.0, 1.0};
    // XY = iZ, YZ = iX, ZX = iY; reversed order carries -i.
    if (a == Op1::X && b == Op1::Y) return {i, Op1::Z};
    if (a == Op1::Y && b == Op1::X) return {-i, Op1::Z};
    if (a == Op1::Y && b == Op1::Z) return {i, Op1::X};
    if (a == Op1::Z && b == Op1::Y) return {-i, Op1::X};
    if (a == Op1::Z && b == Op1::X) return {i, Op1::Y};
    return {-i, Op1::Y};  // XZ
}

std::pair<cplx, String> multiply_strings(const String& a, const String& b) {
    cplx phase = 1.0;
    String out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].qubit < b[j].qubit)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].qubit < a[i].qubit) {
            out.push_back(b[j++]);
        } else {
            auto [ph, op] = product1(a[i].op, b[j].op);
            phase *= ph;
            if (op != Op1::I) out.push_back({a[i].qubit, op});
            ++i;
            ++j;
        }
    }
    return {phase, std::move(out)};
}

}  // namespace

Polynomial make_polynomial() { return Polynomial(&string_less); }

Polynomial expand(const OperatorSum& op) {
    Polynomial result = make_polynomial();
    const cplx i{0.0, 1.0};
    for (const auto& term : op.terms()) {
        // Each SM/SP factor splits into two Pauli branches.
        std::vector<std::pair<cplx, String>> branches{{term.coefficient(), {}}};
        for (const auto& f : term.factors()) {
            std::vector<std::pair<cplx, String>> next;
            auto push = [&](cplx c, Op1 o) {
                for (const auto& [bc, bs] : branches) {
                    String s = bs;
                    s.push_back({f.qubit, o});
                    next.emplace_back(bc * c, std::move(s));
                }
            };
            switch (f.op) {
                case Op1::SM: push(0.5, Op1::X); push(0.5 * i, Op1::Y); break;
                case Op1::SP: push(0.5, Op1::X); push(-0.5 * i, Op1::Y); break;
                case Op1::I: push(1.0, Op1::I); break;
                default: push(1.0, f.op); break;
            }
            for (auto& [c, s] : next) std::erase_if(s, [](const Factor& x) { return x.op == Op1::I; });
            branches = std::move(next);
        }
        for (auto& [c, s] : branches) result[s] += c;
    }
    return result;
}

Polynomial adjoint(const Polynomial& p) {
    Polynomial out = make_polynomial();
    for (const auto& [s, c] : p) out[s] = std::conj(c);
    return out;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
    Polynomial out = make_polynomial();
    for (const auto& [sa, ca] : a)
        for (const auto& [sb, cb] : b) {
            auto [phase, s] = multiply_strings(sa, sb);
            out[s] += ca * cb * phase;
        }
    return out;
}

void accumulate(Polynomial& into, const Polynomial& p, cplx scale) {
    for (const auto& [s, c] : p) into[s] += scale * c;
}

void prune(Polynomial& p, double tol) {
    std::erase_if(p, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

Polynomial gram(const OperatorSum& op) {
    const Polynomial l = expand(op);
    Polynomial g = multiply(adjoint(l), l);
    double scale = 0.0;
    for (const auto& [s, c] : g) scale = std::max(scale, std::abs(c));
    prune(g, 1e-13 * scale);
    return g;
}

}  // namespace jumpforge::pauli
