#include <algorithm>
#include <bit>
#include <vector>

#include "jumpforge/qstate.hpp"

namespace jumpforge::kernels {

namespace {

constexpr std::size_t kBlock = 4096;

inline double parity_sign(std::size_t bits) { return (std::popcount(bits) & 1) ? -1.0 : 1.0; }

}  // namespace

TermMasks term_masks(const PauliTerm& term, int n_qubits) {
    TermMasks m;
    int n_y = 0;
    for (const auto& f : term.factors()) {
        const std::size_t bit = qubit_mask(n_qubits, f.qubit);
        switch (f.op) {
            case Op1::I: break;
            case Op1::X: m.flip |= bit; break;
            case Op1::Y:
                // Y|0> = i|1>, Y|1> = -i|0>: i * (-1)^bit
                m.flip |= bit;
                m.sign |= bit;
                ++n_y;
                break;
            case Op1::Z: m.sign |= bit; break;
            case Op1::SM:
                m.flip |= bit;
                m.require |= bit;
                m.require_value |= bit;
                break;
            case Op1::SP:
                m.flip |= bit;
                m.require |= bit;
                break;
        }
    }
    static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    m.scale = term.coefficient() * kIPow[n_y % 4];
    return m;
}

void accumulate_term_serial(std::span<const cplx> in, std::span<cplx> out, const TermMasks& m) {
    for (std::size_t i = 0; i < in.size(); ++i) {
        if ((i & m.require) != m.require_value) continue;
        out[i ^ m.flip] += m.scale * parity_sign(i & m.sign) * in[i];
    }
}

void accumulate_term_parallel(std::span<const cplx> in, std::span<cplx> out, const TermMasks& m) {
    // Indexed by output: j receives from exactly one source i = j ^ flip.
    const auto n = static_cast<std::ptrdiff_t>(in.size());
    const cplx* src = in.data();
    cplx* dst = out.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < n; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        const std::size_t i = j ^ m.flip;
        if ((i & m.require) != m.require_value) continue;
        dst[j] += m.scale * parity_sign(i & m.sign) * src[i];
    }
}

double norm_squared_serial(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return s;
}

double norm_squared_parallel(std::span<const cplx> v) {
    const auto blocks = static_cast<std::ptrdiff_t>((v.size() + kBlock - 1) / kBlock);
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(v.size(), lo + kBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += std::norm(v[i]);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

cplx inner_serial(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

cplx inner_parallel(std::span<const cplx> a, std::span<const cplx> b) {
    const auto blocks = static_cast<std::ptrdiff_t>((a.size() + kBlock - 1) / kBlock);
    std::vector<cplx> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
        const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
        const std::size_t hi = std::min(a.size(), lo + kBlock);
        cplx s{};
        for (std::size_t i = lo; i < hi; ++i) s += std::conj(a[i]) * b[i];
        partial[static_cast<std::size_t>(blk)] = s;
    }
    cplx total{};
    for (const auto& p : partial) total += p;
    return total;
}

}  // namespace jumpforge::kernels
