#include "jumpforge/stabilizer.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "jumpforge/errors.hpp"

namespace jumpforge {

namespace {

int popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    int c = 0;
    for (std::size_t w = 0; w < words; ++w) c += std::popcount(a[w] & b[w]);
    return c;
}

}  // namespace

Gate parse_gate(std::string_view label, const std::vector<int>& qubits) {
    auto need = [&](std::size_t n) {
        if (qubits.size() != n)
            throw ConfigError("gate " + std::string(label) + " takes " + std::to_string(n) + " qubit(s)");
    };
    using K = Gate::Kind;
    struct Entry {
        std::string_view name;
        K kind;
        int arity;
        int sign;
    };
    static constexpr Entry table[] = {{"H", K::H, 1, 1},     {"S", K::S, 1, 1},    {"SDG", K::SDG, 1, 1},
                                      {"CX", K::CX, 2, 1},   {"CZ", K::CZ, 2, 1},  {"X", K::X, 1, 1},
                                      {"Y", K::Y, 1, 1},     {"Z", K::Z, 1, 1},    {"XJK+", K::XJK, 2, 1},
                                      {"XJK-", K::XJK, 2, -1}};
    for (const auto& e : table) {
        if (e.name != label) continue;
        need(static_cast<std::size_t>(e.arity));
        Gate g{e.kind, qubits[0], e.arity == 2 ? qubits[1] : -1, e.sign};
        if (e.arity == 2 && g.a == g.b) throw ConfigError("two-qubit gate on a single qubit");
        return g;
    }
    throw ConfigError("unknown gate label '" + std::string(label) + "'");
}

std::string gate_label(const Gate& g) {
    switch (g.kind) {
        case Gate::Kind::H: return "H";
        case Gate::Kind::S: return "S";
        case Gate::Kind::SDG: return "SDG";
        case Gate::Kind::CX: return "CX";
        case Gate::Kind::CZ: return "CZ";
        case Gate::Kind::X: return "X";
        case Gate::Kind::Y: return "Y";
        case Gate::Kind::Z: return "Z";
        case Gate::Kind::XJK: return g.sign > 0 ? "XJK+" : "XJK-";
    }
    return "?";
}

std::vector<Gate> xjk_decomposition(int sign, int j, int k) {
    // X_jk^s ~ X_j^{-s} X_k^{s} cX_jk with X^{+-} = exp(+-i pi/4 X) ~ H S^{-+} H
    // and cX_jk = (H x H) CZ (H x H); adjacent Hadamards cancelled.
    const Gate rot_k = sign > 0 ? Gate::sdg(k) : Gate::s(k);
    const Gate rot_j = sign > 0 ? Gate::s(j) : Gate::sdg(j);
    return {Gate::h(j), Gate::h(k), Gate::cz(j, k), rot_k, Gate::h(k), rot_j, Gate::h(j)};
}

// Row-major copy for the row-wise algorithms (validity, comparison).
struct StabilizerTableau::Rows {
    std::size_t words = 0;  // words per row (n qubits)
    std::vector<std::uint64_t> x, z;
    std::vector<int> phase;

    const std::uint64_t* xr(int r) const { return x.data() + static_cast<std::size_t>(r) * words; }
    const std::uint64_t* zr(int r) const { return z.data() + static_cast<std::size_t>(r) * words; }
    bool anticommute(int r1, int r2) const {
        return (popcount_and(xr(r1), zr(r2), words) + popcount_and(zr(r1), xr(r2), words)) & 1;
    }
};

StabilizerTableau::StabilizerTableau(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1) throw ConfigError("tableau needs at least one qubit");
    words_ = (2 * static_cast<std::size_t>(n_qubits) + 63) / 64;
    x_.assign(static_cast<std::size_t>(n_qubits) * words_, 0);
    z_.assign(x_.size(), 0);
    phase_lo_.assign(words_, 0);
    phase_hi_.assign(words_, 0);
    for (int q = 0; q < n_; ++q) {
        set_x(q, q);
        set_z(n_ + q, q);
    }
}

StabilizerTableau StabilizerTableau::from_graph(const GraphSpec& graph) {
    const int n = graph.n_vertices();
    StabilizerTableau t(n);
    std::fill(t.x_.begin(), t.x_.end(), 0);
    std::fill(t.z_.begin(), t.z_.end(), 0);
    for (int v = 0; v < n; ++v) {
        t.set_z(v, v);      // destabilizer Z_v
        t.set_x(n + v, v);  // stabilizer X_v ...
    }
    for (const auto& [u, v] : graph.edges()) {
        t.set_z(n + u, v);  // ... Z on each neighbour
        t.set_z(n + v, u);
    }
    return t;
}

bool StabilizerTableau::x(int row, int qubit) const { return (xcol(qubit)[row >> 6] >> (row & 63)) & 1; }
bool StabilizerTableau::z(int row, int qubit) const { return (zcol(qubit)[row >> 6] >> (row & 63)) & 1; }

int StabilizerTableau::phase(int row) const {
    const auto w = static_cast<std::size_t>(row >> 6);
    return static_cast<int>(((phase_lo_[w] >> (row & 63)) & 1) | (((phase_hi_[w] >> (row & 63)) & 1) << 1));
}

void StabilizerTableau::check_qubit(int q) const {
    if (q < 0 || q >= n_) throw ConfigError("qubit " + std::to_string(q) + " outside tableau");
}

void StabilizerTableau::h(int q) {
    check_qubit(q);
    auto* xc = xcol(q);
    auto* zc = zcol(q);
    for (std::size_t w = 0; w < words_; ++w) {
        phase_hi_[w] ^= xc[w] & zc[w];
        std::swap(xc[w], zc[w]);
    }
}

void StabilizerTableau::s(int q) {
    check_qubit(q);
    const auto* xc = xcol(q);
    auto* zc = zcol(q);
    for (std::size_t w = 0; w < words_; ++w) {
        phase_hi_[w] ^= phase_lo_[w] & xc[w];  // phase += x
        phase_lo_[w] ^= xc[w];
        zc[w] ^= xc[w];
    }
}

void StabilizerTableau::sdg(int q) {
    check_qubit(q);
    const auto* xc = xcol(q);
    auto* zc = zcol(q);
    for (std::size_t w = 0; w < words_; ++w) {
        phase_hi_[w] ^= (phase_lo_[w] & xc[w]) ^ xc[w];  // phase += 3x
        phase_lo_[w] ^= xc[w];
        zc[w] ^= xc[w];
    }
}

void StabilizerTableau::cx(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) throw ConfigError("CX needs two distinct qubits");
    const auto* xc = xcol(control);
    auto* xt = xcol(target);
    auto* zc = zcol(control);
    const auto* zt = zcol(target);
    for (std::size_t w = 0; w < words_; ++w) {
        xt[w] ^= xc[w];
        zc[w] ^= zt[w];
    }
}

void StabilizerTableau::cz(int a, int b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) throw ConfigError("CZ needs two distinct qubits");
    const auto* xa = xcol(a);
    const auto* xb = xcol(b);
    auto* za = zcol(a);
    auto* zb = zcol(b);
    for (std::size_t w = 0; w < words_; ++w) {
        phase_hi_[w] ^= xa[w] & xb[w];
        za[w] ^= xb[w];
        zb[w] ^= xa[w];
    }
}

void StabilizerTableau::pauli_x(int q) {
    check_qubit(q);
    const auto* zc = zcol(q);
    for (std::size_t w = 0; w < words_; ++w) phase_hi_[w] ^= zc[w];
}

void StabilizerTableau::pauli_z(int q) {
    check_qubit(q);
    const auto* xc = xcol(q);
    for (std::size_t w = 0; w < words_; ++w) phase_hi_[w] ^= xc[w];
}

void StabilizerTableau::pauli_y(int q) {
    check_qubit(q);
    const auto* xc = xcol(q);
    const auto* zc = zcol(q);
    for (std::size_t w = 0; w < words_; ++w) phase_hi_[w] ^= xc[w] ^ zc[w];
}

void StabilizerTableau::apply(const Gate& g) {
    switch (g.kind) {
        case Gate::Kind::H: h(g.a); break;
        case Gate::Kind::S: s(g.a); break;
        case Gate::Kind::SDG: sdg(g.a); break;
        case Gate::Kind::CX: cx(g.a, g.b); break;
        case Gate::Kind::CZ: cz(g.a, g.b); break;
        case Gate::Kind::X: pauli_x(g.a); break;
        case Gate::Kind::Y: pauli_y(g.a); break;
        case Gate::Kind::Z: pauli_z(g.a); break;
        case Gate::Kind::XJK:
            if (g.sign != 1 && g.sign != -1) throw ConfigError("XJK sign must be +1 or -1");
            for (const auto& step : xjk_decomposition(g.sign, g.a, g.b)) apply(step);
            break;
    }
}

StabilizerTableau apply_gate(StabilizerTableau tab, const Gate& g) {
    tab.apply(g);
    return tab;
}

StabilizerTableau::Rows StabilizerTableau::rows() const {
    Rows r;
    r.words = (static_cast<std::size_t>(n_) + 63) / 64;
    r.x.assign(2 * static_cast<std::size_t>(n_) * r.words, 0);
    r.z.assign(r.x.size(), 0);
    r.phase.resize(2 * static_cast<std::size_t>(n_));
    for (int q = 0; q < n_; ++q) {
        const auto* xc = xcol(q);
        const auto* zc = zcol(q);
        const auto qw = static_cast<std::size_t>(q) >> 6;
        const std::uint64_t qm = std::uint64_t{1} << (q & 63);
        for (std::size_t w = 0; w < words_; ++w) {
            for (std::uint64_t bits = xc[w]; bits; bits &= bits - 1)
                r.x[(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))) * r.words + qw] |= qm;
            for (std::uint64_t bits = zc[w]; bits; bits &= bits - 1)
                r.z[(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))) * r.words + qw] |= qm;
        }
    }
    for (int row = 0; row < 2 * n_; ++row) r.phase[static_cast<std::size_t>(row)] = phase(row);
    return r;
}

bool StabilizerTableau::is_valid() const {
    const Rows r = rows();
    for (int row = 0; row < 2 * n_; ++row) {
        // Hermitian rows: i^phase X^x Z^z is Hermitian iff phase = #Y (mod 2).
        if ((r.phase[static_cast<std::size_t>(row)] & 1) != (popcount_and(r.xr(row), r.zr(row), r.words) & 1))
            return false;
    }
    for (int i = 0; i < n_; ++i) {
        for (int j = i + 1; j < n_; ++j) {
            if (r.anticommute(n_ + i, n_ + j)) return false;
            if (r.anticommute(i, j)) return false;
        }
        for (int j = 0; j < n_; ++j)
            if (r.anticommute(i, n_ + j) != (i == j)) return false;
    }
    return true;
}

void StabilizerTableau::check() const {
    if (!is_valid()) throw IntegrityError("tableau rows do not form a symplectic basis");
}

PauliTerm StabilizerTableau::row_term(int row) const {
    static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::vector<Factor> f;
    int n_y = 0;
    for (int q = 0; q < n_; ++q) {
        const bool xb = x(row, q), zb = z(row, q);
        if (xb && zb) {
            f.push_back({q, Op1::Y});  // XZ = -iY
            ++n_y;
        } else if (xb) {
            f.push_back({q, Op1::X});
        } else if (zb) {
            f.push_back({q, Op1::Z});
        }
    }
    return {kIPow[(phase(row) + 3 * n_y) & 3], std::move(f)};
}

std::string StabilizerTableau::dump(bool include_destabilizers) const {
    static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
    std::ostringstream os;
    for (int r = include_destabilizers ? 0 : n_; r < 2 * n_; ++r) {
        // Phase relative to the Y-form of the row.
        int n_y = 0;
        std::string ops;
        for (int q = 0; q < n_; ++q) {
            const bool xb = x(r, q), zb = z(r, q);
            n_y += xb && zb;
            ops += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
        }
        os << kPrefix[(phase(r) + 3 * n_y) & 3] << ops << '\n';
    }
    return os.str();
}

bool states_equal(const StabilizerTableau& a, const StabilizerTableau& b) {
    if (a.n_ != b.n_) throw ConfigError("comparing tableaux of different sizes");
    a.check();
    b.check();
    const int n = a.n_;
    const auto ra = a.rows();
    const auto rb = b.rows();
    const std::size_t words = ra.words;
    std::vector<std::uint64_t> px(words), pz(words);
    for (int r = n; r < 2 * n; ++r) {
        std::fill(px.begin(), px.end(), 0);
        std::fill(pz.begin(), pz.end(), 0);
        int phase = 0;
        const std::uint64_t* bx = rb.xr(r);
        const std::uint64_t* bz = rb.zr(r);
        for (int i = 0; i < n; ++i) {
            const int c = popcount_and(ra.xr(i), bz, words) + popcount_and(ra.zr(i), bx, words);
            if (!(c & 1)) continue;
            // (i^p X^px Z^pz)(i^q X^sx Z^sz) = i^(p+q) (-1)^(pz.sx) X^(px^sx) Z^(pz^sz)
            const std::uint64_t* sx = ra.xr(n + i);
            const std::uint64_t* sz = ra.zr(n + i);
            phase += ra.phase[static_cast<std::size_t>(n + i)] + 2 * popcount_and(pz.data(), sx, words);
            for (std::size_t w = 0; w < words; ++w) {
                px[w] ^= sx[w];
                pz[w] ^= sz[w];
            }
        }
        for (std::size_t w = 0; w < words; ++w)
            if (px[w] != bx[w] || pz[w] != bz[w]) return false;
        if ((phase & 3) != rb.phase[static_cast<std::size_t>(r)]) return false;
    }
    return true;
}

StateVector to_statevector(const StabilizerTableau& tab) {
    const int n = tab.n_qubits();
    if (n > 20) throw ConfigError("dense reconstruction limited to 20 qubits");
    StateVector v(n);
    // Generic start vector: fixed LCG values, almost surely not orthogonal to the target.
    std::uint64_t s = 0x2545F4914F6CDD1DULL;
    for (auto& a : v.amplitudes()) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        const double re = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        const double im = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
        a = {re, im};
    }
    for (int r = n; r < 2 * n; ++r) {
        OperatorSum projector(n, {PauliTerm::identity(0.5), tab.row_term(r).scaled(0.5)});
        v = normalize(apply(v, projector));
    }
    return v;
}

}  // namespace jumpforge
