#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "jumpforge/errors.hpp"
#include "jumpforge/qstate.hpp"
#include "oracles.hpp"

using namespace jumpforge;
using oracle::I1;

namespace {

oracle::Mat op1_matrix(Op1 op) {
    switch (op) {
        case Op1::I: return oracle::id2();
        case Op1::X: return oracle::sx();
        case Op1::Y: return oracle::sy();
        case Op1::Z: return oracle::sz();
        case Op1::SM: return oracle::sminus();
        case Op1::SP: return oracle::splus();
    }
    return oracle::id2();
}

OperatorSum random_operator(int n, std::mt19937_64& g) {
    std::uniform_int_distribution<int> nterms(1, 3), nfactors(0, n), pick(1, 5);
    std::normal_distribution<double> nd;
    std::vector<PauliTerm> terms;
    const int t = nterms(g);
    for (int k = 0; k < t; ++k) {
        std::vector<int> qubits(n);
        for (int q = 0; q < n; ++q) qubits[q] = q;
        std::shuffle(qubits.begin(), qubits.end(), g);
        std::vector<Factor> f;
        const int m = nfactors(g);
        for (int i = 0; i < m; ++i) f.push_back({qubits[i], static_cast<Op1>(pick(g))});
        terms.emplace_back(cplx{nd(g), nd(g)}, f);
    }
    return OperatorSum(n, terms);
}

oracle::Mat dense(const OperatorSum& op) {
    const int n = op.n_qubits();
    oracle::Mat m = oracle::Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (const auto& t : op.terms()) {
        oracle::Mat term = oracle::Mat::Identity(1, 1);
        for (int q = 0; q < n; ++q) term = oracle::kron(term, op1_matrix(t.factor_on(q)));
        m += t.coefficient() * term;
    }
    return m;
}

}  // namespace

TEST_CASE("fidelity examples") {
    const auto plus = StateVector(1, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
    CHECK(fidelity(plus, plus) == doctest::Approx(1.0));
    CHECK(fidelity(basis_state(1, "0"), basis_state(1, "1")) == doctest::Approx(0.0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(fidelity(StateVector(2, {r, 0, 0, r}), basis_state(2, "00")) == doctest::Approx(0.5));
}

TEST_CASE("normalize examples") {
    const auto a = normalize(StateVector(1, {2.0, 0.0}));
    CHECK(std::abs(a[0] - cplx(1.0)) < 1e-15);
    const auto b = normalize(StateVector(1, {1.0, I1}));
    CHECK(std::abs(b[0] - cplx(1.0 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(b[1] - I1 / std::sqrt(2.0)) < 1e-15);
    CHECK_THROWS_AS(normalize(StateVector(1, {0.0, 0.0})), Annihilation);
}

TEST_CASE("basis convention: qubit 0 is the most significant bit") {
    const auto s = basis_state(3, "100");
    CHECK(s[4] == cplx(1.0));
    CHECK(qubit_mask(3, 0) == 4u);
    CHECK_THROWS_AS(basis_state(2, "012"), ConfigError);
}

TEST_CASE("apply matches the Kronecker-product oracle on random operators") {
    std::mt19937_64 g(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 4;
        const auto op = random_operator(n, g);
        const auto psi = oracle::random_state(n, g);
        const oracle::Vec expect = dense(op) * psi;
        if (expect.norm() < 1e-10) {
            CHECK_THROWS_AS(apply(oracle::state(psi, n), op), Annihilation);
            continue;
        }
        const auto got = oracle::vec(apply(oracle::state(psi, n), op));
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(jump_rate(oracle::state(psi, n), op) == doctest::Approx(expect.squaredNorm()).epsilon(1e-12));
    }
}

TEST_CASE("raising operator on an excited qubit annihilates") {
    const OperatorSum sp(1, {PauliTerm::single(0, Op1::SP)});
    CHECK_THROWS_AS(apply(basis_state(1, "1"), sp), Annihilation);
}

TEST_CASE("term construction rejects repeated qubits and bad indices") {
    CHECK_THROWS_AS(PauliTerm(1.0, {{0, Op1::X}, {0, Op1::Z}}), ConfigError);
    CHECK_THROWS_AS(OperatorSum(2, {PauliTerm::single(2, Op1::X)}), ConfigError);
    CHECK_THROWS_AS(StateVector(2, {1.0, 0.0}), ConfigError);
}

TEST_CASE("parallel kernels agree with the serial reference") {
    std::mt19937_64 g(3);
    const int n = 16;
    const auto psi = oracle::random_state(n, g);
    std::vector<cplx> in(psi.data(), psi.data() + psi.size());
    const PauliTerm term(cplx{0.3, -0.7}, {{1, Op1::X}, {5, Op1::Y}, {9, Op1::Z}, {12, Op1::SM}});
    const auto masks = kernels::term_masks(term, n);
    std::vector<cplx> a(in.size()), b(in.size());
    kernels::accumulate_term_serial(in, a, masks);
    kernels::accumulate_term_parallel(in, b, masks);
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
    CHECK(kernels::norm_squared_serial(in) == doctest::Approx(kernels::norm_squared_parallel(in)).epsilon(1e-14));
    const cplx s = kernels::inner_serial(in, a), p = kernels::inner_parallel(in, a);
    CHECK(std::abs(s - p) < 1e-12);
}

TEST_CASE("parallel reductions are deterministic") {
    std::mt19937_64 g(5);
    const auto psi = oracle::random_state(17, g);
    std::vector<cplx> in(psi.data(), psi.data() + psi.size());
    const double first = kernels::norm_squared_parallel(in);
    for (int k = 0; k < 3; ++k) CHECK(kernels::norm_squared_parallel(in) == first);
}

TEST_CASE("dump lists nonzero amplitudes") {
    const double r = 1.0 / std::sqrt(2.0);
    const std::string d = dump(StateVector(2, {r, 0, 0, -r}));
    CHECK(d.find("0 0.70710678118654") == 0);
    CHECK(d.find("\n3 -0.70710678118654") != std::string::npos);
    CHECK(d.find("\n1 ") == std::string::npos);
}
