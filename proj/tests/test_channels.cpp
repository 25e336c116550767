#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "jumpforge/channels.hpp"
#include "jumpforge/errors.hpp"
#include "jumpforge/layout_file.hpp"
#include "jumpforge/verify.hpp"
#include "oracles.hpp"

using namespace jumpforge;
using oracle::I1;
using oracle::Mat;

namespace {

// Dense matrix of a channel's operator, via the library's sparse application.
Mat mat(const JumpChannel& ch) { return dense_operator(ch.op); }

double dist(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("spontaneous emission and inelastic scattering") {
    const auto se = se_channel(1, 0, 1.0);
    CHECK(se.kind == ChannelKind::SE);
    CHECK(dist(mat(se), oracle::sminus()) < 1e-15);
    CHECK(fidelity(normalize(apply(basis_state(1, "1"), se.op)), basis_state(1, "0")) == doctest::Approx(1.0));
    const cplx a{0.6, 0.0}, b{0.0, 0.8};
    CHECK(jump_rate(StateVector(1, {a, b}), se_channel(1, 0, 2.0).op) == doctest::Approx(2.0 * 0.64));

    const auto is = is_channel(1, 0, 1.0);
    CHECK(fidelity(normalize(apply(basis_state(1, "0"), is.op)), basis_state(1, "1")) == doctest::Approx(1.0));
    CHECK_THROWS_AS(apply(basis_state(1, "1"), is.op), Annihilation);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(jump_rate(StateVector(1, {r, r}), is_channel(1, 0, 3.0).op) == doctest::Approx(1.5));
}

TEST_CASE("PBS erasure ports") {
    const double g = 0.8, a = std::sqrt(g / 2);
    auto [x, y] = pbs_erase(se_channel(1, 0, g), is_channel(1, 0, g), 0.0);
    CHECK(x.kind == ChannelKind::FLIP);
    CHECK(dist(mat(x), a * oracle::sx()) < 1e-15);
    CHECK(dist(mat(y), a * oracle::sy()) < 1e-15);
    // exact sigma_x at theta = 0: a single term
    CHECK(x.op.terms().size() == 1);

    auto [x2, y2] = pbs_erase(se_channel(1, 0, g), is_channel(1, 0, g), std::numbers::pi / 2);
    CHECK(dist(mat(x2), a * oracle::sy()) < 1e-15);
    CHECK(dist(mat(y2), -a * oracle::sx()) < 1e-15);

    for (double theta : {0.0, 0.3, 1.7}) {
        auto [p, q] = pbs_erase(se_channel(1, 0, g), is_channel(1, 0, g), theta);
        const Mat sum = mat(p).adjoint() * mat(p) + mat(q).adjoint() * mat(q);
        CHECK(dist(sum, g * oracle::id2()) < 1e-14);
        CHECK(p.uniform);
        // op / ||op|| is unitary
        const Mat u = mat(p) / std::sqrt(p.rate);
        CHECK(dist(u.adjoint() * u, oracle::id2()) < 1e-14);
    }
    CHECK_THROWS_AS(pbs_erase(se_channel(1, 0, 1.0), is_channel(1, 0, 2.0), 0.0), ErasureMismatch);
}

TEST_CASE("BS which-qubit erasure") {
    const double g = 1.0, a = std::sqrt(g / 2);
    OpticalLayout layout(2);
    layout.add_flip_ports(0, g);
    layout.add_flip_ports(1, g);
    auto [plus, minus] = bs_combine(layout.at("x0"), layout.at("x1"));
    CHECK(plus.kind == ChannelKind::ENTANGLE);
    CHECK(plus.sign == 1);
    CHECK(minus.sign == -1);
    CHECK(plus.qubits == std::vector<int>{0, 1});
    const Mat expect_p = a * (oracle::on(oracle::sx(), 0, 2) + I1 * oracle::on(oracle::sx(), 1, 2)) / std::sqrt(2.0);
    const Mat expect_m = a * (oracle::on(oracle::sx(), 0, 2) - I1 * oracle::on(oracle::sx(), 1, 2)) / std::sqrt(2.0);
    CHECK(dist(mat(plus), expect_p) < 1e-15);
    CHECK(dist(mat(minus), expect_m) < 1e-15);

    const auto bell = normalize(apply(basis_state(2, "00"), plus.op));
    const oracle::Vec want = (oracle::ket("10") + I1 * oracle::ket("01")) / std::sqrt(2.0);
    CHECK(oracle::fidelity(oracle::vec(bell), want) == doctest::Approx(1.0).epsilon(1e-14));

    const Mat sum = mat(plus).adjoint() * mat(plus) + mat(minus).adjoint() * mat(minus);
    CHECK(dist(sum, g * Mat::Identity(4, 4)) < 1e-14);
    const Mat u = mat(plus) / std::sqrt(plus.rate);
    CHECK(dist(u.adjoint() * u, Mat::Identity(4, 4)) < 1e-14);

    CHECK_THROWS_AS(bs_combine(layout.at("x0"), layout.at("y0")), ConfigError);
    OpticalLayout uneven(2);
    uneven.add_flip_ports(0, 1.0);
    uneven.add_flip_ports(1, 2.0);
    CHECK_THROWS_AS(bs_combine(uneven.at("x0"), uneven.at("x1")), ErasureMismatch);
}

TEST_CASE("classical mixing realises exp(+-i pi/4 sigma_y)") {
    OpticalLayout layout(1);
    layout.add_flip_ports(0, 1.0);
    const auto& y = layout.at("y0");
    for (int s : {1, -1}) {
        const auto m = classical_mix(y, s);
        CHECK(m.kind == ChannelKind::CLASSICAL_MIX);
        CHECK(m.uniform);
        CHECK(m.rate == doctest::Approx(2 * y.rate));
        const Mat u = mat(m) / std::sqrt(m.rate);
        CHECK(oracle::phase_distance(u, oracle::expi(s * std::numbers::pi / 4, oracle::sy())) < 1e-14);
        CHECK(dist(u.adjoint() * u, oracle::id2()) < 1e-14);
    }
    // Under the standard sigma_y, exp(+i pi/4 sigma_y)|0> = (|0> - |1>)/sqrt2:
    // an X-basis state, the |-> eigenstate for sign +.
    const auto out = normalize(apply(basis_state(1, "0"), classical_mix(y, +1).op));
    CHECK(oracle::fidelity(oracle::vec(out), (oracle::ket("0") - oracle::ket("1")) / std::sqrt(2.0)) ==
          doctest::Approx(1.0));
    const auto out2 = normalize(apply(basis_state(1, "0"), classical_mix(y, -1).op));
    CHECK(oracle::fidelity(oracle::vec(out2), (oracle::ket("0") + oracle::ket("1")) / std::sqrt(2.0)) ==
          doctest::Approx(1.0));
    // twice with the same sign: a pi/2 rotation taking |0> to |1>
    const auto twice = normalize(apply(out, classical_mix(y, +1).op));
    CHECK(fidelity(twice, basis_state(1, "1")) == doctest::Approx(1.0));
    CHECK_THROWS_AS(classical_mix(layout.at("x0"), 1), ConfigError);
}

TEST_CASE("total decay classification") {
    OpticalLayout flips(1);
    flips.add_flip_ports(0, 1.0);
    auto d = total_decay(flips.channels());
    CHECK(d.kind == DecayClass::UNIFORM);
    CHECK(d.uniform_rate == doctest::Approx(1.0));

    std::vector<JumpChannel> se{se_channel(1, 0, 1.5)};
    d = total_decay(se);
    CHECK(d.kind == DecayClass::DIAGONAL);
    CHECK(d.entry(0, 1) == doctest::Approx(0.0));
    CHECK(d.entry(1, 1) == doctest::Approx(1.5));

    OpticalLayout pair(2);
    pair.add_flip_ports(0, 1.0);
    pair.add_flip_ports(1, 1.0);
    pair.set_active("y0", false);
    pair.set_active("y1", false);
    pair.combine("x0", "x1");
    d = total_decay(pair.active_channels());
    CHECK(d.kind == DecayClass::UNIFORM);
    CHECK(d.uniform_rate == doctest::Approx(1.0));

    // mixed: emission on qubit 0, flips on qubit 1, oracle diagonal
    std::vector<JumpChannel> mixed{se_channel(2, 0, 0.7)};
    OpticalLayout f2(2);
    f2.add_flip_ports(1, 0.4);
    for (const auto& c : f2.channels()) mixed.push_back(c);
    d = total_decay(mixed);
    CHECK(d.kind == DecayClass::DIAGONAL);
    Mat gamma = Mat::Zero(4, 4);
    for (const auto& c : mixed) gamma += mat(c).adjoint() * mat(c);
    for (std::size_t i = 0; i < 4; ++i) CHECK(d.entry(i, 2) == doctest::Approx(gamma(i, i).real()));

    // I + X/2 has L^dag L with an off-diagonal X term
    JumpChannel off;
    off.id = "off";
    off.op = OperatorSum(1, {PauliTerm::identity(1.0), PauliTerm::single(0, Op1::X, 0.5)});
    off.rate = 1.25;
    CHECK_THROWS_AS(total_decay(std::vector<JumpChannel>{off}), UnsupportedConfiguration);
}

TEST_CASE("layout rules") {
    OpticalLayout layout(2);
    layout.add_flip_ports(0, 1.0);
    layout.add_flip_ports(1, 1.0);
    CHECK_THROWS_AS(layout.add_flip_ports(0, 1.0), ConfigError);  // duplicate ids
    CHECK_THROWS_AS(layout.add(se_channel(3, 2, 1.0)), ConfigError);
    const auto [p, m] = layout.combine("x0", "x1");
    CHECK(p == "bsx0|x1+");
    CHECK(m == "bsx0|x1-");
    CHECK_FALSE(layout.at("x0").active);
    REQUIRE(layout.triggers().size() == 1);
    CHECK(layout.triggers()[0].action == RuleAction::REMOVE_BS);
    CHECK(layout.triggers()[0].activate == std::vector<std::string>{"x0", "x1"});
    CHECK_THROWS_AS(layout.add_rule({{"nope"}, RuleAction::DEACTIVATE, {}, {}, true}), ConfigError);
    CHECK_THROWS_AS(layout.add_rule({{"y0"}, RuleAction::REMOVE_BS, {"y1"}, {}, true}), ConfigError);
    const auto [mp, mm] = layout.mix("y1");
    CHECK(mp == "mix1+");
    CHECK(mm == "mix1-");
    CHECK_FALSE(layout.at("y1").active);
    CHECK(layout.active_channels().size() == 5);  // y0, two BS ports, two mix ports
}

TEST_CASE("layout description file") {
    const auto layout = parse_layout_string(
        "# two qubits\n"
        "qubits = 3\n"
        "rate = 2.0\n"
        "rate[1] = 2.0\n"
        "theta[0] = 0.0   # default angle\n"
        "mode[2] = se\n"
        "\n"
        "bs = x0 x1\n"
        "mix = y0\n"
        "trigger = watch:se2 deactivate:y1 repeat\n");
    CHECK(layout.n_qubits() == 3);
    CHECK(layout.find("se2").has_value());
    CHECK(layout.find("bsx0|x1+").has_value());
    CHECK(layout.find("mix0-").has_value());
    CHECK(layout.at("x0").rate == doctest::Approx(1.0));
    REQUIRE(layout.triggers().size() == 3);
    CHECK_FALSE(layout.triggers()[2].once);

    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_layout_string(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("qubits = 2\nrate = fast\n") == 2);
    CHECK(line_of("rate[0] = 1\n") == 1);
    CHECK(line_of("qubits = 2\n\nmode[5] = se\n") == 3);
    CHECK(line_of("qubits = 2\nbs = x0 y7\n") == 2);
    CHECK(line_of("qubits = 2\nrate[1] = 3\nbs = x0 x1\n") == 3);
    CHECK(line_of("qubits = 2\nfoo = 1\n") == 2);
    CHECK(line_of("qubits = 1\nmode[0] = se+is\nrate = 1\nmix = se0\n") == 4);
    CHECK(line_of("# nothing\n") == 1);
}
