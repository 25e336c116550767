#include "jumpforge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "jumpforge/ensemble.hpp"
#include "jumpforge/errors.hpp"
#include "jumpforge/rng.hpp"
#include "jumpforge/trajectory.hpp"

namespace jumpforge {

namespace {

void require_dense_size(int n) {
    if (n < 1 || n > kMaxDensityQubits)
        throw ConfigError("density matrices are limited to " + std::to_string(kMaxDensityQubits) + " qubits");
}

struct Dissipator {
    std::vector<Eigen::MatrixXcd> jumps;
    std::vector<Eigen::MatrixXcd> jumps_dag;
    Eigen::MatrixXcd half_decay;

    Eigen::MatrixXcd operator()(const Eigen::MatrixXcd& rho) const {
        Eigen::MatrixXcd out = -(half_decay * rho + rho * half_decay);
        for (std::size_t k = 0; k < jumps.size(); ++k) out += jumps[k] * rho * jumps_dag[k];
        return out;
    }
};

}  // namespace

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    require_dense_size(psi.n_qubits());
    const StateVector v = normalize(psi);
    Eigen::VectorXcd e(static_cast<Eigen::Index>(v.dimension()));
    for (std::size_t i = 0; i < v.dimension(); ++i) e[static_cast<Eigen::Index>(i)] = v[i];
    return {psi.n_qubits(), e * e.adjoint()};
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::check() const {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw IntegrityError("density matrix not Hermitian");
    if (std::abs(trace() - 1.0) > 1e-10) throw IntegrityError("density matrix trace differs from 1");
    if (min_eigenvalue() < -1e-10) throw IntegrityError("density matrix has a negative eigenvalue");
}

Eigen::MatrixXcd dense_operator(const OperatorSum& op) {
    const int n = op.n_qubits();
    require_dense_size(n);
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        StateVector e(n);
        e[col] = 1.0;
        StateVector image(n);
        try {
            image = apply(e, op);
        } catch (const Annihilation&) {
            continue;
        }
        for (std::size_t row = 0; row < dim; ++row)
            m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = image[row];
    }
    return m;
}

DensityMatrix lindblad_evolve(const DensityMatrix& rho0, std::span<const JumpChannel> channels, double t,
                              double dt) {
    require_dense_size(rho0.n);
    if (!(t >= 0.0) || !(dt > 0.0)) throw ConfigError("time and step must be positive");
    Dissipator d;
    const auto dim = rho0.rho.rows();
    d.half_decay = Eigen::MatrixXcd::Zero(dim, dim);
    double max_rate = 0.0;
    for (const auto& ch : channels) {
        if (!ch.active) continue;
        if (ch.op.n_qubits() != rho0.n) throw ConfigError("channel register size differs from the state");
        Eigen::MatrixXcd l = dense_operator(ch.op);
        Eigen::MatrixXcd ld = l.adjoint();
        Eigen::MatrixXcd ll = ld * l;
        max_rate = std::max(max_rate, ll.cwiseAbs().maxCoeff());
        d.half_decay += 0.5 * ll;
        d.jumps.push_back(std::move(l));
        d.jumps_dag.push_back(std::move(ld));
    }
    if (dt * max_rate > 0.01 * (1.0 + 1e-12)) throw ConfigError("step exceeds 0.01 / rate");

    const long steps = static_cast<long>(std::ceil(t / dt - 1e-9));
    const double h = steps > 0 ? t / static_cast<double>(steps) : 0.0;
    Eigen::MatrixXcd rho = rho0.rho;
    const double tr0 = rho.trace().real();
    for (long s = 0; s < steps; ++s) {
        const Eigen::MatrixXcd k1 = d(rho);
        const Eigen::MatrixXcd k2 = d(rho + 0.5 * h * k1);
        const Eigen::MatrixXcd k3 = d(rho + 0.5 * h * k2);
        const Eigen::MatrixXcd k4 = d(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (std::abs(rho.trace().real() - tr0) > 1e-6) throw AccuracyError("Lindblad integration lost trace");
    return {rho0.n, rho};
}

DensityMatrix trajectory_average(const ProtocolScript& script, std::size_t n_traj, double t,
                                 std::uint64_t seed) {
    require_dense_size(script.n_qubits());
    if (n_traj == 0) throw ConfigError("need at least one trajectory");
    const auto states = map_indexed(n_traj, [&](std::size_t i) {
        RngStream rng(seed, i);
        return run(script, rng, RunOptions{t}).state;
    });
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << script.n_qubits());
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& s : states) sum += DensityMatrix::pure(s).rho;
    return {script.n_qubits(), sum / static_cast<double>(n_traj)};
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.n != b.n) throw ConfigError("density matrices of different size");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.rho - b.rho);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::string density_csv(const DensityMatrix& m) {
    std::ostringstream os;
    os << "row,col,real,imag\n";
    char buf[96];
    for (Eigen::Index r = 0; r < m.rho.rows(); ++r)
        for (Eigen::Index c = 0; c < m.rho.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%ld,%ld,%.12g,%.12g\n", static_cast<long>(r), static_cast<long>(c),
                          m.rho(r, c).real(), m.rho(r, c).imag());
            os << buf;
        }
    return os.str();
}

double harmonic_number(std::size_t n) {
    double h = 0.0;
    for (std::size_t k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
    return h;
}

namespace {

TimingResult summarize(std::size_t n_edges, const std::vector<double>& samples, double analytic) {
    TimingResult r;
    r.n_edges = n_edges;
    r.samples = samples.size();
    r.analytic = analytic;
    double sum = 0.0;
    for (double s : samples) sum += s;
    r.mean = sum / static_cast<double>(samples.size());
    if (samples.size() >= 2) {
        double ss = 0.0;
        for (double s : samples) ss += (s - r.mean) * (s - r.mean);
        const double sd = std::sqrt(ss / static_cast<double>(samples.size() - 1));
        r.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(samples.size()));
    }
    return r;
}

// E[max_e T_e] for independent exponentials, grouped by distinct rate.
double expected_max(std::span<const double> rates) {
    std::map<double, double> groups;
    for (double r : rates) groups[r] += 1.0;
    double slowest = groups.begin()->first;
    auto tail = [&](double t) {
        double log_cdf = 0.0;
        for (const auto& [r, m] : groups) log_cdf += m * std::log1p(-std::exp(-r * t));
        return -std::expm1(log_cdf);
    };
    // Past T the tail is below sum m e^{-rT}, which we make negligible.
    double total = 0.0;
    for (const auto& [r, m] : groups) total += m;
    const double upper = (std::log(total) + 40.0) / slowest;
    const int intervals = 200000;
    const double h = upper / intervals;
    double s = tail(0.0) + tail(upper);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * tail(i * h);
    return s * h / 3.0;
}

}  // namespace

TimingResult coupon_time_stats(std::size_t n_edges, double edge_rate, std::size_t n_samples, std::uint64_t seed) {
    if (n_edges == 0) throw ConfigError("need at least one edge");
    if (!(edge_rate > 0.0)) throw ConfigError("edge rate must be positive");
    if (n_samples == 0) throw ConfigError("need at least one sample");
    const auto samples = map_indexed(n_samples, [&](std::size_t i) {
        RngStream rng(seed, i);
        double worst = 0.0;
        for (std::size_t e = 0; e < n_edges; ++e) worst = std::max(worst, rng.exponential(edge_rate));
        return worst;
    });
    return summarize(n_edges, samples, harmonic_number(n_edges) / edge_rate);
}

TimingResult coupon_time_stats(std::span<const double> edge_rates, std::size_t n_samples, std::uint64_t seed) {
    if (edge_rates.empty()) throw ConfigError("need at least one edge");
    if (n_samples == 0) throw ConfigError("need at least one sample");
    for (double r : edge_rates)
        if (!(r > 0.0)) throw ConfigError("edge rates must be positive");
    const auto samples = map_indexed(n_samples, [&](std::size_t i) {
        RngStream rng(seed, i);
        double worst = 0.0;
        for (double r : edge_rates) worst = std::max(worst, rng.exponential(r));
        return worst;
    });
    return summarize(edge_rates.size(), samples, expected_max(edge_rates));
}

std::vector<double> pairwise_split_rates(const GraphSpec& graph, double gamma) {
    std::vector<double> rates;
    for (const auto& [u, v] : graph.edges())
        rates.push_back(gamma / std::max(graph.degree(u), graph.degree(v)));
    return rates;
}

std::string timing_csv_row(const TimingResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.12g,%.12g,%.12g", r.n_edges, r.samples, r.mean, r.ci95, r.analytic);
    return buf;
}

}  // namespace jumpforge
