#pragma once

// Independent oracles: a Lindblad master-equation integrator for the
// unconditioned dynamics the trajectories must average to, and
// coupon-collector statistics for graph completion times.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jumpforge/channels.hpp"
#include "jumpforge/graph.hpp"
#include "jumpforge/script.hpp"

namespace jumpforge {

inline constexpr int kMaxDensityQubits = 6;

struct DensityMatrix {
    int n = 0;
    Eigen::MatrixXcd rho;

    static DensityMatrix pure(const StateVector& psi);
    double trace() const { return rho.trace().real(); }
    double purity() const { return (rho * rho).trace().real(); }
    double min_eigenvalue() const;
    /// Throws IntegrityError unless Hermitian, unit trace and positive within 1e-10.
    void check() const;
};

/// Dense matrix of an operator on n <= kMaxDensityQubits qubits.
Eigen::MatrixXcd dense_operator(const OperatorSum& op);

/// RK4 integration of d rho/dt = sum_k (L rho L^dag - {L^dag L, rho}/2) over
/// the active channels. Requires dt <= 0.01 / (largest channel rate); throws
/// AccuracyError if the trace drifts by more than 1e-6.
DensityMatrix lindblad_evolve(const DensityMatrix& rho0, std::span<const JumpChannel> channels, double t,
                              double dt);

/// (1/M) sum |psi_i(t)><psi_i(t)| over trajectories i = 0..M-1 of the script,
/// each stopped at time t and seeded from (seed, i).
DensityMatrix trajectory_average(const ProtocolScript& script, std::size_t n_traj, double t,
                                 std::uint64_t seed);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// "row,col,real,imag" lines with a header.
std::string density_csv(const DensityMatrix& m);

struct TimingResult {
    std::size_t n_edges = 0;
    std::size_t samples = 0;
    double mean = 0.0;
    /// Half-width of the 95% normal confidence interval of the mean.
    double ci95 = 0.0;
    double analytic = 0.0;
};

double harmonic_number(std::size_t n);

/// Completion time of N edges that each click once at rate edge_rate:
/// samples max of N exponentials. analytic = H_N / edge_rate.
TimingResult coupon_time_stats(std::size_t n_edges, double edge_rate, std::size_t n_samples,
                               std::uint64_t seed);

/// Same with one rate per edge; analytic is the numerically integrated
/// E[max] = int_0^inf (1 - prod_e (1 - exp(-r_e t))) dt.
TimingResult coupon_time_stats(std::span<const double> edge_rates, std::size_t n_samples,
                               std::uint64_t seed);

/// Per-edge click rates under the PAIRWISE_SPLIT wiring: gamma / max(d_u, d_v).
std::vector<double> pairwise_split_rates(const GraphSpec& graph, double gamma = 1.0);

inline constexpr const char* kTimingCsvHeader = "n_edges,samples,mean,ci95,analytic";
std::string timing_csv_row(const TimingResult& r);

}  // namespace jumpforge
