#pragma once

// Dense reference matrices built from Kronecker products, independent of the
// library's mask-based operator application.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "jumpforge/qstate.hpp"

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline const cd I1{0.0, 1.0};

inline Mat m2(cd a, cd b, cd c, cd d) {
    Mat m(2, 2);
    m << a, b, c, d;
    return m;
}
inline Mat id2() { return m2(1, 0, 0, 1); }
inline Mat sx() { return m2(0, 1, 1, 0); }
inline Mat sy() { return m2(0, -I1, I1, 0); }
inline Mat sz() { return m2(1, 0, 0, -1); }
inline Mat sminus() { return m2(0, 1, 0, 0); }  // |0><1|, |0> = ground
inline Mat splus() { return m2(0, 0, 1, 0); }
inline Mat hadamard() { return m2(1, 1, 1, -1) / std::sqrt(2.0); }

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Single-qubit matrix on qubit q of n (qubit 0 leftmost factor).
inline Mat on(const Mat& g, int q, int n) {
    Mat out = Mat::Identity(1, 1);
    for (int k = 0; k < n; ++k) out = kron(out, k == q ? g : id2());
    return out;
}

/// exp(i theta sigma) for a Pauli sigma.
inline Mat expi(double theta, const Mat& sigma) {
    return std::cos(theta) * Mat::Identity(sigma.rows(), sigma.cols()) + I1 * std::sin(theta) * sigma;
}

/// (sigma_x^j + s i sigma_x^k)/sqrt2
inline Mat xjk(int s, int j, int k, int n) {
    return (on(sx(), j, n) + double(s) * I1 * on(sx(), k, n)) / std::sqrt(2.0);
}

inline Mat cz(int a, int b, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Mat m = Mat::Identity(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        if (((i >> (n - 1 - a)) & 1) && ((i >> (n - 1 - b)) & 1)) m(i, i) = -1.0;
    return m;
}

inline Mat cx(int c, int t, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Mat m = Mat::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        Eigen::Index j = i;
        if ((i >> (n - 1 - c)) & 1) j ^= Eigen::Index{1} << (n - 1 - t);
        m(j, i) = 1.0;
    }
    return m;
}

inline Vec ket(const std::string& bits) {
    const Eigen::Index dim = Eigen::Index{1} << bits.size();
    Vec v = Vec::Zero(dim);
    v[std::stol(bits, nullptr, 2)] = 1.0;
    return v;
}

inline Vec vec(const jumpforge::StateVector& s) {
    Vec v(static_cast<Eigen::Index>(s.dimension()));
    for (std::size_t i = 0; i < s.dimension(); ++i) v[static_cast<Eigen::Index>(i)] = s[i];
    return v;
}

inline jumpforge::StateVector state(const Vec& v, int n) {
    std::vector<std::complex<double>> a(v.data(), v.data() + v.size());
    return jumpforge::StateVector(n, a);
}

inline double fidelity(const Vec& a, const Vec& b) {
    const double d = std::norm(a.dot(b));
    return d / (a.squaredNorm() * b.squaredNorm());
}

inline Vec random_state(int n, std::mt19937_64& g) {
    std::normal_distribution<double> nd;
    Vec v(Eigen::Index{1} << n);
    for (auto& x : v) x = {nd(g), nd(g)};
    return v / v.norm();
}

/// Maximum elementwise distance between a and b up to a global phase.
inline double phase_distance(const Mat& a, const Mat& b) {
    Eigen::Index r = 0, c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    const cd ph = a(r, c) / b(r, c);
    return (a - ph * b).cwiseAbs().maxCoeff() + std::abs(std::abs(ph) - 1.0);
}

}  // namespace oracle
