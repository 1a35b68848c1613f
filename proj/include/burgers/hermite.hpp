#pragma once

// Hermite functions adapted to the Gaussian-weighted space L^2(infinity):
//   phi_k(x) = e^{-x^2/8} psi_k(x/2) / sqrt(2),   psi_k the orthonormal Hermite functions,
// so that int e^{x^2/4} phi_j phi_k dx = delta_jk and phi_k is proportional to d^k e^{-x^2/4}.
// Two-dimensional bases are truncated by total degree k1 + k2 < K.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "burgers/grid.hpp"

namespace burgers {

// psi_0..psi_{K-1} at y (orthonormal Hermite functions, stable recurrence).
inline void hermite_functions(double y, int K, double* out) {
    if (K <= 0) return;
    out[0] = std::pow(pi, -0.25) * std::exp(-0.5 * y * y);
    if (K > 1) out[1] = std::sqrt(2.0) * y * out[0];
    for (int k = 1; k + 1 < K; ++k)
        out[k + 1] = std::sqrt(2.0 / (k + 1)) * y * out[k] - std::sqrt(static_cast<double>(k) / (k + 1)) * out[k - 1];
}

// phi_k on the real line, k < K.
inline void weighted_hermite(double x, int K, double* out) {
    hermite_functions(0.5 * x, K, out);
    const double s = std::exp(-0.125 * x * x) / std::sqrt(2.0);
    for (int k = 0; k < K; ++k) out[k] *= s;
}

struct Quadrature1D {
    std::vector<double> x, w;
};

// Gauss-Hermite rule for weight e^{-y^2}; w holds w_q e^{y_q^2} so that
// sum_q w_q psi_i(y_q) psi_j(y_q) F(y_q) approximates int psi_i psi_j F.
inline Quadrature1D gauss_hermite_modified(int Q) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(Q), off(Q - 1);
    for (int k = 1; k < Q; ++k) off(k - 1) = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    Quadrature1D q;
    q.x.assign(es.eigenvalues().data(), es.eigenvalues().data() + Q);
    std::vector<double> psi(Q + 1);
    for (double& y : q.x) {
        for (int it = 0; it < 3; ++it) {  // Newton on psi_Q(y) = 0
            hermite_functions(y, Q + 1, psi.data());
            const double d = std::sqrt(2.0 * Q) * psi[Q - 1] - y * psi[Q];
            y -= psi[Q] / d;
        }
    }
    q.w.resize(Q);
    for (int i = 0; i < Q; ++i) {
        hermite_functions(q.x[i], Q, psi.data());
        double s = 0;
        for (int k = 0; k < Q; ++k) s += psi[k] * psi[k];
        q.w[i] = 1.0 / s;
    }
    return q;
}

// Gauss-Laguerre rule for weight e^{-t} on (0, inf), nodes polished by Newton.
inline Quadrature1D gauss_laguerre(int N) {
    Eigen::VectorXd diag(N), off(N - 1);
    for (int k = 0; k < N; ++k) diag(k) = 2.0 * k + 1.0;
    for (int k = 1; k < N; ++k) off(k - 1) = k;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    Quadrature1D q;
    q.x.assign(es.eigenvalues().data(), es.eigenvalues().data() + N);
    auto laguerre = [](int n, double t, double& Ln, double& Lnm1) {
        double a = 1.0, b = 1.0 - t;  // L_0, L_1
        if (n == 0) {
            Ln = a;
            Lnm1 = 0;
            return;
        }
        for (int k = 1; k < n; ++k) {
            const double c = ((2.0 * k + 1.0 - t) * b - k * a) / (k + 1.0);
            a = b;
            b = c;
        }
        Ln = b;
        Lnm1 = a;
    };
    q.w.resize(N);
    for (int i = 0; i < N; ++i) {
        double& t = q.x[i];
        for (int it = 0; it < 3; ++it) {
            double Ln, Lm;
            laguerre(N, t, Ln, Lm);
            const double d = N * (Ln - Lm) / t;  // L_N'
            t -= Ln / d;
        }
        double Ln1, Ln;
        laguerre(N + 1, t, Ln1, Ln);
        q.w[i] = t / ((N + 1.0) * (N + 1.0) * Ln1 * Ln1);
    }
    return q;
}

// Total-degree Hermite basis in two variables.
class HermiteBasis2D {
public:
    explicit HermiteBasis2D(int K) : K_(K) {
        if (K < 2) throw ConfigError("Hermite truncation K must be >= 2");
        for (int d = 0; d < K; ++d)
            for (int k1 = d; k1 >= 0; --k1) modes_.push_back({k1, d - k1});
    }
    int K() const { return K_; }
    int size() const { return static_cast<int>(modes_.size()); }
    std::array<int, 2> mode(int i) const { return modes_[i]; }
    int degree(int i) const { return modes_[i][0] + modes_[i][1]; }
    // Index of (k1, k2); -1 when outside the truncation.
    int index(int k1, int k2) const {
        if (k1 < 0 || k2 < 0 || k1 + k2 >= K_) return -1;
        const int d = k1 + k2;
        return d * (d + 1) / 2 + (d - k1);
    }
    // First index of shell d.
    int shell_start(int d) const { return d * (d + 1) / 2; }

    // Diagonal of L_h: -(k1 + k2)/2.
    Eigen::VectorXd lh_diagonal() const {
        Eigen::VectorXd d(size());
        for (int i = 0; i < size(); ++i) d(i) = -0.5 * degree(i);
        return d;
    }

    // Matrix of d/dxi_axis from this basis to the basis of truncation Kout (>= K+1 keeps it exact).
    Eigen::MatrixXd derivative(int axis, const HermiteBasis2D& out) const {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(out.size(), size());
        for (int j = 0; j < size(); ++j) {
            auto [k1, k2] = modes_[j];
            const int k = axis == 0 ? k1 : k2;
            const int r = axis == 0 ? out.index(k1 + 1, k2) : out.index(k1, k2 + 1);
            if (r >= 0) D(r, j) = -std::sqrt(0.5 * (k + 1));
        }
        return D;
    }

    // Matrix of multiplication by xi_axis into the basis `out`.
    Eigen::MatrixXd position(int axis, const HermiteBasis2D& out) const {
        Eigen::MatrixXd X = Eigen::MatrixXd::Zero(out.size(), size());
        for (int j = 0; j < size(); ++j) {
            auto [k1, k2] = modes_[j];
            const int k = axis == 0 ? k1 : k2;
            const int up = axis == 0 ? out.index(k1 + 1, k2) : out.index(k1, k2 + 1);
            const int dn = axis == 0 ? out.index(k1 - 1, k2) : out.index(k1, k2 - 1);
            if (up >= 0) X(up, j) = std::sqrt(2.0 * (k + 1));
            if (dn >= 0) X(dn, j) = std::sqrt(2.0 * k);
        }
        return X;
    }

    // Rotation generator (xi2 d1 - xi1 d2) on scalars; it preserves each degree shell.
    Eigen::MatrixXd rotation_generator() const {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(size(), size());
        for (int j = 0; j < size(); ++j) {
            auto [k1, k2] = modes_[j];
            const int a = index(k1 + 1, k2 - 1), b = index(k1 - 1, k2 + 1);
            if (a >= 0) J(a, j) = -std::sqrt((k1 + 1.0) * k2);
            if (b >= 0) J(b, j) = std::sqrt(k1 * (k2 + 1.0));
        }
        return J;
    }

    // Samples of sum_i c_i phi_i on a grid (plain, not weighted, representation).
    std::vector<double> synthesize(const Eigen::VectorXd& c, const Grid2D& g) const {
        std::vector<double> out(g.size(), 0.0);
        std::vector<double> p(g.n * static_cast<std::size_t>(K_));
        for (int i = 0; i < g.n; ++i) weighted_hermite(g.coord(i), K_, p.data() + static_cast<std::size_t>(i) * K_);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                double s = 0;
                for (int q = 0; q < size(); ++q)
                    s += c(q) * p[static_cast<std::size_t>(i) * K_ + modes_[q][0]] *
                         p[static_cast<std::size_t>(j) * K_ + modes_[q][1]];
                out[g.idx(i, j)] = s;
            }
        return out;
    }

private:
    int K_;
    std::vector<std::array<int, 2>> modes_;
};

}  // namespace burgers
