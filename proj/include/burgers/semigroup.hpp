#pragma once

// Exact semigroups of L_h = Delta' + xi'/2 . grad' + 1 and of
// L_3 = d_3^2 - chi xi_3 d_3, both realised as dense 1D operators so that
// the 2D and 3D actions are tensor products.

#include <cmath>
#include <functional>
#include <vector>

#include "burgers/grid.hpp"
#include "burgers/interp.hpp"
#include "burgers/weighted_spaces.hpp"

namespace burgers {

struct KernelParams {
    double tau;
    double chi;
    double a() const { return -std::expm1(-tau); }
    double a2chi() const { return -std::expm1(-2.0 * chi * tau); }
};

// Periodic heat multiplier e^{-a k^2} as a circulant matrix on n nodes of spacing h.
inline RowMatrix periodic_heat_matrix(int n, double h, double a) {
    const double P = n * h;
    std::vector<double> col(n, 0.0);
    for (int d = 0; d < n; ++d) {
        double s = 0;
        for (int m = 0; m < n; ++m) {
            const int km = signed_mode(m, n);
            const double k = 2 * pi * km / P;
            s += std::exp(-a * k * k) * std::cos(k * d * h);
        }
        col[d] = s / n;
    }
    RowMatrix H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H(i, j) = col[((i - j) % n + n) % n];
    return H;
}

// e^{tau L_h} on a Grid2D: f -> e^tau * B f B^T with B = heat(a) * dilation(e^{tau/2}).
class LhSemigroup {
public:
    LhSemigroup(const Grid2D& g, double tau) : g_(g), tau_(tau) {
        if (!(tau > 0)) throw GuardError("tau_positive", "semigroup time must be positive");
        const double s = std::exp(0.5 * tau);
        if (s > g.R / (10.0 * g.h()))
            throw GuardError("dilation_resolution", "e^{tau/2} exceeds R/(10h); refine the grid or shorten tau");
        std::vector<double> pts(g.n);
        for (int i = 0; i < g.n; ++i) pts[i] = s * g.coord(i);
        const RowMatrix D = fourier_matrix(horizontal_axis(g), pts, OutOfRange::Zero);
        B_ = periodic_heat_matrix(g.n, g.h(), -std::expm1(-tau)) * D;
        B_ *= std::exp(0.5 * tau);  // e^tau split over the two factors
    }

    double tau() const { return tau_; }
    const RowMatrix& factor() const { return B_; }

    void apply(const double* f, double* out) const { apply_separable(B_, B_, f, g_.n, g_.n, out); }

    ScalarField2D operator()(const ScalarField2D& f) const {
        if (f.weighted_repr) throw GuardError("weighted_repr", "apply the kernel to plain samples");
        if (tail_fraction(f.v.data(), g_, WeightExponent::finite(0), false) > tail_fraction_limit)
            throw GuardError("tail_mass", "input does not decay inside the grid");
        ScalarField2D out(g_);
        apply(f.v.data(), out.v.data());
        return out;
    }

private:
    Grid2D g_;
    double tau_;
    RowMatrix B_;
};

inline ScalarField2D apply_Lh_semigroup(const ScalarField2D& f, double tau) { return LhSemigroup(f.grid, tau)(f); }

// Gaussian average over a uniform trapezoid rule of nodes covering center +- 8 sigma,
// with f read through 8-point Lagrange interpolation and constant extension.
namespace detail {
inline void gaussian_rows(const UniformAxis& ax, const std::vector<double>& centers, double sigma, RowMatrix& M) {
    M = RowMatrix::Zero(static_cast<Eigen::Index>(centers.size()), ax.n);
    const double dx = std::min(sigma / 4.0, ax.h / 2.0);
    const int half = static_cast<int>(std::ceil(8.0 * sigma / dx));
    std::vector<double> nodes(2 * half + 1), wts(2 * half + 1);
    for (std::size_t i = 0; i < centers.size(); ++i) {
        double sum = 0;
        for (int q = -half; q <= half; ++q) {
            const double e = q * dx;
            nodes[q + half] = centers[i] + e;
            wts[q + half] = std::exp(-0.5 * e * e / (sigma * sigma));
            sum += wts[q + half];
        }
        // Exact normalisation of the trapezoid weights; the continuous sum differs by < 1e-15.
        const RowMatrix P = lagrange_matrix(ax, nodes, OutOfRange::Clamp);
        for (int q = 0; q <= 2 * half; ++q) M.row(static_cast<Eigen::Index>(i)) += (wts[q] / sum) * P.row(q);
    }
}
}  // namespace detail

// e^{tau L_3} as an n3 x n3 matrix acting on samples over [-Z, Z).
inline RowMatrix L3_semigroup_matrix(const UniformAxis& ax, const KernelParams& kp) {
    if (!(kp.tau > 0)) throw GuardError("tau_positive", "semigroup time must be positive");
    const double sigma = std::sqrt(kp.a2chi() / kp.chi);
    std::vector<double> c(ax.n);
    const double contract = std::exp(-kp.chi * kp.tau);
    for (int i = 0; i < ax.n; ++i) c[i] = contract * ax.node(i);
    RowMatrix M;
    detail::gaussian_rows(ax, c, sigma, M);
    return M;
}

inline std::vector<double> apply_L3_semigroup(const std::vector<double>& f, const UniformAxis& ax,
                                              const KernelParams& kp) {
    const RowMatrix M = L3_semigroup_matrix(ax, kp);
    Eigen::Map<const Eigen::VectorXd> fv(f.data(), ax.n);
    Eigen::VectorXd out = M * fv;
    return {out.data(), out.data() + out.size()};
}

// The unscaled form: Gaussian of variance 2(e^{2 chi tau}-1)/(2 chi) in eta, f read at eta e^{-chi tau}.
inline std::vector<double> apply_L3_semigroup_unscaled(const std::function<double(double)>& f,
                                                       const std::vector<double>& xs, const KernelParams& kp) {
    const double var = (std::exp(2 * kp.chi * kp.tau) - 1.0) / kp.chi;
    const double sigma = std::sqrt(var);
    const double dx = sigma / 8.0;
    const int half = 8 * 8;
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double s = 0, norm = 0;
        for (int q = -half; q <= half; ++q) {
            const double eta = xs[i] + q * dx;
            const double w = std::exp(-0.5 * (q * dx) * (q * dx) / var);
            s += w * f(eta * std::exp(-kp.chi * kp.tau));
            norm += w;
        }
        out[i] = s / norm;
    }
    return out;
}

// tau -> infinity limit: (chi / 2 pi)^{1/2} int e^{-chi eta^2 / 2} f(eta) d eta.
inline double L3_longtime_limit(const std::vector<double>& f, const UniformAxis& ax, double chi) {
    RowMatrix M;
    detail::gaussian_rows(ax, {0.0}, 1.0 / std::sqrt(chi), M);
    Eigen::Map<const Eigen::VectorXd> fv(f.data(), ax.n);
    return (M * fv)(0);
}

}  // namespace burgers
