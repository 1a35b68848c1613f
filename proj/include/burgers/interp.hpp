#pragma once

// Resampling matrices on uniform 1D grids. Tensor products of these give the
// separable interpolation used by the frame change and the dilation kernels.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "burgers/grid.hpp"

namespace burgers {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct UniformAxis {
    double x0;  // first node
    double h;
    int n;
    double node(int i) const { return x0 + i * h; }
    double last() const { return x0 + (n - 1) * h; }
};

enum class OutOfRange { Zero, Throw, Clamp };

inline constexpr int lagrange_points = 8;

// Row weights of an 8-point Lagrange interpolant at x. The stencil is shifted
// inward near the ends so that it never leaves the grid.
inline void lagrange_row(const UniformAxis& ax, double x, int& start, double* w) {
    const int p = lagrange_points;
    const double u = (x - ax.x0) / ax.h;
    start = static_cast<int>(std::floor(u)) - (p / 2 - 1);
    start = std::clamp(start, 0, ax.n - p);
    for (int a = 0; a < p; ++a) {
        double num = 1.0, den = 1.0;
        for (int b = 0; b < p; ++b) {
            if (b == a) continue;
            num *= u - (start + b);
            den *= static_cast<double>(a - b);
        }
        w[a] = num / den;
    }
}

// Dense matrix M with (M f)_i = f(targets_i) for samples f on ax.
inline RowMatrix lagrange_matrix(const UniformAxis& ax, const std::vector<double>& targets, OutOfRange policy,
                                 const char* guard = "outside_source_grid") {
    RowMatrix M = RowMatrix::Zero(static_cast<Eigen::Index>(targets.size()), ax.n);
    const double eps = 1e-12 * ax.h;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        double x = targets[i];
        if (x < ax.x0 - eps || x > ax.last() + eps) {
            if (policy == OutOfRange::Throw) throw GuardError(guard, "resampling point outside the source grid");
            if (policy == OutOfRange::Zero) continue;
            x = std::clamp(x, ax.x0, ax.last());
        }
        int s;
        double w[lagrange_points];
        lagrange_row(ax, x, s, w);
        for (int a = 0; a < lagrange_points; ++a) M(static_cast<Eigen::Index>(i), s + a) = w[a];
    }
    return M;
}

// Trigonometric interpolation on the periodic extension of ax (period n h):
// weight sin(pi u) / (n tan(pi u / n)) at offset u in grid units, even n.
// Spectrally accurate for fields that vanish at the box edge.
inline RowMatrix fourier_matrix(const UniformAxis& ax, const std::vector<double>& targets, OutOfRange policy) {
    RowMatrix M = RowMatrix::Zero(static_cast<Eigen::Index>(targets.size()), ax.n);
    const double eps = 1e-12 * ax.h;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        double x = targets[i];
        if (x < ax.x0 - eps || x > ax.last() + eps) {
            if (policy == OutOfRange::Throw) throw GuardError("outside_source_grid", "resampling point outside the source grid");
            if (policy == OutOfRange::Zero) continue;
            x = std::clamp(x, ax.x0, ax.last());
        }
        const double u0 = (x - ax.x0) / ax.h;
        const double r = u0 - std::round(u0);
        if (std::abs(r) < 1e-13) {  // on a node
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(std::lround(u0)) % ax.n) = 1.0;
            continue;
        }
        for (int j = 0; j < ax.n; ++j) {
            const double u = u0 - j;
            M(static_cast<Eigen::Index>(i), j) = std::sin(pi * u) / (ax.n * std::tan(pi * u / ax.n));
        }
    }
    return M;
}

// Piecewise-linear resampling with constant extension beyond the ends.
inline RowMatrix linear_matrix(const UniformAxis& ax, const std::vector<double>& targets) {
    RowMatrix M = RowMatrix::Zero(static_cast<Eigen::Index>(targets.size()), ax.n);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double x = std::clamp(targets[i], ax.x0, ax.last());
        const double u = (x - ax.x0) / ax.h;
        int k = std::min(static_cast<int>(std::floor(u)), ax.n - 2);
        const double t = u - k;
        M(static_cast<Eigen::Index>(i), k) += 1.0 - t;
        M(static_cast<Eigen::Index>(i), k + 1) += t;
    }
    return M;
}

inline UniformAxis horizontal_axis(const Grid2D& g) { return {-g.R, g.h(), g.n}; }
inline UniformAxis vertical_axis(const Grid3D& g) { return {-g.Z, g.h3(), g.n3}; }

// out = A * F * B^T for an n x n row-major slice F.
inline void apply_separable(const RowMatrix& A, const RowMatrix& B, const double* F, int rows_in, int cols_in,
                            double* out) {
    Eigen::Map<const RowMatrix> Fm(F, rows_in, cols_in);
    Eigen::Map<RowMatrix> Om(out, A.rows(), B.rows());
    Om.noalias() = A * Fm * B.transpose();
}

}  // namespace burgers
