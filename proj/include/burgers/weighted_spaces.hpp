#pragma once

// Weights rho_m, weighted L^2 norms and moments on uniform grids.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "burgers/core_fields.hpp"
#include "burgers/grid.hpp"

namespace burgers {

struct WeightExponent {
    double m = 4.0;
    bool infinite = false;

    static WeightExponent finite(double m) {
        if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("weight exponent m must be finite and >= 0");
        return {m, false};
    }
    static WeightExponent inf() { return {std::numeric_limits<double>::infinity(), true}; }

    // Spaces with zero mean need m > 1.
    void require_space() const {
        if (!infinite && !(m > 1.0)) throw ConfigError("weight exponent m must exceed 1");
    }
    std::string str() const { return infinite ? "inf" : std::to_string(m); }
};

// rho_m evaluated at r = |xi'|^2.
inline double rho_m(double r, const WeightExponent& w) {
    if (r < 0) throw GuardError("rho_m", "negative argument");
    if (w.infinite) return std::exp(0.25 * r);
    if (w.m == 0.0) return 1.0;
    return std::pow(1.0 + r / (4.0 * w.m), w.m);
}

struct Moments {
    double zeroth = 0;
    std::array<double, 2> first{0, 0};
};

inline constexpr double tail_fraction_limit = 1e-8;

namespace detail {
// Weighted squared norm of one slice plus the part from the 2-cell edge band.
inline std::pair<double, double> slice_norm2(const double* v, const Grid2D& g, const WeightExponent& m,
                                             bool weighted_repr) {
    if (m.infinite && !weighted_repr)
        throw GuardError("weighted_repr", "m = infinity norms need the Gaussian-weighted representation");
    const double h2 = g.h() * g.h();
    double total = 0, band = 0;
    for (int i = 0; i < g.n; ++i) {
        const double x1 = g.coord(i);
        for (int j = 0; j < g.n; ++j) {
            const double x2 = g.coord(j);
            const double s = v[g.idx(i, j)];
            double w;
            if (m.infinite) {
                w = 1.0;  // samples already carry e^{r/8}
            } else {
                const double rep = weighted_repr ? std::exp(-0.125 * (x1 * x1 + x2 * x2)) : 1.0;
                w = rho_m(x1 * x1 + x2 * x2, m) * rep * rep;
            }
            const double c = s * s * w * h2;
            total += c;
            if (i < 2 || j < 2 || i >= g.n - 2 || j >= g.n - 2) band += c;
        }
    }
    return {total, band};
}
}  // namespace detail

// Share of the squared norm carried by the outermost 2-cell band.
inline double tail_fraction(const double* v, const Grid2D& g, const WeightExponent& m, bool weighted) {
    const auto [t, b] = detail::slice_norm2(v, g, m, weighted);
    return t > 0 ? b / t : 0.0;
}

inline double norm_L2m(const double* v, const Grid2D& g, const WeightExponent& m, bool weighted = false,
                       bool check_tail = true) {
    const auto [t, b] = detail::slice_norm2(v, g, m, weighted);
    if (check_tail && t > 0 && b > tail_fraction_limit * t)
        throw GuardError("tail_mass", "edge band carries " + std::to_string(b / t) + " of the norm^2");
    return std::sqrt(t);
}

inline double norm_L2m(const ScalarField2D& w, const WeightExponent& m, bool check_tail = true) {
    return norm_L2m(w.v.data(), w.grid, m, w.weighted_repr, check_tail);
}

// Multiply by e^{|xi'|^2/8} to obtain the m = infinity representation, and back.
inline ScalarField2D to_weighted(const ScalarField2D& w) {
    if (w.weighted_repr) return w;
    ScalarField2D out = w;
    out.weighted_repr = true;
    for (int i = 0; i < w.grid.n; ++i)
        for (int j = 0; j < w.grid.n; ++j) {
            const double x1 = w.grid.coord(i), x2 = w.grid.coord(j);
            out(i, j) *= std::exp(0.125 * (x1 * x1 + x2 * x2));
        }
    return out;
}
inline ScalarField2D from_weighted(const ScalarField2D& w) {
    if (!w.weighted_repr) return w;
    ScalarField2D out = w;
    out.weighted_repr = false;
    for (int i = 0; i < w.grid.n; ++i)
        for (int j = 0; j < w.grid.n; ++j) {
            const double x1 = w.grid.coord(i), x2 = w.grid.coord(j);
            out(i, j) *= std::exp(-0.125 * (x1 * x1 + x2 * x2));
        }
    return out;
}

inline Moments moments(const double* v, const Grid2D& g) {
    Moments out;
    const double h2 = g.h() * g.h();
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const double s = v[g.idx(i, j)] * h2;
            out.zeroth += s;
            out.first[0] += g.coord(i) * s;
            out.first[1] += g.coord(j) * s;
        }
    return out;
}
inline Moments moments(const ScalarField2D& w) {
    if (w.weighted_repr) return moments(from_weighted(w));
    return moments(w.v.data(), w.grid);
}

inline double moment_tolerance(double norm) { return 1e-10 * (1.0 + norm); }

inline bool in_L2_zero(const ScalarField2D& w, const WeightExponent& m) {
    m.require_space();
    return std::abs(moments(w).zeroth) < moment_tolerance(norm_L2m(w, m));
}

// Subtract (int w) g so the result has zero mean and keeps its decay.
inline ScalarField2D project_zero_mean(const ScalarField2D& w) {
    const bool weighted = w.weighted_repr;
    ScalarField2D out = from_weighted(w);
    const double c = moments(out).zeroth;
    for (int i = 0; i < out.grid.n; ++i)
        for (int j = 0; j < out.grid.n; ++j) out(i, j) -= c * eval_g(out.grid.coord(i), out.grid.coord(j));
    return weighted ? to_weighted(out) : out;
}

// ---- xi_3-uniform norms ------------------------------------------------------

// sup over slices |xi_3| <= window of the slice L^2(m) norm of a scalar 3D field.
inline double norm_X(const std::vector<double>& w, const Grid3D& g, const WeightExponent& m,
                     double window = std::numeric_limits<double>::infinity(), bool check_tail = true) {
    double best = 0;
    for (int k = 0; k < g.n3; ++k) {
        if (std::abs(g.z(k)) > window) continue;
        best = std::max(best, norm_L2m(w.data() + k * g.slice(), g.h2, m, false, check_tail));
    }
    return best;
}

// sup over slices of the L^2(m)^3 norm of a vector field.
inline double norm_Xbb(const VectorField3D& w, const WeightExponent& m,
                       double window = std::numeric_limits<double>::infinity(), bool check_tail = true) {
    const auto& g = w.grid;
    double best = 0;
    for (int k = 0; k < g.n3; ++k) {
        if (std::abs(g.z(k)) > window) continue;
        double s2 = 0;
        for (int c = 0; c < 3; ++c) {
            const double nc = norm_L2m(w.c[c].data() + k * g.slice(), g.h2, m, w.weighted_repr, check_tail);
            s2 += nc * nc;
        }
        best = std::max(best, std::sqrt(s2));
    }
    return best;
}

// Largest slice mean of the third component relative to the moment tolerance.
inline double max_third_slice_mean(const VectorField3D& w) {
    const auto& g = w.grid;
    double worst = 0;
    for (int k = 0; k < g.n3; ++k)
        worst = std::max(worst, std::abs(moments(w.c[2].data() + k * g.slice(), g.h2).zeroth));
    return worst;
}

// Membership test for XX(m): finite norm plus zero slice means of the third component.
inline bool in_Xbb(const VectorField3D& w, const WeightExponent& m) {
    m.require_space();
    const double nrm = norm_Xbb(w, m);
    return max_third_slice_mean(w) < moment_tolerance(nrm);
}

}  // namespace burgers
