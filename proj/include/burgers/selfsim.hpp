#pragma once

// Change of variables between the physical frame (x, t) and the self-similar
// frame (xi, tau): xi = sqrt(beta) x, omega = beta W, u = sqrt(beta) V.

#include <cmath>
#include <vector>

#include "burgers/grid.hpp"
#include "burgers/interp.hpp"

namespace burgers {

enum class Frame { Physical, SelfSimilar };

struct FramePoint {
    Frame frame;
    std::array<double, 3> coords;
    double time;
};

inline double to_selfsim_time(double t, const StrainParams& p) {
    if (!(t < p.t_star)) throw GuardError("blowup_time", "physical time must be below t_star");
    return -(p.mu - 1.0) * std::log1p(-t / p.t_star);
}

inline double from_selfsim_time(double tau, const StrainParams& p) {
    if (!(tau >= 0.0)) throw GuardError("negative_tau", "self-similar time must be nonnegative");
    return -p.t_star * std::expm1(-tau / (p.mu - 1.0));
}

inline FramePoint to_selfsim(const FramePoint& x, const StrainParams& p) {
    if (x.frame == Frame::SelfSimilar) return x;
    const double sb = std::sqrt(p.beta(x.time));
    return {Frame::SelfSimilar, {sb * x.coords[0], sb * x.coords[1], sb * x.coords[2]}, to_selfsim_time(x.time, p)};
}

inline FramePoint to_physical(const FramePoint& xi, const StrainParams& p) {
    if (xi.frame == Frame::Physical) return xi;
    const double t = from_selfsim_time(xi.time, p);
    const double sb = std::sqrt(p.beta(t));
    return {Frame::Physical, {xi.coords[0] / sb, xi.coords[1] / sb, xi.coords[2] / sb}, t};
}

namespace detail {
// Samples src at (s x1, s x2) for every target node, times amp.
inline ScalarField2D rescale2d(const ScalarField2D& src, const Grid2D& target, double s, double amp) {
    std::vector<double> pts(target.n);
    for (int i = 0; i < target.n; ++i) pts[i] = s * target.coord(i);
    const RowMatrix A = lagrange_matrix(horizontal_axis(src.grid), pts, OutOfRange::Throw);
    ScalarField2D out(target, src.weighted_repr);
    if (src.weighted_repr && s != 1.0)
        throw GuardError("weighted_repr", "rescaling a Gaussian-weighted field changes its weight");
    apply_separable(A, A, src.v.data(), src.grid.n, src.grid.n, out.v.data());
    for (double& x : out.v) x *= amp;
    return out;
}

inline VectorField3D rescale3d(const VectorField3D& src, const Grid3D& target, double s, double amp) {
    std::vector<double> ph(target.h2.n), pv(target.n3);
    for (int i = 0; i < target.h2.n; ++i) ph[i] = s * target.h2.coord(i);
    for (int k = 0; k < target.n3; ++k) pv[k] = s * target.z(k);
    const RowMatrix A = lagrange_matrix(horizontal_axis(src.grid.h2), ph, OutOfRange::Throw);
    const RowMatrix V = linear_matrix(vertical_axis(src.grid), pv);
    VectorField3D out(target);
    const int ns = src.grid.h2.n;
    std::vector<double> tmp(static_cast<std::size_t>(src.grid.n3) * target.h2.size());
    for (int c = 0; c < 3; ++c) {
        for (int k = 0; k < src.grid.n3; ++k)
            apply_separable(A, A, src.c[c].data() + k * src.grid.slice(), ns, ns, tmp.data() + k * target.h2.size());
        Eigen::Map<const RowMatrix> T(tmp.data(), src.grid.n3, static_cast<Eigen::Index>(target.h2.size()));
        Eigen::Map<RowMatrix> O(out.c[c].data(), target.n3, static_cast<Eigen::Index>(target.h2.size()));
        O.noalias() = amp * V * T;
    }
    return out;
}
}  // namespace detail

// omega(x, t) = beta W(sqrt(beta) x, tau(t)), resampled on a physical grid.
inline VectorField3D pullback_vorticity(const VectorField3D& W, double tau, const StrainParams& p,
                                        const Grid3D& physical) {
    const double beta = p.beta(from_selfsim_time(tau, p));
    return detail::rescale3d(W, physical, std::sqrt(beta), beta);
}
inline VectorField3D pushforward_vorticity(const VectorField3D& omega, double t, const StrainParams& p,
                                           const Grid3D& selfsim) {
    const double beta = p.beta(t);
    return detail::rescale3d(omega, selfsim, 1.0 / std::sqrt(beta), 1.0 / beta);
}
inline VectorField3D pullback_velocity(const VectorField3D& V, double tau, const StrainParams& p,
                                       const Grid3D& physical) {
    const double beta = p.beta(from_selfsim_time(tau, p));
    return detail::rescale3d(V, physical, std::sqrt(beta), std::sqrt(beta));
}
inline VectorField3D pushforward_velocity(const VectorField3D& u, double t, const StrainParams& p,
                                          const Grid3D& selfsim) {
    const double beta = p.beta(t);
    return detail::rescale3d(u, selfsim, 1.0 / std::sqrt(beta), 1.0 / std::sqrt(beta));
}

// Horizontal-only variants for scalar vertical vorticity.
inline ScalarField2D pullback_vorticity(const ScalarField2D& W, double tau, const StrainParams& p,
                                        const Grid2D& physical) {
    const double beta = p.beta(from_selfsim_time(tau, p));
    return detail::rescale2d(W, physical, std::sqrt(beta), beta);
}
inline ScalarField2D pushforward_vorticity(const ScalarField2D& omega, double t, const StrainParams& p,
                                           const Grid2D& selfsim) {
    const double beta = p.beta(t);
    return detail::rescale2d(omega, selfsim, 1.0 / std::sqrt(beta), 1.0 / beta);
}

}  // namespace burgers
