#pragma once

// Closed-form Burgers-type solutions and their Navier-Stokes residuals.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "burgers/grid.hpp"

namespace burgers {

using Vec3 = std::array<double, 3>;

// ---- Gaussian vorticity profile g and its derivatives ----------------------

inline double eval_g(double x1, double x2) {
    return std::exp(-0.25 * (x1 * x1 + x2 * x2)) / (4.0 * pi);
}
inline double eval_dg(int axis, double x1, double x2) {
    return -0.5 * (axis == 0 ? x1 : x2) * eval_g(x1, x2);
}
// d^2 g / dx_a dx_b
inline double eval_d2g(int a, int b, double x1, double x2) {
    const double xa = a == 0 ? x1 : x2, xb = b == 0 ? x1 : x2;
    return (0.25 * xa * xb - (a == b ? 0.5 : 0.0)) * eval_g(x1, x2);
}

// ---- Radial profile f(s) = (1 - e^{-s/4}) / (2 pi s), s = |x'|^2 ------------

struct RadialProfile {
    double f, df, d2f;  // f, f', f'' in s
};

namespace detail {
// Below this s the Taylor series replaces the closed form (cancellation guard).
inline constexpr double series_cut = 1.0;

inline RadialProfile radial_series(double s) {
    // (1 - e^{-s/4}) / s = sum_j (-1)^j s^j / (4^{j+1} (j+1)!)
    double f = 0, df = 0, d2f = 0;
    double c = 0.25;  // coefficient of s^j
    for (int j = 0; j < 24; ++j) {
        f += c * std::pow(s, j);
        if (j >= 1) df += j * c * std::pow(s, j - 1);
        if (j >= 2) d2f += j * (j - 1) * c * std::pow(s, j - 2);
        c *= -1.0 / (4.0 * (j + 2));
    }
    const double k = 1.0 / (2.0 * pi);
    return {k * f, k * df, k * d2f};
}
}  // namespace detail

inline RadialProfile radial_profile(double s) {
    if (s < detail::series_cut) return detail::radial_series(s);
    const double e = std::exp(-0.25 * s);
    const double om = -std::expm1(-0.25 * s);  // 1 - e^{-s/4}
    const double F = om / s;
    const double dF = 0.25 * e / s - om / (s * s);
    const double d2F = -e / (16.0 * s) - 0.5 * e / (s * s) + 2.0 * om / (s * s * s);
    const double k = 1.0 / (2.0 * pi);
    return {k * F, k * dF, k * d2F};
}

// ---- Oseen velocity U^G ------------------------------------------------------

inline Vec3 eval_UG(double x1, double x2) {
    const double f = radial_profile(x1 * x1 + x2 * x2).f;
    return {-f * x2, f * x1, 0.0};
}

// Jacobian J[i][k] = d U_i / d x_k for the horizontal components.
inline std::array<std::array<double, 2>, 2> eval_grad_UG(double x1, double x2) {
    const auto p = radial_profile(x1 * x1 + x2 * x2);
    return {{{-2.0 * x1 * x2 * p.df, -p.f - 2.0 * x2 * x2 * p.df},
             {p.f + 2.0 * x1 * x1 * p.df, 2.0 * x1 * x2 * p.df}}};
}

// Laplacian of the horizontal components: Delta U = (-x2, x1) (8 f' + 4 s f'').
inline std::array<double, 2> eval_lap_UG(double x1, double x2) {
    const double s = x1 * x1 + x2 * x2;
    const auto p = radial_profile(s);
    const double c = 8.0 * p.df + 4.0 * s * p.d2f;
    return {-x2 * c, x1 * c};
}

// Curl of U^G (only the vertical component is nonzero): 2f + 2 s f'.
inline double eval_curl_UG(double x1, double x2) {
    const double s = x1 * x1 + x2 * x2;
    const auto p = radial_profile(s);
    return 2.0 * p.f + 2.0 * s * p.df;
}

// Second derivatives d^2 U_i / dx_a dx_b.
inline double eval_d2UG(int i, int a, int b, double x1, double x2) {
    const double s = x1 * x1 + x2 * x2;
    const auto p = radial_profile(s);
    const double x[2] = {x1, x2};
    // U_i = f(s) * e_i(x) with e_0 = -x2, e_1 = x1 (linear).
    const double ei = i == 0 ? -x2 : x1;
    const double dei[2] = {i == 0 ? 0.0 : 1.0, i == 0 ? -1.0 : 0.0};
    const double fab = 4.0 * x[a] * x[b] * p.d2f + (a == b ? 2.0 * p.df : 0.0);
    return fab * ei + 2.0 * x[a] * p.df * dei[b] + 2.0 * x[b] * p.df * dei[a];
}

// ---- Pressure integral -----------------------------------------------------

// I(a) = int_a^inf (1/r)(1 - e^{-r/4}) e^{-r/4} dr by adaptive Gauss-Kronrod.
inline double pressure_integral(double a) {
    if (a < 0) throw GuardError("pressure_integral", "negative lower limit");
    auto integrand = [](double r) {
        if (r < 1e-8) return 0.25 - 0.1875 * r;
        return -std::expm1(-0.25 * r) * std::exp(-0.25 * r) / r;
    };
    using boost::math::quadrature::gauss_kronrod;
    double err = 0;
    const double cut = std::max(a, 200.0);
    double head = 0;
    if (a < cut) head = gauss_kronrod<double, 31>::integrate(integrand, a, cut, 15, 1e-12, &err);
    const double tail = gauss_kronrod<double, 31>::integrate(
        integrand, cut, std::numeric_limits<double>::infinity(), 10, 1e-12, &err);
    return head + tail;
}

// ---- Explicit solutions ------------------------------------------------------

struct FlowSample {
    Vec3 velocity;
    double pressure;
    Vec3 vorticity;
};

// Steady Burgers vortex with strain gamma and circulation alpha.
inline FlowSample eval_burgers(const Vec3& x, double alpha, double gamma) {
    if (!(gamma > 0)) throw ConfigError("gamma must be positive");
    const double sg = std::sqrt(gamma);
    const Vec3 U = eval_UG(sg * x[0], sg * x[1]);
    FlowSample out{};
    out.velocity = {-0.5 * gamma * x[0] + alpha * sg * U[0], -0.5 * gamma * x[1] + alpha * sg * U[1],
                    gamma * x[2]};
    double v2 = 0;
    for (double c : out.velocity) v2 += c * c;
    const double r2 = x[0] * x[0] + x[1] * x[1];
    out.pressure = -0.5 * v2 - alpha * alpha * gamma / (16.0 * pi * pi) * pressure_integral(gamma * r2);
    out.vorticity = {0.0, 0.0, alpha * gamma * eval_g(sg * x[0], sg * x[1])};
    return out;
}

// Linear strain rho(t) (-x1, -x2, 2 x3) with its quadratically growing pressure.
inline FlowSample eval_parasitic(const Vec3& x, double rho, double drho) {
    FlowSample out{};
    out.velocity = {-rho * x[0], -rho * x[1], 2.0 * rho * x[2]};
    double v2 = 0;
    for (double c : out.velocity) v2 += c * c;
    const double dtv_dot_x = drho * (-x[0] * x[0] - x[1] * x[1] + 2.0 * x[2] * x[2]);
    out.pressure = -0.5 * v2 - 0.5 * dtv_dot_x;
    out.vorticity = {0, 0, 0};
    return out;
}

// Singular Burgers vortex: blows up at t_star.
inline FlowSample eval_singular_burgers(const Vec3& x, double t, const StrainParams& p) {
    const double beta = p.beta(t);
    const double rho = p.mu / (2.0 * (p.t_star - t));
    const double drho = p.mu / (2.0 * (p.t_star - t) * (p.t_star - t));
    const double sb = std::sqrt(beta);
    const Vec3 U = eval_UG(sb * x[0], sb * x[1]);
    FlowSample out{};
    out.velocity = {-rho * x[0] + p.alpha * sb * U[0], -rho * x[1] + p.alpha * sb * U[1], 2.0 * rho * x[2]};
    double v2 = 0;
    for (double c : out.velocity) v2 += c * c;
    const double dtv_dot_x = drho * (-x[0] * x[0] - x[1] * x[1] + 2.0 * x[2] * x[2]);
    const double r2 = x[0] * x[0] + x[1] * x[1];
    out.pressure = -0.5 * dtv_dot_x - 0.5 * v2 -
                   p.alpha * p.alpha * beta / (16.0 * pi * pi) * pressure_integral(beta * r2);
    out.vorticity = {0.0, 0.0, p.alpha * beta * eval_g(sb * x[0], sb * x[1])};
    return out;
}

// Second evaluation path: strain part plus alpha * U_mu(x', t).
inline Vec3 eval_singular_velocity_split(const Vec3& x, double t, const StrainParams& p) {
    const double beta = p.beta(t);
    const double rho = p.mu / (2.0 * (p.t_star - t));
    const auto lin = eval_parasitic(x, rho, 0.0).velocity;
    const double sb = std::sqrt(beta);
    const Vec3 Umu = [&] {
        Vec3 u = eval_UG(sb * x[0], sb * x[1]);
        for (double& c : u) c *= sb;
        return u;
    }();
    return {lin[0] + p.alpha * Umu[0], lin[1] + p.alpha * Umu[1], lin[2]};
}

// ---- Residuals -------------------------------------------------------------

// max over interior points of |Delta U + x'/2 . grad U + U/2| with analytic derivatives.
inline double oseen_identity_residual(const Grid2D& g) {
    double res = 0;
    for (int i = 2; i < g.n - 2; ++i)
        for (int j = 2; j < g.n - 2; ++j) {
            const double x1 = g.coord(i), x2 = g.coord(j);
            const auto lap = eval_lap_UG(x1, x2);
            const auto J = eval_grad_UG(x1, x2);
            const auto U = eval_UG(x1, x2);
            for (int c = 0; c < 2; ++c) {
                const double r = lap[c] + 0.5 * (x1 * J[c][0] + x2 * J[c][1]) + 0.5 * U[c];
                res = std::max(res, std::abs(r));
            }
        }
    return res;
}

// Same identity with second-order central differences of sampled U^G.
inline double oseen_identity_residual_fd2(const Grid2D& g) {
    const double h = g.h();
    double res = 0;
    for (int i = 2; i < g.n - 2; ++i)
        for (int j = 2; j < g.n - 2; ++j) {
            const double x1 = g.coord(i), x2 = g.coord(j);
            const auto U0 = eval_UG(x1, x2);
            const auto Ue = eval_UG(x1 + h, x2), Uw = eval_UG(x1 - h, x2);
            const auto Un = eval_UG(x1, x2 + h), Us = eval_UG(x1, x2 - h);
            for (int c = 0; c < 2; ++c) {
                const double lap = (Ue[c] + Uw[c] + Un[c] + Us[c] - 4.0 * U0[c]) / (h * h);
                const double d1 = (Ue[c] - Uw[c]) / (2 * h), d2 = (Un[c] - Us[c]) / (2 * h);
                res = std::max(res, std::abs(lap + 0.5 * (x1 * d1 + x2 * d2) + 0.5 * U0[c]));
            }
        }
    return res;
}

// max |U^G x curl U^G| over interior points, analytic derivatives.
inline double oseen_cross_residual(const Grid2D& g) {
    double res = 0;
    for (int i = 2; i < g.n - 2; ++i)
        for (int j = 2; j < g.n - 2; ++j) {
            const double x1 = g.coord(i), x2 = g.coord(j);
            const auto U = eval_UG(x1, x2);
            const double w = eval_curl_UG(x1, x2);
            // (U1,U2,0) x (0,0,w) = (U2 w, -U1 w, 0)
            res = std::max(res, std::hypot(U[1] * w, U[0] * w));
        }
    return res;
}

using FlowFn = std::function<FlowSample(const Vec3&, double)>;

// Box for residual checks: n x n horizontal points on [-L, L)^2 at height z0.
struct ResidualBox {
    double L = 3.0;
    int n = 128;
    double z0 = 0.5;
};

namespace detail {
inline double d1_4(const double* f, double h) {  // f[0..4] at offsets -2..2
    return (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
}
inline double d2_4(const double* f, double h) {
    return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
}
}  // namespace detail

// max over interior points (2-cell band excluded) of
// |d_t V + V.grad V - Delta V + grad P| with fourth-order space differences and
// a centered time difference of step dt (dt = 0 means steady).
inline double ns_residual(const FlowFn& flow, double t, double dt, const ResidualBox& box) {
    const int n = box.n;
    const double h = 2.0 * box.L / n;
    const int P = 5;  // vertical stencil planes
    std::vector<double> V[3], Pr;
    for (auto& a : V) a.assign(static_cast<std::size_t>(n) * n * P, 0.0);
    Pr.assign(static_cast<std::size_t>(n) * n * P, 0.0);
    auto id = [n](int k, int i, int j) { return (static_cast<std::size_t>(k) * n + i) * n + j; };
    for (int k = 0; k < P; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Vec3 x{-box.L + i * h, -box.L + j * h, box.z0 + (k - 2) * h};
                const auto s = flow(x, t);
                for (int c = 0; c < 3; ++c) V[c][id(k, i, j)] = s.velocity[c];
                Pr[id(k, i, j)] = s.pressure;
            }
    double res = 0;
    double buf[5];
    for (int i = 2; i < n - 2; ++i)
        for (int j = 2; j < n - 2; ++j) {
            const Vec3 x{-box.L + i * h, -box.L + j * h, box.z0};
            Vec3 dtV{0, 0, 0};
            if (dt > 0) {
                const auto a = flow(x, t + dt).velocity, b = flow(x, t - dt).velocity;
                for (int c = 0; c < 3; ++c) dtV[c] = (a[c] - b[c]) / (2 * dt);
            }
            // gradients of each component along each axis
            auto along = [&](const std::vector<double>& f, int axis, bool second) {
                for (int o = -2; o <= 2; ++o) {
                    const int ii = i + (axis == 0 ? o : 0), jj = j + (axis == 1 ? o : 0), kk = 2 + (axis == 2 ? o : 0);
                    buf[o + 2] = f[id(kk, ii, jj)];
                }
                return second ? detail::d2_4(buf, h) : detail::d1_4(buf, h);
            };
            const std::size_t c0 = id(2, i, j);
            for (int c = 0; c < 3; ++c) {
                double adv = 0, lap = 0;
                for (int a = 0; a < 3; ++a) {
                    adv += V[a][c0] * along(V[c], a, false);
                    lap += along(V[c], a, true);
                }
                const double r = dtV[c] + adv - lap + along(Pr, c, false);
                res = std::max(res, std::abs(r));
            }
        }
    return res;
}

inline double burgers_steady_residual(double alpha, double gamma, const ResidualBox& box) {
    return ns_residual([=](const Vec3& x, double) { return eval_burgers(x, alpha, gamma); }, 0.0, 0.0, box);
}

// The box is given in self-similar units and scaled by 1/sqrt(beta) to track the core.
inline double singular_burgers_residual(const StrainParams& p, double t, ResidualBox box) {
    const double sb = std::sqrt(p.beta(t));
    box.L /= sb;
    box.z0 /= sb;
    const double dt = 1e-4 * (p.t_star - t);
    return ns_residual([&p](const Vec3& x, double tt) { return eval_singular_burgers(x, tt, p); }, t, dt, box);
}

}  // namespace burgers
